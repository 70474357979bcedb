#pragma once

#include "lcp/body.hpp"
#include "lcp/estimate.hpp"
#include "lcp/measure.hpp"

#include <string>
#include <vector>

namespace lcp {

// mu-perimeter of a convex body: the integral of the density over the
// boundary. `method` is "closed-form" (uniform measures clipped exactly up
// to dimension six or when A lies in the support, radial measures on
// centered balls), "facet-integral" (Monte Carlo on the
// facets), "radial-boundary" (see perimeter_radial) or "sphere" (Monte
// Carlo over a ball's sphere). `stderr` is zero
// exactly when `exact`.
struct PerimeterResult {
  double value = 0.0;
  double stderr = 0.0;
  long samples = 0;
  uint64_t seed = 0;
  std::string method;
  bool exact = false;
};

// The facet route spends cfg.samples points in total, split in proportion to
// facet area with at least 64 per facet. On the boundary of a uniform
// measure's support the density takes its value inside the support.
PerimeterResult perimeter(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg);
// The facet route alone, skipping the closed forms.
PerimeterResult facet_perimeter(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg);

// Boundary integral through uniform directions from the Chebyshev center,
// weighted by the surface element. Unbiased and free of facet
// triangulations; perimeter() switches to it for polytopes in dimension
// seven and up with more than 300 vertices (method "radial-boundary").
PerimeterResult perimeter_radial(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg);

// f(a-) + f(b+) for the interval [a, b]. `at_jump` is set when an endpoint
// sits where the density jumps (the support boundary); the outside limit,
// zero, is used there.
struct Perimeter1D {
  double value = 0.0;
  bool at_jump = false;
};
Perimeter1D perimeter_1d(const Measure1D& mu, double a, double b);

// Gamma of the uniform measure on an isotropic body (volume one, centered,
// covariance L^2 I, checked to 1e-6): L S(K), with the bound sqrt(n/(n+2)) n.
struct GammaUniform {
  double value = 0.0;
  double L = 0.0;
  double S = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};
GammaUniform gamma_uniform(const ConvexBody& K);

// 2 sup f.
double gamma_1d(const Measure1D& mu);

// Finite-difference perimeter (mu(A + eps B) - mu(A)) / eps on a grid of
// eps from one sample set. Distances come from Euclidean projection onto A.
struct FdPoint {
  double eps = 0.0;
  Estimate estimate;
  long unconverged = 0;  // projections that missed the tolerance
  std::string error;     // nonempty when the point is unusable
};
struct FdResult {
  std::vector<FdPoint> points;
  // Richardson extrapolation on the two smallest eps, with |extrapolated -
  // smallest-eps value| as a model error.
  double extrapolated = 0.0;
  double extrapolated_stderr = 0.0;
  double model_error = 0.0;
};
FdResult perimeter_fd(const Measure& mu, const ConvexBody& A, std::vector<double> eps_grid,
                      const SamplerConfig& cfg);

// Lower bound on Gamma(mu) by maximizing perimeter() over body families:
// "dilates" (dilates of level sets or of the support), "gallery" (scaled
// simplex, cube and cross-polytope), "random" (random H-polytopes),
// "slabs" (coordinate slabs, intervals near the mode in dimension one) and
// "balls" (balls centered at the mode).
struct GammaTraceRow {
  std::string family;
  std::string body;
  double value = 0.0;
  double stderr = 0.0;
};
struct GammaSearchResult {
  PerimeterResult best;
  ConvexBody body;
  std::string family;
  std::string body_label;
  std::vector<GammaTraceRow> trace;
};
GammaSearchResult gamma_search(const Measure& mu, const std::vector<std::string>& families,
                               const SamplerConfig& cfg);

std::vector<std::string> gamma_families();

}  // namespace lcp
