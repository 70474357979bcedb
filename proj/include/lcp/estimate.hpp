#pragma once

#include "lcp/body.hpp"
#include "lcp/measure.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lcp {

struct SamplerConfig {
  uint64_t seed = 0;
  long samples = 100000;
  int burn_in = -1;   // hit-and-run; -1 means 10 n^2
  int thinning = -1;  // hit-and-run; -1 means n
  int chains = 8;     // independent streams, fixed regardless of threads
  int threads = 1;
};

struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
  long samples = 0;
  uint64_t seed = 0;
  std::string method;
};

// A sample matrix (one point per column) made of `chains` contiguous
// streams. Points are i.i.d. when `iid`; otherwise each stream is one
// hit-and-run chain and standard errors use the stream means as batches.
struct Samples {
  Mat X;
  std::vector<long> offsets;  // stream k occupies columns [offsets[k], offsets[k+1])
  bool iid = true;
  std::string method;
  uint64_t seed = 0;

  long size() const { return X.cols(); }
};

// Which sampler `sample` will use: "gaussian", "product", "radial",
// "ball", "rejection", "hit-and-run", "body-norm", "affine", "general".
std::string sampler_method(const Measure& mu, const SamplerConfig& cfg);
Samples sample(const Measure& mu, const SamplerConfig& cfg);

// Uniform samples on a body forcing one method ("rejection" or
// "hit-and-run"); used to cross-validate the two.
Samples sample_uniform_body(const ConvexBody& K, const SamplerConfig& cfg, const std::string& method);

// Mean of g over the samples with the matching standard error.
Estimate mean_estimate(const Samples& S, const std::function<double(const Vec&)>& g);
// Row-wise means of per-sample values (column i belongs to sample i).
std::vector<Estimate> mean_estimates(const Samples& S, const Mat& V);
Estimate estimate_prob(const Samples& S, const std::function<bool(const Vec&)>& member);
Estimate estimate_prob(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg);

struct SampleMoments {
  Vec mean;
  Mat cov;
  double mean_norm = 0.0;
  double var_norm = 0.0;
  Vec mean_stderr;
  Mat cov_stderr;
  double mean_norm_stderr = 0.0;
  bool exact = false;  // closed-form mean and covariance
};

SampleMoments moments(const Measure& mu, const SamplerConfig& cfg);

struct Isotropized {
  Measure measure;
  Mat T;      // x -> T x + shift maps mu to the returned measure
  Vec shift;
  bool exact = false;
};

Isotropized isotropize(const Measure& mu, const SamplerConfig& cfg);
double isotropic_constant(const Measure& mu, const SamplerConfig& cfg);

// One-dimensional marginal along a unit vector. Exact for the standard
// Gaussian and for products along coordinate axes; an empirical density on
// a 512-bin grid otherwise.
Measure1D marginal_1d(const Measure& mu, const Vec& xi, const SamplerConfig& cfg);
// The empirical marginal of existing samples.
Measure1D empirical_marginal(const Samples& S, const Vec& xi);

// Uniform points on facet `facet` of the polytope K.
std::vector<Vec> sample_facet(const ConvexBody& K, int facet, long count, uint64_t seed);
Estimate estimate_facet_integral(const Measure& mu, const ConvexBody& K, int facet,
                                 const SamplerConfig& cfg);

}  // namespace lcp
