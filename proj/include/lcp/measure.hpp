#pragma once

#include "lcp/body.hpp"
#include "lcp/measure1d.hpp"
#include "lcp/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcp {

class Rng;

// Super-level set R_t = {f >= e^{-t} sup f}: either an explicit body or a
// membership oracle.
class LevelSet {
 public:
  LevelSet(double t, ConvexBody body) : t_(t), body_(std::move(body)) {}
  LevelSet(double t, std::function<bool(const Vec&)> member, int dim)
      : t_(t), member_(std::move(member)), dim_(dim) {}

  double t() const { return t_; }
  bool is_explicit() const { return body_.has_value(); }
  const ConvexBody& body() const;
  int dim() const { return body_ ? body_->dim() : dim_; }

  bool contains(const Vec& x) const;
  // Distance from the origin to the boundary along unit u (0 if the origin
  // is outside). Exact for explicit bodies, bisection on the oracle otherwise.
  double radial(const Vec& u) const;

 private:
  double t_;
  std::optional<ConvexBody> body_;
  std::function<bool(const Vec&)> member_;
  int dim_ = 0;
};

struct MeasureFlags {
  bool even = false;
  bool unconditional = false;
  bool one_symmetric = false;
  bool geometric = false;  // f(0) = sup f
};

struct ExactMoments {
  Vec mean;
  Mat cov;
  // E|x| and Var|x| when a closed form exists, NaN otherwise.
  double mean_norm = 0.0;
  double var_norm = 0.0;
};

// An immutable log-concave probability measure on R^n.
class Measure {
 public:
  enum class Family { UniformBody, PNormRadial, BodyNorm, Product, Gaussian, General, Affine };
  using Sampler = std::function<Vec(Rng&)>;

  static Measure uniform_body(ConvexBody K);
  // Density proportional to exp(-|x/sigma|^p / p).
  static Measure pnorm(int n, double p, double sigma);
  // Density proportional to exp(-||x/sigma||_K^p) for a symmetric body K.
  static Measure body_norm(ConvexBody K, double p, double sigma);
  static Measure product(std::vector<Measure1D> factors);
  static Measure gaussian(int n);
  // A normalized log-density supplied by the caller, with the point where it
  // is largest and optionally an exact sampler.
  static Measure general(int n, std::function<double(const Vec&)> log_density, Vec argmax,
                         MeasureFlags flags, Sampler sampler = {}, std::string name = "general");

  // Law of T X + shift.
  Measure affine(const Mat& T, const Vec& shift) const;

  Family family() const;
  int dim() const;
  std::string name() const;
  const MeasureFlags& flags() const;

  double density(const Vec& x) const;
  double log_density(const Vec& x) const;
  double sup_density() const;
  double log_sup_density() const;
  Vec argmax() const;

  LevelSet level_set(double t) const;

  std::optional<ExactMoments> exact_moments() const;

  // Family parameters.
  const ConvexBody& body() const;  // UniformBody / BodyNorm
  double p() const;                // PNormRadial / BodyNorm
  double sigma() const;            // PNormRadial / BodyNorm
  const std::vector<Measure1D>& factors() const;
  const Measure& base() const;     // Affine
  const Mat& map() const;          // Affine
  const Vec& shift() const;        // Affine
  const Sampler& general_sampler() const;

 private:
  struct Data;
  explicit Measure(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

// Exact first and second moments of the uniform measure on a polytope or
// ball: the barycenter and E[(x - bar)(x - bar)^T].
std::pair<Vec, Mat> uniform_body_moments(const ConvexBody& K);

// L_f = (sup f)^{1/n} det(Cov)^{1/(2n)} for a probability density.
double isotropic_constant(double sup_density, const Mat& cov);

// Normalizing constant of exp(-|x/sigma|^p/p) and the coordinate variance.
double pnorm_log_normalizer(int n, double p, double sigma);
double pnorm_coordinate_variance(int n, double p, double sigma);

}  // namespace lcp
