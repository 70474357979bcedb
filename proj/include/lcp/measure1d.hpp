#pragma once

#include "lcp/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lcp {

class Rng;

// A log-concave probability measure on the real line.
class Measure1D {
 public:
  enum class Family { Uniform, ShiftedExp, Gaussian, TruncatedLinear, Tabulated };

  static Measure1D uniform(double a, double b);
  // rate * exp(-rate (x - shift)) on [shift, inf).
  static Measure1D shifted_exp(double rate, double shift);
  static Measure1D gaussian(double mean, double sd);
  // Density proportional to |x - zero| on the interval between `zero` and
  // `peak`; the density vanishes at `zero` and is largest at `peak`.
  static Measure1D truncated_linear(double zero, double peak);
  // Density proportional to exp(log_density) on [lo, hi], tabulated on a
  // uniform grid and normalized by the trapezoid rule.
  static Measure1D from_log_density(const std::function<double(double)>& log_density, double lo,
                                    double hi, int points = 4097);
  // Piecewise-linear density through (x_k, d_k); normalized here.
  static Measure1D tabulated(std::vector<double> x, std::vector<double> density,
                             std::vector<double> density_stderr = {});

  Family family() const { return family_; }
  std::string name() const;
  const std::vector<double>& params() const { return p_; }
  // Grid and normalized density values of the tabulated family.
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& grid_density() const { return d_; }

  double density(double x) const;
  double log_density(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;
  double mean() const;
  double variance() const;
  double sup() const;
  double argmax() const;
  // One-sided limits f(x-) and f(x+); they differ only at support endpoints.
  double left_limit(double x) const;
  double right_limit(double x) const;
  double support_lo() const;
  double support_hi() const;
  bool even(double tol = 1e-12) const;

  // Pointwise standard error of the tabulated density (empirical marginals);
  // zero for closed-form families.
  double sup_stderr() const;

  // Law of a X + c for a > 0 (a < 0 also allowed for symmetric-support
  // families other than the exponential).
  Measure1D affine(double a, double c) const;
  // Shift and scale to mean 0, variance 1.
  Measure1D standardized() const;

  double sample(Rng& rng) const;

 private:
  Family family_ = Family::Gaussian;
  std::vector<double> p_;
  // Tabulated family data.
  std::vector<double> x_, d_, c_, se_;
};

}  // namespace lcp
