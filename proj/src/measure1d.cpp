#include "lcp/measure1d.hpp"

#include "lcp/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Measure1D Measure1D::uniform(double a, double b) {
  require(a < b, ErrorCode::InvalidArgument, "uniform needs a < b");
  Measure1D m;
  m.family_ = Family::Uniform;
  m.p_ = {a, b};
  return m;
}

Measure1D Measure1D::shifted_exp(double rate, double shift) {
  require(rate > 0.0, ErrorCode::InvalidArgument, "exponential rate must be positive");
  Measure1D m;
  m.family_ = Family::ShiftedExp;
  m.p_ = {rate, shift};
  return m;
}

Measure1D Measure1D::gaussian(double mean, double sd) {
  require(sd > 0.0, ErrorCode::InvalidArgument, "gaussian sd must be positive");
  Measure1D m;
  m.family_ = Family::Gaussian;
  m.p_ = {mean, sd};
  return m;
}

Measure1D Measure1D::truncated_linear(double zero, double peak) {
  require(zero != peak, ErrorCode::InvalidArgument, "truncated linear needs zero != peak");
  Measure1D m;
  m.family_ = Family::TruncatedLinear;
  m.p_ = {zero, peak};
  return m;
}

Measure1D Measure1D::from_log_density(const std::function<double(double)>& log_density,
                                      double lo, double hi, int points) {
  require(lo < hi && std::isfinite(lo) && std::isfinite(hi), ErrorCode::InvalidArgument,
          "log-density needs a finite interval");
  require(points >= 3, ErrorCode::InvalidArgument, "need at least 3 grid points");
  std::vector<double> x(points), ld(points);
  double top = -kInf;
  for (int k = 0; k < points; ++k) {
    x[k] = lo + (hi - lo) * k / (points - 1);
    ld[k] = log_density(x[k]);
    top = std::max(top, ld[k]);
  }
  require(std::isfinite(top), ErrorCode::InvalidArgument, "log-density is -inf everywhere");
  std::vector<double> d(points);
  for (int k = 0; k < points; ++k) d[k] = std::exp(ld[k] - top);
  return tabulated(std::move(x), std::move(d));
}

Measure1D Measure1D::tabulated(std::vector<double> x, std::vector<double> density,
                               std::vector<double> density_stderr) {
  require(x.size() >= 2 && x.size() == density.size(), ErrorCode::InvalidArgument,
          "tabulated density needs matching grids");
  for (size_t k = 1; k < x.size(); ++k)
    require(x[k] > x[k - 1], ErrorCode::InvalidArgument, "grid must be increasing");
  Measure1D m;
  m.family_ = Family::Tabulated;
  std::vector<double> c(x.size(), 0.0);
  for (size_t k = 1; k < x.size(); ++k)
    c[k] = c[k - 1] + 0.5 * (density[k] + density[k - 1]) * (x[k] - x[k - 1]);
  const double total = c.back();
  require(total > 0.0, ErrorCode::InvalidArgument, "tabulated density has zero mass");
  for (size_t k = 0; k < x.size(); ++k) {
    density[k] /= total;
    c[k] /= total;
  }
  if (density_stderr.empty()) density_stderr.assign(x.size(), 0.0);
  for (double& s : density_stderr) s /= total;
  m.x_ = std::move(x);
  m.d_ = std::move(density);
  m.c_ = std::move(c);
  m.se_ = std::move(density_stderr);
  return m;
}

std::string Measure1D::name() const {
  switch (family_) {
    case Family::Uniform: return "uniform";
    case Family::ShiftedExp: return "shifted_exp";
    case Family::Gaussian: return "gaussian";
    case Family::TruncatedLinear: return "truncated_linear";
    case Family::Tabulated: return "tabulated";
  }
  return "?";
}

double Measure1D::density(double x) const {
  switch (family_) {
    case Family::Uniform:
      return (x >= p_[0] && x <= p_[1]) ? 1.0 / (p_[1] - p_[0]) : 0.0;
    case Family::ShiftedExp:
      return x >= p_[1] ? p_[0] * std::exp(-p_[0] * (x - p_[1])) : 0.0;
    case Family::Gaussian: {
      const double z = (x - p_[0]) / p_[1];
      return std::exp(-0.5 * z * z) / (p_[1] * std::sqrt(2.0 * M_PI));
    }
    case Family::TruncatedLinear: {
      const double len = std::abs(p_[1] - p_[0]);
      const double lo = std::min(p_[0], p_[1]), hi = std::max(p_[0], p_[1]);
      if (x < lo || x > hi) return 0.0;
      return 2.0 * std::abs(x - p_[0]) / (len * len);
    }
    case Family::Tabulated: {
      if (x < x_.front() || x > x_.back()) return 0.0;
      const size_t k = std::min<size_t>(
          std::upper_bound(x_.begin(), x_.end(), x) - x_.begin(), x_.size() - 1);
      const size_t j = k == 0 ? 0 : k - 1;
      const double t = (x - x_[j]) / (x_[j + 1] - x_[j]);
      return (1.0 - t) * d_[j] + t * d_[j + 1];
    }
  }
  return 0.0;
}

double Measure1D::log_density(double x) const {
  if (family_ == Family::Gaussian) {
    const double z = (x - p_[0]) / p_[1];
    return -0.5 * z * z - std::log(p_[1] * std::sqrt(2.0 * M_PI));
  }
  if (family_ == Family::ShiftedExp)
    return x >= p_[1] ? std::log(p_[0]) - p_[0] * (x - p_[1]) : -kInf;
  const double d = density(x);
  return d > 0.0 ? std::log(d) : -kInf;
}

double Measure1D::cdf(double x) const {
  switch (family_) {
    case Family::Uniform:
      return std::clamp((x - p_[0]) / (p_[1] - p_[0]), 0.0, 1.0);
    case Family::ShiftedExp:
      return x <= p_[1] ? 0.0 : -std::expm1(-p_[0] * (x - p_[1]));
    case Family::Gaussian:
      return 0.5 * std::erfc(-(x - p_[0]) / (p_[1] * std::sqrt(2.0)));
    case Family::TruncatedLinear: {
      const double len = std::abs(p_[1] - p_[0]);
      if (p_[1] > p_[0]) {
        const double t = std::clamp((x - p_[0]) / len, 0.0, 1.0);
        return t * t;
      }
      const double t = std::clamp((p_[0] - x) / len, 0.0, 1.0);
      return 1.0 - t * t;
    }
    case Family::Tabulated: {
      if (x <= x_.front()) return 0.0;
      if (x >= x_.back()) return 1.0;
      const size_t j = (std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
      const double h = x_[j + 1] - x_[j];
      const double t = x - x_[j];
      return std::min(1.0, c_[j] + d_[j] * t + 0.5 * (d_[j + 1] - d_[j]) * t * t / h);
    }
  }
  return 0.0;
}

double Measure1D::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, ErrorCode::InvalidArgument, "quantile level outside [0,1]");
  switch (family_) {
    case Family::Uniform:
      return p_[0] + u * (p_[1] - p_[0]);
    case Family::ShiftedExp:
      return u >= 1.0 ? kInf : p_[1] - std::log1p(-u) / p_[0];
    case Family::Gaussian:
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      return p_[0] + p_[1] * std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    case Family::TruncatedLinear: {
      const double len = std::abs(p_[1] - p_[0]);
      if (p_[1] > p_[0]) return p_[0] + len * std::sqrt(u);
      return p_[0] - len * std::sqrt(1.0 - u);
    }
    case Family::Tabulated: {
      if (u <= 0.0) return x_.front();
      if (u >= 1.0) return x_.back();
      size_t j = (std::upper_bound(c_.begin(), c_.end(), u) - c_.begin());
      j = std::clamp<size_t>(j, 1, x_.size() - 1) - 1;
      const double h = x_[j + 1] - x_[j];
      const double a = 0.5 * (d_[j + 1] - d_[j]) / h;
      const double b = d_[j];
      const double r = u - c_[j];
      double t;
      if (std::abs(a) * h < 1e-12 * std::max(b, 1e-300)) {
        t = b > 0.0 ? r / b : 0.0;
      } else {
        // Stable root of a t^2 + b t - r = 0.
        const double disc = std::max(0.0, b * b + 4.0 * a * r);
        t = 2.0 * r / (b + std::sqrt(disc));
      }
      return x_[j] + std::clamp(t, 0.0, h);
    }
  }
  return 0.0;
}

double Measure1D::mean() const {
  switch (family_) {
    case Family::Uniform: return 0.5 * (p_[0] + p_[1]);
    case Family::ShiftedExp: return p_[1] + 1.0 / p_[0];
    case Family::Gaussian: return p_[0];
    case Family::TruncatedLinear: return p_[0] + 2.0 * (p_[1] - p_[0]) / 3.0;
    case Family::Tabulated: {
      // Exact for the piecewise-linear density.
      double s = 0.0;
      for (size_t k = 0; k + 1 < x_.size(); ++k) {
        const double h = x_[k + 1] - x_[k];
        s += h * (d_[k] * (2.0 * x_[k] + x_[k + 1]) + d_[k + 1] * (x_[k] + 2.0 * x_[k + 1])) / 6.0;
      }
      return s;
    }
  }
  return 0.0;
}

double Measure1D::variance() const {
  switch (family_) {
    case Family::Uniform: return (p_[1] - p_[0]) * (p_[1] - p_[0]) / 12.0;
    case Family::ShiftedExp: return 1.0 / (p_[0] * p_[0]);
    case Family::Gaussian: return p_[1] * p_[1];
    case Family::TruncatedLinear: return (p_[1] - p_[0]) * (p_[1] - p_[0]) / 18.0;
    case Family::Tabulated: {
      const double mu = mean();
      double s = 0.0;
      for (size_t k = 0; k + 1 < x_.size(); ++k) {
        // Integral of (x-mu)^2 times the linear density on one cell, by
        // three-point Gauss-Legendre, exact for this cubic integrand.
        const double h = x_[k + 1] - x_[k];
        static const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
        static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        for (int q = 0; q < 3; ++q) {
          const double t = 0.5 * (g[q] + 1.0);
          const double x = x_[k] + t * h;
          const double d = (1.0 - t) * d_[k] + t * d_[k + 1];
          s += 0.5 * h * w[q] * d * (x - mu) * (x - mu);
        }
      }
      return s;
    }
  }
  return 0.0;
}

double Measure1D::sup() const {
  switch (family_) {
    case Family::Uniform: return 1.0 / (p_[1] - p_[0]);
    case Family::ShiftedExp: return p_[0];
    case Family::Gaussian: return 1.0 / (p_[1] * std::sqrt(2.0 * M_PI));
    case Family::TruncatedLinear: return 2.0 / std::abs(p_[1] - p_[0]);
    case Family::Tabulated: return *std::max_element(d_.begin(), d_.end());
  }
  return 0.0;
}

double Measure1D::sup_stderr() const {
  if (family_ != Family::Tabulated) return 0.0;
  const size_t k = std::max_element(d_.begin(), d_.end()) - d_.begin();
  return se_[k];
}

double Measure1D::argmax() const {
  switch (family_) {
    case Family::Uniform: return 0.5 * (p_[0] + p_[1]);
    case Family::ShiftedExp: return p_[1];
    case Family::Gaussian: return p_[0];
    case Family::TruncatedLinear: return p_[1];
    case Family::Tabulated: return x_[std::max_element(d_.begin(), d_.end()) - d_.begin()];
  }
  return 0.0;
}

double Measure1D::support_lo() const {
  switch (family_) {
    case Family::Uniform: return p_[0];
    case Family::ShiftedExp: return p_[1];
    case Family::Gaussian: return -kInf;
    case Family::TruncatedLinear: return std::min(p_[0], p_[1]);
    case Family::Tabulated: return x_.front();
  }
  return -kInf;
}

double Measure1D::support_hi() const {
  switch (family_) {
    case Family::Uniform: return p_[1];
    case Family::ShiftedExp: return kInf;
    case Family::Gaussian: return kInf;
    case Family::TruncatedLinear: return std::max(p_[0], p_[1]);
    case Family::Tabulated: return x_.back();
  }
  return kInf;
}

double Measure1D::left_limit(double x) const {
  // Every family here is continuous on the closed support and zero outside
  // it, so the only discontinuities are at the support endpoints.
  if (x <= support_lo()) return 0.0;
  if (x > support_hi()) return 0.0;
  return density(x);
}

double Measure1D::right_limit(double x) const {
  if (x >= support_hi()) return 0.0;
  if (x < support_lo()) return 0.0;
  return density(x);
}

bool Measure1D::even(double tol) const {
  switch (family_) {
    case Family::Uniform: return std::abs(p_[0] + p_[1]) <= tol * (p_[1] - p_[0]);
    case Family::Gaussian: return std::abs(p_[0]) <= tol * p_[1];
    case Family::ShiftedExp:
    case Family::TruncatedLinear: return false;
    case Family::Tabulated: {
      if (std::abs(x_.front() + x_.back()) > 1e-9 * (x_.back() - x_.front())) return false;
      const double top = sup();
      for (size_t k = 0; k < x_.size(); ++k)
        if (std::abs(d_[k] - d_[x_.size() - 1 - k]) > std::max(tol, 1e-9) * top) return false;
      return true;
    }
  }
  return false;
}

Measure1D Measure1D::affine(double a, double c) const {
  require(a != 0.0, ErrorCode::InvalidArgument, "affine factor must be nonzero");
  switch (family_) {
    case Family::Uniform: {
      const double u = a * p_[0] + c, v = a * p_[1] + c;
      return uniform(std::min(u, v), std::max(u, v));
    }
    case Family::ShiftedExp:
      require(a > 0.0, ErrorCode::Unsupported, "reflected exponential is not a family member");
      return shifted_exp(p_[0] / a, a * p_[1] + c);
    case Family::Gaussian: return gaussian(a * p_[0] + c, std::abs(a) * p_[1]);
    case Family::TruncatedLinear: return truncated_linear(a * p_[0] + c, a * p_[1] + c);
    case Family::Tabulated: {
      const size_t K = x_.size();
      std::vector<double> x(K), d(K), se(K);
      for (size_t k = 0; k < K; ++k) {
        const size_t src = a > 0.0 ? k : K - 1 - k;
        x[k] = a * x_[src] + c;
        d[k] = d_[src] / std::abs(a);
        se[k] = se_[src] / std::abs(a);
      }
      Measure1D m = tabulated(std::move(x), std::move(d));
      m.se_ = std::move(se);
      return m;
    }
  }
  return *this;
}

Measure1D Measure1D::standardized() const {
  const double s = std::sqrt(variance());
  return affine(1.0 / s, -mean() / s);
}

double Measure1D::sample(Rng& rng) const {
  switch (family_) {
    case Family::Gaussian: return p_[0] + p_[1] * rng.normal();
    case Family::ShiftedExp: return p_[1] + rng.exponential() / p_[0];
    default: return quantile(rng.uniform());
  }
}

}  // namespace lcp
