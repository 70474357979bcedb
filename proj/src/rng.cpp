#include "lcp/rng.hpp"

#include <cmath>

namespace lcp {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vec Rng::normal_vec(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vec Rng::unit_vec(int n) {
  for (;;) {
    Vec v = normal_vec(n);
    const double nrm = v.norm();
    if (nrm > 1e-300) return v / nrm;
  }
}

double Rng::exponential() { return -std::log(uniform_open()); }

}  // namespace lcp
