#include "lcp/gallery.hpp"

#include "lcp/geometry.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>

namespace lcp {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// \int_0^\infty r^k exp(-r^p / p) dr by tanh-sinh type quadrature.
double radial_moment(double k, double p) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double value = integrator.integrate(
      [k, p](double r) {
        if (r <= 0.0 || !std::isfinite(r)) return 0.0;
        return std::exp(k * std::log(r) - std::pow(r, p) / p);
      },
      1e-13, &err);
  require(std::isfinite(value) && err <= 1e-9 * std::abs(value), ErrorCode::NonConvergence,
          "radial quadrature did not converge");
  return value;
}

std::vector<Vec> cross_vertices(int n, double c) {
  std::vector<Vec> v;
  for (int j = 0; j < n; ++j) {
    v.push_back(c * Vec::Unit(n, j));
    v.push_back(-c * Vec::Unit(n, j));
  }
  return v;
}

}  // namespace

std::vector<Vec> regular_simplex_vertices(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  // Orthonormal basis of the sum-zero hyperplane in R^{n+1} (Helmert
  // contrasts); the standard basis vectors e_i - (1/(n+1)) 1 expressed in it
  // have norm sqrt(n/(n+1)).
  Mat H = Mat::Zero(n, n + 1);
  for (int k = 1; k <= n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) H(k - 1, i) = s;
    H(k - 1, k) = -k * s;
  }
  const double scale = std::sqrt((n + 1.0) / n);
  std::vector<Vec> v;
  for (int i = 0; i <= n; ++i) v.push_back(scale * H.col(i));
  return v;
}

GalleryEntry regular_simplex_isotropic(int n) {
  require(n >= 1 && n <= 8, ErrorCode::InvalidArgument, "simplex gallery supports 1 <= n <= 8");
  const auto v = regular_simplex_vertices(n);
  Mat E(n, n);
  for (int k = 1; k <= n; ++k) E.col(k - 1) = v[k] - v[0];
  const double vol0 = std::abs(E.determinant()) / factorial(n);
  const double beta = std::pow(vol0, -1.0 / n);
  const double L = beta / std::sqrt(n * (n + 2.0));
  std::vector<Vec> body, iso;
  for (const Vec& p : v) {
    body.push_back(beta * p);
    iso.push_back(std::sqrt(n * (n + 2.0)) * p);  // beta v / L
  }
  GalleryEntry e{"simplex", n, ConvexBody::vpolytope(body), Measure::uniform_body(ConvexBody::vpolytope(iso)),
                 {}, "regular simplex with circumradius beta, volume one"};
  e.meta["beta"] = beta;
  e.meta["vol"] = 1.0;
  e.meta["L"] = L;
  e.meta["r"] = beta / n;
  e.meta["S"] = n * n / beta;  // n / r
  e.meta["gamma"] = std::sqrt(n / (n + 2.0)) * n;
  return e;
}

GalleryEntry cube_isotropic(int n) {
  require(n >= 1 && n <= 8, ErrorCode::InvalidArgument, "cube gallery supports 1 <= n <= 8");
  const double L = 1.0 / std::sqrt(12.0);
  GalleryEntry e{"cube", n, ConvexBody::cube(n, 0.5),
                 Measure::uniform_body(ConvexBody::cube(n, std::sqrt(3.0))), {},
                 "unit cube [-1/2,1/2]^n; measure uniform on [-sqrt3,sqrt3]^n"};
  e.meta["vol"] = 1.0;
  e.meta["L"] = L;
  e.meta["r"] = 0.5;
  e.meta["S"] = 2.0 * n;
  e.meta["gamma"] = n / std::sqrt(3.0);
  return e;
}

GalleryEntry cross_polytope_isotropic(int n) {
  require(n >= 1 && n <= 8, ErrorCode::InvalidArgument, "cross-polytope gallery supports 1 <= n <= 8");
  // vol(c B_1^n) = c^n 2^n / n! = 1 and E x_1^2 on B_1^n is 2/((n+1)(n+2)).
  const double c = std::pow(factorial(n), 1.0 / n) / 2.0;
  const double L = c * std::sqrt(2.0 / ((n + 1.0) * (n + 2.0)));
  const double S = n == 1 ? 2.0 : std::pow(2.0, n) * std::pow(c, n - 1) * std::sqrt(double(n)) / factorial(n - 1);
  GalleryEntry e{"cross_polytope", n, ConvexBody::vpolytope(cross_vertices(n, c)),
                 Measure::uniform_body(ConvexBody::vpolytope(cross_vertices(n, c / L))), {},
                 "cross-polytope scaled to volume one"};
  e.meta["vol"] = 1.0;
  e.meta["L"] = L;
  e.meta["r"] = c / std::sqrt(double(n));
  e.meta["S"] = S;
  e.meta["gamma"] = L * S;
  return e;
}

GalleryEntry extremal_1d() {
  GalleryEntry e{"extremal_1d", 1, std::nullopt, Measure::product({Measure1D::shifted_exp(1.0, -1.0)}),
                 {}, "density exp(-(x+1)) on [-1, inf): mean 0, variance 1"};
  e.meta["sup"] = 1.0;
  e.meta["gamma"] = 2.0;
  return e;
}

GalleryEntry gaussian_entry(int n) {
  GalleryEntry e{"gaussian", n, std::nullopt, Measure::gaussian(n), {}, "standard Gaussian"};
  e.meta["L"] = 1.0 / std::sqrt(2.0 * M_PI);
  e.meta["sup"] = std::pow(2.0 * M_PI, -0.5 * n);
  return e;
}

GalleryEntry pnorm_isotropic(int n, double p) {
  require(n >= 1 && p >= 1.0, ErrorCode::InvalidArgument, "pnorm needs n >= 1 and p >= 1");
  const double ratio = radial_moment(n + 1.0, p) / (n * radial_moment(n - 1.0, p));
  // Coordinate variance sigma^2 * ratio; solve variance(sigma) = 1.
  auto f = [ratio](double s) { return s * s * ratio - 1.0; };
  double lo = 1e-3, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  while (f(lo) > 0.0) lo *= 0.5;
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); },
      iters);
  const double sigma = 0.5 * (bracket.first + bracket.second);
  require(std::abs(f(sigma)) <= 1e-10, ErrorCode::NonConvergence, "sigma root-finding failed");
  Measure mu = Measure::pnorm(n, p, sigma);
  GalleryEntry e{"pnorm", n, std::nullopt, mu, {}, "isotropic density proportional to exp(-|x/sigma|^p/p)"};
  e.meta["p"] = p;
  e.meta["sigma"] = sigma;
  e.meta["L"] = std::pow(mu.sup_density(), 1.0 / n);
  return e;
}

GalleryEntry body_norm_isotropic(int n, double p, const std::string& body) {
  require(n >= 1 && p >= 1.0, ErrorCode::InvalidArgument, "body_norm needs n >= 1 and p >= 1");
  ConvexBody K = body == "cube" ? ConvexBody::cube(n, 1.0)
                                : (body == "cross_polytope" ? ConvexBody::vpolytope(cross_vertices(n, 1.0))
                                                            : throw Error(ErrorCode::InvalidArgument,
                                                                          "unknown body " + body));
  // Cov = sigma^2 (n+2)/n Gamma((n+2)/p)/Gamma(n/p) M_K with M_K = m I.
  const double m = body == "cube" ? 1.0 / 3.0 : 2.0 / ((n + 1.0) * (n + 2.0));
  const double g = (n + 2.0) / n * std::exp(std::lgamma((n + 2.0) / p) - std::lgamma(n / p));
  const double sigma = 1.0 / std::sqrt(g * m);
  Measure mu = Measure::body_norm(K, p, sigma);
  GalleryEntry e{"body_norm_" + body, n, std::nullopt, mu, {},
                 "isotropic density proportional to exp(-||x/sigma||_K^p)"};
  e.meta["p"] = p;
  e.meta["sigma"] = sigma;
  e.meta["L"] = std::pow(mu.sup_density(), 1.0 / n);
  return e;
}

GalleryEntry product_measure(std::vector<Measure1D> factors) {
  double bound = 0.0;
  for (const auto& f : factors) bound += 2.0 * f.sup();
  const int n = static_cast<int>(factors.size());
  GalleryEntry e{"product", n, std::nullopt, Measure::product(std::move(factors)), {}, "product measure"};
  e.meta["product_bound"] = bound;
  return e;
}

std::vector<std::pair<std::string, Measure1D>> gallery_1d() {
  const double s3 = std::sqrt(3.0);
  return {
      {"shifted_exp", Measure1D::shifted_exp(1.0, -1.0)},
      {"gaussian", Measure1D::gaussian(0.0, 1.0)},
      {"uniform", Measure1D::uniform(-s3, s3)},
      {"truncated_linear", Measure1D::truncated_linear(0.0, 1.0).standardized()},
      {"laplace", Measure1D::from_log_density(
                      [](double x) { return -std::sqrt(2.0) * std::abs(x); }, -30.0, 30.0, 60001)},
  };
}

std::vector<std::string> gallery_names() {
  return {"simplex",   "cube",     "cross_polytope", "extremal_1d",    "gaussian",
          "pnorm",     "product_exp", "product_gaussian", "body_norm_cube", "body_norm_cross_polytope"};
}

GalleryEntry gallery_entry(const std::string& name, int n, double p) {
  if (name == "simplex") return regular_simplex_isotropic(n);
  if (name == "cube") return cube_isotropic(n);
  if (name == "cross_polytope") return cross_polytope_isotropic(n);
  if (name == "extremal_1d") return extremal_1d();
  if (name == "gaussian") return gaussian_entry(n);
  if (name == "pnorm") return pnorm_isotropic(n, p);
  if (name == "product_exp") {
    GalleryEntry e = product_measure(std::vector<Measure1D>(n, Measure1D::shifted_exp(1.0, -1.0)));
    e.name = name;
    return e;
  }
  if (name == "product_gaussian") {
    GalleryEntry e = product_measure(std::vector<Measure1D>(n, Measure1D::gaussian(0.0, 1.0)));
    e.name = name;
    return e;
  }
  if (name == "body_norm_cube") return body_norm_isotropic(n, p, "cube");
  if (name == "body_norm_cross_polytope") return body_norm_isotropic(n, p, "cross_polytope");
  throw Error(ErrorCode::InvalidArgument, "unknown gallery entry '" + name + "'");
}

}  // namespace lcp
