#include "doctest.h"

#include "lcp/estimate.hpp"
#include "lcp/geometry.hpp"
#include "lcp/measure.hpp"
#include "lcp/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

using namespace lcp;

namespace {

// Simpson's rule on [a, b] with an even number of panels.
template <class F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

std::vector<Measure> sample_measures() {
  return {Measure::gaussian(2),
          Measure::pnorm(3, 1.0, 0.7),
          Measure::pnorm(2, 3.0, 1.2),
          Measure::body_norm(ConvexBody::cube(2, 1.0), 1.0, 0.8),
          Measure::uniform_body(ConvexBody::cube(3, 0.5)),
          Measure::product({Measure1D::shifted_exp(1.0, -1.0), Measure1D::gaussian(0.0, 1.0)})};
}

}  // namespace

TEST_CASE("density examples") {
  CHECK(Measure::gaussian(1).density(Vec::Zero(1)) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  for (int n = 1; n <= 4; ++n) {
    const Measure mu = Measure::uniform_body(ConvexBody::cube(n, std::sqrt(3.0)));
    CHECK(mu.sup_density() == doctest::Approx(std::pow(2.0 * std::sqrt(3.0), -n)));
  }
  const Measure1D e = Measure1D::shifted_exp(1.0, -1.0);
  CHECK(e.sup() == doctest::Approx(1.0));
  CHECK(e.density(0.5) == doctest::Approx(std::exp(-1.5)));
  CHECK(e.density(-1.5) == 0.0);
  CHECK(e.mean() == doctest::Approx(0.0));
  CHECK(e.variance() == doctest::Approx(1.0));
}

TEST_CASE("p-norm normalizer against radial quadrature") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int n : {1, 2, 3, 5}) {
      const double sigma = 0.9;
      const double omega = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
      // Z = n omega_n \int_0^\infty r^{n-1} exp(-(r/sigma)^p/p) dr.
      const double Z = n * omega *
                       simpson([&](double r) { return std::pow(r, n - 1) * std::exp(-std::pow(r / sigma, p) / p); },
                               0.0, 60.0, 200000);
      CHECK(pnorm_log_normalizer(n, p, sigma) == doctest::Approx(std::log(Z)).epsilon(1e-8));
      const double m2 = n * omega *
                        simpson([&](double r) { return std::pow(r, n + 1) * std::exp(-std::pow(r / sigma, p) / p); },
                                0.0, 60.0, 200000);
      CHECK(pnorm_coordinate_variance(n, p, sigma) == doctest::Approx(m2 / Z / n).epsilon(1e-8));
    }
  }
}

TEST_CASE("body-norm density integrates to one (1D and 2D quadrature)") {
  const Measure mu1 = Measure::body_norm(ConvexBody::cube(1, 1.0), 1.5, 0.7);
  const double I1 = simpson([&](double x) { return mu1.density(Vec::Constant(1, x)); }, -40.0, 40.0, 400000);
  CHECK(I1 == doctest::Approx(1.0).epsilon(1e-8));
  const Measure mu2 = Measure::body_norm(ConvexBody::cube(2, 1.0), 1.0, 0.5);
  // Iterated Simpson on [-12, 12]^2; the density has kinks on the diagonals,
  // so accept a looser tolerance.
  const double I2 = simpson(
      [&](double x) {
        return simpson([&](double y) {
          Vec v(2);
          v << x, y;
          return mu2.density(v);
        }, -12.0, 12.0, 1200);
      },
      -12.0, 12.0, 1200);
  CHECK(I2 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("normalization by Monte Carlo for every family") {
  // E_nu[f/g] over a wide Gaussian proposal g is 1 for a probability density f.
  for (const Measure& mu : sample_measures()) {
    const int n = mu.dim();
    Rng rng(4);
    const double s = 3.0;
    double sum = 0.0, sum2 = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
      const Vec x = s * rng.normal_vec(n);
      const double g = std::exp(-0.5 * x.squaredNorm() / (s * s)) / std::pow(2.0 * M_PI * s * s, 0.5 * n);
      const double w = mu.density(x) / g;
      sum += w;
      sum2 += w * w;
    }
    const double m = sum / N, se = std::sqrt((sum2 / N - m * m) / N);
    INFO(mu.name());
    CHECK(std::abs(m - 1.0) <= 3.0 * se + 1e-3);
  }
}

TEST_CASE("log-concavity along random segments") {
  for (const Measure& mu : sample_measures()) {
    Rng rng(9);
    const int n = mu.dim();
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = rng.normal_vec(n), y = rng.normal_vec(n);
      const double fx = mu.log_density(x), fy = mu.log_density(y), fm = mu.log_density(0.5 * (x + y));
      if (std::isfinite(fx) && std::isfinite(fy) && fm < 0.5 * (fx + fy) - 1e-9) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("exact moments") {
  const auto cube = Measure::uniform_body(ConvexBody::cube(3, 0.5)).exact_moments();
  REQUIRE(cube);
  CHECK(cube->mean.norm() < 1e-12);
  CHECK((cube->cov - Mat::Identity(3, 3) / 12.0).norm() < 1e-12);
  const auto g = Measure::gaussian(4).exact_moments();
  REQUIRE(g);
  CHECK((g->cov - Mat::Identity(4, 4)).norm() < 1e-14);
  const auto e = Measure::product({Measure1D::shifted_exp(1.0, -1.0)}).exact_moments();
  REQUIRE(e);
  CHECK(std::abs(e->mean(0)) < 1e-14);
  CHECK(e->cov(0, 0) == doctest::Approx(1.0));

  // Triangle: barycenter (1/3,1/3); covariance entries 1/18 and -1/36.
  const ConvexBody T = ConvexBody::vpolytope({Vec::Zero(2), Vec::Unit(2, 0), Vec::Unit(2, 1)});
  const auto [bar, cov] = uniform_body_moments(T);
  CHECK(bar(0) == doctest::Approx(1.0 / 3.0));
  CHECK(cov(0, 0) == doctest::Approx(1.0 / 18.0));
  CHECK(cov(0, 1) == doctest::Approx(-1.0 / 36.0));
}

TEST_CASE("isotropize and isotropic constant") {
  SamplerConfig cfg;
  cfg.samples = 100000;
  const Isotropized q = isotropize(Measure::uniform_body(ConvexBody::cube(3, 0.5)), cfg);
  CHECK(q.exact);
  const auto box = q.measure.body().as_box();
  REQUIRE(box);
  CHECK((box->second - Vec::Constant(3, std::sqrt(3.0))).norm() < 1e-12);
  CHECK(isotropic_constant(q.measure, cfg) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-12));

  const Isotropized id = isotropize(Measure::gaussian(3), cfg);
  CHECK((id.T - Mat::Identity(3, 3)).norm() < 1e-12);
  CHECK(isotropic_constant(Measure::gaussian(1), cfg) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));

  // Idempotence at the level of moments.
  const Isotropized twice = isotropize(q.measure, cfg);
  CHECK((twice.T - Mat::Identity(3, 3)).norm() < 1e-10);

  // Triangle: covariance of the pushed measure checked by sampling.
  const ConvexBody T = ConvexBody::vpolytope({Vec::Zero(2), Vec::Unit(2, 0), Vec::Unit(2, 1)});
  const Isotropized tri = isotropize(Measure::uniform_body(T), cfg);
  cfg.seed = 77;
  const Samples S = sample(tri.measure, cfg);
  const Vec m = S.X.rowwise().mean();
  const Mat C = (S.X.colwise() - m) * (S.X.colwise() - m).transpose() / double(S.size() - 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double se = (i == j ? std::sqrt(0.8) : 1.0) / std::sqrt(double(S.size()));
      CHECK(std::abs(C(i, j) - (i == j ? 1.0 : 0.0)) <= 3.0 * se);
    }
}

TEST_CASE("level sets") {
  const LevelSet g = Measure::pnorm(3, 2.0, 1.0).level_set(2.0);
  REQUIRE(g.is_explicit());
  REQUIRE(g.body().as_ball());
  CHECK(g.body().as_ball()->radius == doctest::Approx(2.0));

  const ConvexBody K = ConvexBody::cube(3, 1.0);
  const LevelSet b = Measure::body_norm(K, 2.0, 1.0).level_set(3.0);
  const auto box = b.body().as_box();
  REQUIRE(box);
  CHECK(box->second(0) == doctest::Approx(std::pow(3.0, 0.5)));

  const Measure e = Measure::product({Measure1D::shifted_exp(1.0, -1.0)});
  const LevelSet r = e.level_set(4.0);
  CHECK(r.contains(Vec::Constant(1, -1.0 + 1e-12)));
  CHECK(r.contains(Vec::Constant(1, 2.999)));
  CHECK_FALSE(r.contains(Vec::Constant(1, 3.001)));
  CHECK_FALSE(r.contains(Vec::Constant(1, -1.001)));
  CHECK(r.radial(Vec::Constant(1, 1.0)) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(e.factors()[0].cdf(3.0) == doctest::Approx(1.0 - std::exp(-4.0)));
}

TEST_CASE("level sets are monotone and star-scaled for geometric measures") {
  Rng rng(21);
  for (const Measure& mu : sample_measures()) {
    if (!mu.flags().geometric) continue;
    const int n = mu.dim();
    for (double t : {1.0, 3.0, 6.0}) {
      const LevelSet L = mu.level_set(t), L2 = mu.level_set(2.0 * t);
      for (int i = 0; i < 200; ++i) {
        const Vec x = 2.0 * rng.normal_vec(n);
        if (!L.contains(x)) continue;
        CHECK(L2.contains(x));
        for (int k = 1; k <= 9; ++k) CHECK(mu.level_set(0.1 * k * t).contains(0.1 * k * x));
      }
    }
  }
}

TEST_CASE("Fradelizi bound on centered measures") {
  SamplerConfig cfg;
  for (const Measure& mu : sample_measures()) {
    const auto m = moments(mu, cfg);
    // Recentre and compare sup f with e^n f(barycenter).
    CHECK(mu.log_sup_density() <= mu.dim() + mu.log_density(m.mean) + 1e-9);
  }
}

TEST_CASE("one-dimensional families") {
  const double s3 = std::sqrt(3.0);
  const Measure1D u = Measure1D::uniform(-s3, s3);
  CHECK(u.variance() == doctest::Approx(1.0));
  CHECK(u.cdf(0.0) == doctest::Approx(0.5));
  CHECK(u.quantile(0.75) == doctest::Approx(0.5 * s3));
  const Measure1D t = Measure1D::truncated_linear(0.0, 1.0);
  CHECK(t.density(1.0) == doctest::Approx(2.0));
  CHECK(t.mean() == doctest::Approx(2.0 / 3.0));
  const Measure1D ts = t.standardized();
  CHECK(ts.mean() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ts.variance() == doctest::Approx(1.0));
  const Measure1D lap = Measure1D::from_log_density([](double x) { return -std::abs(x); }, -40.0, 40.0, 80001);
  CHECK(lap.sup() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(lap.variance() == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(lap.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  // Bobkov-Chistyakov window.
  for (const Measure1D& m : {u, t, ts, lap, Measure1D::gaussian(0.0, 2.0), Measure1D::shifted_exp(3.0, 1.0)}) {
    const double v = m.variance() * m.sup() * m.sup();
    CHECK(v >= 1.0 / 12.0 - 1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
  // Quantile inverts the CDF.
  for (const Measure1D& m : {u, t, lap, Measure1D::gaussian(1.0, 2.0), Measure1D::shifted_exp(2.0, -1.0)})
    for (double q : {0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(m.cdf(m.quantile(q)) == doctest::Approx(q).epsilon(1e-9));
}
