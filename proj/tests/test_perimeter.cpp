#include "doctest.h"

#include "lcp/gallery.hpp"
#include "lcp/geometry.hpp"
#include "lcp/perimeter.hpp"
#include "lcp/random_body.hpp"

#include <cmath>

using namespace lcp;

namespace {

SamplerConfig config(uint64_t seed, long samples) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  return cfg;
}

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
Mat random_rotation(int n, Rng& rng) {
  Mat G(n, n);
  for (int i = 0; i < n; ++i) G.col(i) = rng.normal_vec(n);
  Eigen::HouseholderQR<Mat> qr(G);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("uniform measures: clipped facets give L S exactly") {
  for (int n = 2; n <= 6; ++n) {
    const GalleryEntry c = cube_isotropic(n);
    const PerimeterResult p = perimeter(c.measure, c.measure.body(), config(0, 1000));
    CHECK(p.exact);
    CHECK(p.value == doctest::Approx(n / std::sqrt(3.0)).epsilon(1e-12));
    const GalleryEntry s = regular_simplex_isotropic(n);
    const PerimeterResult q = perimeter(s.measure, s.measure.body(), config(0, 1000));
    CHECK(q.value == doctest::Approx(std::sqrt(n / (n + 2.0)) * n).epsilon(1e-10));
  }
  // A half-cube overlapping the support: two facets inside, clipped others.
  const Measure mu = Measure::uniform_body(ConvexBody::cube(2, 1.0));
  const ConvexBody A = ConvexBody::box(Vec::Zero(2), Vec::Constant(2, 3.0));
  // Boundary of [0,3]^2 inside [-1,1]^2: the two segments from 0 to 1 on the
  // axes, density 1/4.
  CHECK(perimeter(mu, A, config(0, 10)).value == doctest::Approx(0.5));
  // Disjoint: zero.
  CHECK(perimeter(mu, ConvexBody::cube(2, 0.5).translated(Vec::Constant(2, 5.0)), config(0, 10)).value == 0.0);
}

TEST_CASE("facet integral matches closed forms for the Gaussian") {
  // Square [-1,1]^2: four edges, each 2 phi(1) (Phi(1) - Phi(-1)).
  const double edge = phi(1.0) * std::erf(1.0 / std::sqrt(2.0));
  const PerimeterResult p = perimeter(Measure::gaussian(2), ConvexBody::cube(2, 1.0), config(3, 100000));
  CHECK_FALSE(p.exact);
  CHECK(std::abs(p.value - 4.0 * edge) <= 3.0 * p.stderr);
  // n = 1 endpoint formula.
  const PerimeterResult q = perimeter(Measure::gaussian(1), ConvexBody::cube(1, 1.0), config(3, 1000));
  CHECK(q.value == doctest::Approx(2.0 * phi(1.0)));
  CHECK(q.value == doctest::Approx(0.48394).epsilon(1e-4));
  // Centered balls are closed-form for radial measures: 2 pi r phi2(r).
  const PerimeterResult b = perimeter(Measure::gaussian(2), ConvexBody::ball(Vec::Zero(2), 1.0), config(0, 10));
  CHECK(b.exact);
  CHECK(b.value == doctest::Approx(std::exp(-0.5)));
  // Off-center ball by Monte Carlo against a 1D quadrature in the angle.
  Vec c(2);
  c << 0.5, 0.0;
  const PerimeterResult m = perimeter(Measure::gaussian(2), ConvexBody::ball(c, 1.0), config(4, 100000));
  double q2 = 0.0;
  const int K = 100000;
  for (int i = 0; i < K; ++i) {
    const double a = 2.0 * M_PI * (i + 0.5) / K;
    const double x = 0.5 + std::cos(a), y = std::sin(a);
    q2 += phi(x) * phi(y) * 2.0 * M_PI / K;
  }
  CHECK(std::abs(m.value - q2) <= 3.0 * m.stderr);
}

TEST_CASE("perimeter is bounded by sup density times surface area") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const ConvexBody A = random_hpolytope(n, rng, trial % 2 == 0);
    for (const Measure& mu : {Measure::gaussian(n), Measure::pnorm(n, 1.0, 0.8)}) {
      const PerimeterResult p = perimeter(mu, A, config(trial, 20000));
      CHECK(p.value <= mu.sup_density() * surface_area(A) + 3.0 * p.stderr);
    }
  }
}

TEST_CASE("rotation invariance for the Gaussian") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 3;
    const ConvexBody A = random_hpolytope(n, rng, false).translated(0.3 * rng.normal_vec(n));
    const Mat Q = random_rotation(n, rng);
    const PerimeterResult a = perimeter(Measure::gaussian(n), A, config(1, 50000));
    const PerimeterResult b = perimeter(Measure::gaussian(n), A.linear_image(Q), config(2, 50000));
    CHECK(std::abs(a.value - b.value) <= 3.0 * std::hypot(a.stderr, b.stderr));
  }
}

TEST_CASE("one-dimensional perimeter and gamma") {
  const Measure1D e = Measure1D::shifted_exp(1.0, -1.0);
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const Perimeter1D p = perimeter_1d(e, -1.0 + d, -1.0 + 2.0 * d);
    CHECK_FALSE(p.at_jump);
    CHECK(std::abs(p.value - 2.0) <= 3.0 * d + 1e-12);
  }
  const Perimeter1D edge = perimeter_1d(e, -1.0, 0.0);
  CHECK(edge.at_jump);
  CHECK(edge.value == doctest::Approx(std::exp(-1.0)));
  const double s3 = std::sqrt(3.0);
  CHECK(perimeter_1d(Measure1D::uniform(-s3, s3), 0.0, 1.0).value == doctest::Approx(1.0 / s3));
  CHECK(perimeter_1d(Measure1D::gaussian(0, 1), 0.3, 0.3).value == doctest::Approx(2.0 * phi(0.3)));
  CHECK(gamma_1d(e) == 2.0);
  CHECK(gamma_1d(Measure1D::gaussian(0, 1)) == doctest::Approx(0.79788).epsilon(1e-5));
  CHECK(gamma_1d(Measure1D::uniform(-s3, s3)) == doctest::Approx(0.57735).epsilon(1e-5));
}

TEST_CASE("gamma_uniform") {
  for (int n = 2; n <= 8; ++n) {
    const GammaUniform s = gamma_uniform(*regular_simplex_isotropic(n).body);
    CHECK(std::abs(s.slack) <= 1e-8 * s.bound);
    const GammaUniform c = gamma_uniform(*cube_isotropic(n).body);
    CHECK(c.value == doctest::Approx(n / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(c.slack > 1e-3);
    const GammaUniform x = gamma_uniform(*cross_polytope_isotropic(n).body);
    CHECK(x.value <= x.bound + 1e-8);
  }
  CHECK_THROWS_AS(gamma_uniform(ConvexBody::cube(3, 1.0)), Error);
  CHECK_THROWS_AS(gamma_uniform(ConvexBody::cube(3, 0.5).translated(Vec::Constant(3, 0.1))), Error);
}

TEST_CASE("finite differences agree with the facet integral") {
  {
    const Measure g = Measure::gaussian(2);
    const ConvexBody A = ConvexBody::cube(2, 1.0);
    const FdResult fd = perimeter_fd(g, A, {}, config(5, 1000000));
    REQUIRE(fd.points.size() == 4);
    const double exact = 4.0 * phi(1.0) * std::erf(1.0 / std::sqrt(2.0));
    CHECK(std::abs(fd.extrapolated - exact) <= 0.05 * exact);
  }
  {
    // Uniform measure, body well inside the support.
    const Measure u = Measure::uniform_body(ConvexBody::cube(3, 2.0));
    const ConvexBody A = ConvexBody::cube(3, 0.8);
    const double exact = perimeter(u, A, config(0, 10)).value;
    const FdResult fd = perimeter_fd(u, A, {}, config(6, 1000000));
    CHECK(std::abs(fd.extrapolated - exact) <= 0.05 * exact);
  }
  {
    // A contains the support: every difference quotient vanishes.
    const Measure u = Measure::uniform_body(ConvexBody::cube(2, 1.0));
    const FdResult fd = perimeter_fd(u, ConvexBody::cube(2, 1.5), {}, config(6, 10000));
    for (const auto& p : fd.points) CHECK(p.estimate.value == 0.0);
  }
  CHECK_THROWS_AS(perimeter_fd(Measure::gaussian(5), ConvexBody::cube(5, 1.0), {}, config(0, 10)), Error);
}

TEST_CASE("gamma search") {
  const GalleryEntry c = cube_isotropic(3);
  const GammaSearchResult r = gamma_search(c.measure, {"dilates"}, config(0, 1000));
  CHECK(r.best.value >= 0.999 * 3.0 / std::sqrt(3.0));

  const GammaSearchResult e = gamma_search(extremal_1d().measure, {"slabs"}, config(0, 1000));
  CHECK(e.best.value >= 2.0 - 1e-3);

  const GammaSearchResult g = gamma_search(Measure::gaussian(2), {"balls", "gallery"}, config(1, 20000));
  CHECK(g.best.value >= std::exp(-0.5) - 1e-12);
  CHECK(!g.trace.empty());
  CHECK_THROWS_AS(gamma_search(Measure::gaussian(2), {"nonsense"}, config(0, 10)), Error);
}

TEST_CASE("radial boundary estimator agrees with the facet route") {
  Rng rng(44);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 4;
    const ConvexBody A = random_hpolytope(n, rng, trial % 2 == 0).translated(0.2 * rng.normal_vec(n));
    const Measure mu = trial % 3 == 0 ? Measure::pnorm(n, 1.0, 0.7) : Measure::gaussian(n);
    const PerimeterResult f = perimeter(mu, A, config(1, 50000));
    const PerimeterResult r = perimeter_radial(mu, A, config(2, 50000));
    CHECK(r.method == "radial-boundary");
    CHECK(std::abs(f.value - r.value) <= 3.0 * std::hypot(f.stderr, r.stderr));
  }
  // Constant density: the weights integrate to the surface area.
  const Measure u = Measure::uniform_body(ConvexBody::cube(3, 3.0));
  const PerimeterResult r = perimeter_radial(u, ConvexBody::cube(3, 1.0), config(3, 100000));
  const double exact = 24.0 / 216.0;
  CHECK(std::abs(r.value - exact) <= 3.0 * r.stderr);
}
