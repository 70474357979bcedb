#include "doctest.h"

#include "lcp/body.hpp"
#include "lcp/geometry.hpp"
#include "lcp/rng.hpp"

#include <cmath>

using namespace lcp;

namespace {

ConvexBody triangle_v() { return ConvexBody::vpolytope({Vec::Zero(2), Vec::Unit(2, 0), Vec::Unit(2, 1)}); }

ConvexBody triangle_h() {
  Mat A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  Vec b(3);
  b << 0, 0, 1;
  return ConvexBody::hpolytope(A, b);
}

// Random bounded H-polytope with 0 inside.
ConvexBody random_h(int n, Rng& rng) {
  const int m = 3 * n;
  Mat A(m, n);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = rng.unit_vec(n).transpose();
    b(i) = rng.uniform(0.3, 1.5);
  }
  // Enclosing box rows keep it bounded.
  Mat A2(m + 2 * n, n);
  Vec b2(m + 2 * n);
  A2 << A, Mat::Identity(n, n), -Mat::Identity(n, n);
  b2 << b, Vec::Constant(2 * n, 2.0);
  return ConvexBody::hpolytope(A2, b2);
}

ConvexBody random_v(int n, Rng& rng) {
  std::vector<Vec> v;
  for (int i = 0; i < 2 * n + 3; ++i) v.push_back(rng.normal_vec(n));
  return ConvexBody::vpolytope(v);
}

}  // namespace

TEST_CASE("support and width examples") {
  CHECK(ConvexBody::cube(3, 1.0).support(Vec::Ones(3)) == doctest::Approx(3.0));
  CHECK(ConvexBody::ball(Vec::Zero(3), 1.0).support(Vec::Unit(3, 0)) == doctest::Approx(1.0));
  CHECK(triangle_v().support(Vec::Ones(2)) == doctest::Approx(1.0));
  CHECK(triangle_h().support(Vec::Ones(2)) == doctest::Approx(1.0));
  CHECK(width(ConvexBody::cube(3, 0.5), Vec::Unit(3, 0)) == doctest::Approx(1.0));
  Vec c(2);
  c << 0.3, -2.0;
  CHECK(width(ConvexBody::ball(c, 1.7), Vec::Unit(2, 1)) == doctest::Approx(3.4));
  const Vec d = Vec::Ones(2) / std::sqrt(2.0);
  CHECK(width(triangle_v(), d) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(width(triangle_h(), d) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("support subadditivity, width symmetry and membership consistency") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<ConvexBody> bodies = {random_h(n, rng), random_v(n, rng),
                                      ConvexBody::ball(rng.normal_vec(n), 0.8)};
    for (const auto& K : bodies) {
      for (int k = 0; k < 10; ++k) {
        const Vec xi = rng.normal_vec(n), eta = rng.normal_vec(n);
        CHECK(K.support(xi + eta) <= K.support(xi) + K.support(eta) + 1e-9);
        const Vec u = xi.normalized();
        CHECK(width(K, u) == doctest::Approx(width(K, -u)).epsilon(1e-10));
        CHECK(width(K, u) >= 0.0);
        // A point beyond the support in direction u is outside, one inside
        // the support of every tested direction is not excluded by them.
        const Vec x = 3.0 * rng.normal_vec(n);
        if (K.contains(x)) {
          for (int j = 0; j < 5; ++j) {
            const Vec z = rng.normal_vec(n);
            CHECK(z.dot(x) <= K.support(z) + 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("min_width: certified box and ball, dense scan in the plane") {
  auto mw = min_width(ConvexBody::cube(4, 0.5));
  CHECK(mw.certified);
  CHECK(mw.value == doctest::Approx(1.0));
  mw = min_width(ConvexBody::ball(Vec::Zero(3), 0.7));
  CHECK(mw.certified);
  CHECK(mw.value == doctest::Approx(1.4));

  Rng rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const ConvexBody K = random_v(2, rng);
    const auto est = min_width(K, 10000);
    CHECK_FALSE(est.certified);
    double scan = 1e300;
    const int N = 1000000;
    const auto& V = enumerate_vertices(K);
    for (int i = 0; i < N; ++i) {
      const double a = M_PI * i / N;
      const double cx = std::cos(a), sy = std::sin(a);
      double hi = -1e300, lo = 1e300;
      for (const Vec& v : V) {
        const double s = cx * v(0) + sy * v(1);
        hi = std::max(hi, s);
        lo = std::min(lo, s);
      }
      scan = std::min(scan, hi - lo);
    }
    CHECK(std::abs(est.value - scan) <= 1e-3 * scan);
  }
}

TEST_CASE("inradius_origin and Chebyshev inball") {
  CHECK(inradius_origin(ConvexBody::cube(5, 0.5)) == doctest::Approx(0.5));
  Vec c(2);
  c << 0.1, 0.0;
  CHECK(inradius_origin(ConvexBody::ball(c, 1.0)) == doctest::Approx(0.9));
  Vec shifted(2);
  shifted << 3.0, 3.0;
  CHECK_THROWS_AS(inradius_origin(ConvexBody::cube(2, 1.0).translated(shifted)), Error);

  const InballResult tri = chebyshev_inball(triangle_h());
  const double r = (2.0 - std::sqrt(2.0)) / 2.0;
  CHECK(tri.radius == doctest::Approx(r).epsilon(1e-10));
  CHECK(tri.center(0) == doctest::Approx(r).epsilon(1e-9));
  CHECK(tri.center(1) == doctest::Approx(r).epsilon(1e-9));

  const InballResult cube = chebyshev_inball(ConvexBody::cube(4, 1.0));
  CHECK(cube.radius == doctest::Approx(1.0));
  CHECK(cube.center.norm() < 1e-9);

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const ConvexBody K = random_h(n, rng);
    const InballResult ib = chebyshev_inball(K);
    for (int k = 0; k < 100; ++k) CHECK(K.contains(ib.center + ib.radius * rng.unit_vec(n), 1e-9));
    const Vec v = rng.normal_vec(n);
    const InballResult moved = chebyshev_inball(K.translated(v));
    CHECK((moved.center - ib.center - v).norm() < 1e-7);
    CHECK(moved.radius == doctest::Approx(ib.radius).epsilon(1e-9));
  }
}

TEST_CASE("facets, volume and surface area examples") {
  const ConvexBody unit = ConvexBody::box(Vec::Zero(3), Vec::Ones(3));
  const auto F = facets(unit);
  CHECK(F.size() == 6);
  for (const auto& f : F) CHECK(f.area == doctest::Approx(1.0));
  CHECK(surface_area(unit) == doctest::Approx(6.0));

  std::vector<double> lengths;
  for (const auto& f : facets(triangle_v())) lengths.push_back(f.area);
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths[0] == doctest::Approx(1.0));
  CHECK(lengths[1] == doctest::Approx(1.0));
  CHECK(lengths[2] == doctest::Approx(std::sqrt(2.0)));

  CHECK(volume(ConvexBody::ball(Vec::Zero(2), 1.0)) == doctest::Approx(M_PI));
  CHECK(surface_area(ConvexBody::ball(Vec::Zero(3), 2.0)) == doctest::Approx(16.0 * M_PI));
  for (int n = 1; n <= 6; ++n) CHECK(surface_area(ConvexBody::cube(n, 0.5)) == doctest::Approx(2.0 * n));
}

TEST_CASE("surface-inradius inequality on random polytopes and volume scaling") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const ConvexBody K = random_h(n, rng);
    const double S = surface_area(K), V = volume(K), r = inradius_origin(K);
    CHECK(S * r <= n * V * (1.0 + 1e-9));
    if (trial < 20) {
      const double lambda = rng.uniform(0.3, 3.0);
      CHECK(volume(dilate(K, lambda)) == doctest::Approx(std::pow(lambda, n) * V).epsilon(1e-12));
    }
  }
}

TEST_CASE("Euler relation for random 3-polytopes") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ConvexBody K = trial % 2 ? random_h(3, rng) : random_v(3, rng);
    const auto& S = K.structure();
    const long V = static_cast<long>(S.vertices().size());
    const long F = static_cast<long>(S.facets().size());
    CHECK(V - S.edge_count() + F == 2);
  }
}

TEST_CASE("dilate, translate and intersect") {
  const ConvexBody D = dilate(ConvexBody::cube(3, 1.0), 2.0);
  const auto box = D.as_box();
  REQUIRE(box);
  CHECK((box->second - Vec::Constant(3, 2.0)).norm() < 1e-12);
  CHECK((box->first + Vec::Constant(3, 2.0)).norm() < 1e-12);

  const ConvexBody I = intersect(ConvexBody::box(Vec::Zero(2), Vec::Constant(2, 2.0)),
                                 ConvexBody::box(Vec::Ones(2), Vec::Constant(2, 3.0)));
  const auto ib = I.as_box();
  REQUIRE(ib);
  CHECK((ib->first - Vec::Ones(2)).norm() < 1e-9);
  CHECK((ib->second - Vec::Constant(2, 2.0)).norm() < 1e-9);
  CHECK(volume(I) == doctest::Approx(1.0));

  try {
    intersect(ConvexBody::cube(2, 1.0), ConvexBody::cube(2, 1.0).translated(Vec::Constant(2, 5.0)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyIntersection);
  }
  try {
    intersect(ConvexBody::cube(2, 1.0), ConvexBody::cube(2, 1.0).translated(Vec::Unit(2, 0) * 2.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LowerDimensional);
  }
  // Ball and box pieces together.
  const ConvexBody BI = intersect(ConvexBody::ball(Vec::Zero(2), 1.0), ConvexBody::cube(2, 0.5));
  CHECK(BI.contains(Vec::Constant(2, 0.49)));
  CHECK_FALSE(BI.contains(Vec::Constant(2, 0.6)));
}

TEST_CASE("construction rejects degenerate input") {
  CHECK_THROWS_AS(ConvexBody::ball(Vec::Zero(2), 0.0), Error);
  CHECK_THROWS_AS(ConvexBody::vpolytope({Vec::Zero(2), Vec::Unit(2, 0), 2.0 * Vec::Unit(2, 0)}), Error);
  Mat A(2, 2);
  A << 1, 0, -1, 0;
  CHECK_THROWS_AS(ConvexBody::hpolytope(A, Vec::Ones(2)), Error);
}

TEST_CASE("symmetry detection and circumradius") {
  CHECK(is_symmetric(ConvexBody::cube(3, 1.0)));
  CHECK_FALSE(is_symmetric(triangle_v()));
  CHECK(circumradius_origin(ConvexBody::cube(3, 1.0)) == doctest::Approx(std::sqrt(3.0)));
}
