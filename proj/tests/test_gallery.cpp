#include "doctest.h"

#include "lcp/estimate.hpp"
#include "lcp/gallery.hpp"
#include "lcp/geometry.hpp"

#include <cmath>

using namespace lcp;

TEST_CASE("regular simplex vertices") {
  for (int n = 1; n <= 8; ++n) {
    const auto v = regular_simplex_vertices(n);
    REQUIRE(v.size() == static_cast<size_t>(n + 1));
    Vec sum = Vec::Zero(n);
    for (size_t i = 0; i < v.size(); ++i) {
      sum += v[i];
      CHECK(v[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
      for (size_t j = 0; j < i; ++j) CHECK(std::abs(v[i].dot(v[j]) + 1.0 / n) < 1e-12);
    }
    CHECK(sum.norm() < 1e-12);
  }
}

TEST_CASE("simplex gallery metadata matches recomputation") {
  for (int n = 2; n <= 8; ++n) {
    const GalleryEntry e = regular_simplex_isotropic(n);
    const ConvexBody& K = *e.body;
    const double beta = e.meta.at("beta");
    CHECK(volume(K) == doctest::Approx(1.0).epsilon(1e-10));
    const auto [bar, cov] = uniform_body_moments(K);
    CHECK(bar.norm() < 1e-10);
    const double L = e.meta.at("L");
    CHECK(L == doctest::Approx(beta / std::sqrt(n * (n + 2.0))).epsilon(1e-14));
    CHECK((cov - L * L * Mat::Identity(n, n)).norm() < 1e-10);
    CHECK(inradius_origin(K) == doctest::Approx(e.meta.at("r")).epsilon(1e-10));
    CHECK(surface_area(K) == doctest::Approx(e.meta.at("S")).epsilon(1e-10));
    // vol = (r/n) S
    CHECK(e.meta.at("r") / n * e.meta.at("S") == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.meta.at("gamma") == doctest::Approx(L * surface_area(K)).epsilon(1e-9));
    CHECK(e.measure.sup_density() == doctest::Approx(std::pow(L, n)).epsilon(1e-9));
  }
  CHECK(regular_simplex_isotropic(3).meta.at("gamma") == doctest::Approx(2.32379).epsilon(1e-5));
}

TEST_CASE("cube and cross-polytope gallery") {
  for (int n = 1; n <= 8; ++n) {
    const GalleryEntry c = cube_isotropic(n);
    CHECK(c.meta.at("gamma") == doctest::Approx(n / std::sqrt(3.0)));
    CHECK(surface_area(*c.body) == doctest::Approx(2.0 * n));
    CHECK(c.measure.sup_density() == doctest::Approx(std::pow(12.0, -0.5 * n)));

    const GalleryEntry x = cross_polytope_isotropic(n);
    CHECK(volume(*x.body) == doctest::Approx(1.0).epsilon(1e-10));
    const auto [bar, cov] = uniform_body_moments(*x.body);
    const double L = x.meta.at("L");
    CHECK((cov - L * L * Mat::Identity(n, n)).norm() < 1e-10);
    CHECK(surface_area(*x.body) == doctest::Approx(x.meta.at("S")).epsilon(1e-10));
    CHECK(inradius_origin(*x.body) == doctest::Approx(x.meta.at("r")).epsilon(1e-10));
    const auto iso = x.measure.exact_moments();
    REQUIRE(iso);
    CHECK((iso->cov - Mat::Identity(n, n)).norm() < 1e-10);
  }
  // The n = 2 cross-polytope is a rotated square.
  CHECK(cross_polytope_isotropic(2).meta.at("L") == doctest::Approx(1.0 / std::sqrt(12.0)));
}

TEST_CASE("one-dimensional and radial entries") {
  const GalleryEntry e = extremal_1d();
  CHECK(e.meta.at("gamma") == 2.0);
  CHECK(e.measure.sup_density() == doctest::Approx(1.0));

  const GalleryEntry g = pnorm_isotropic(4, 2.0);
  CHECK(g.meta.at("sigma") == doctest::Approx(1.0).epsilon(1e-10));
  const GalleryEntry l = pnorm_isotropic(1, 1.0);
  CHECK(l.meta.at("sigma") == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  for (int n : {1, 2, 3, 6}) {
    for (double p : {1.0, 1.5, 3.0}) {
      const GalleryEntry q = pnorm_isotropic(n, p);
      CHECK(pnorm_coordinate_variance(n, p, q.meta.at("sigma")) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("body-norm entries are isotropic by sampling") {
  SamplerConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 5;
  for (const std::string body : {"cube", "cross_polytope"}) {
    const GalleryEntry e = body_norm_isotropic(3, 1.0, body);
    const Samples S = sample(e.measure, cfg);
    const Vec m = S.X.rowwise().mean();
    const Mat C = (S.X.colwise() - m) * (S.X.colwise() - m).transpose() / double(S.size() - 1);
    INFO(body);
    // Fourth moments of these laws are below 10; 4/sqrt(N) per entry covers
    // the sampling error comfortably.
    CHECK((C - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 4.0 * std::sqrt(10.0 / S.size()));
    CHECK(m.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(double(S.size())));
  }
}

TEST_CASE("gallery lookup") {
  for (const auto& name : gallery_names()) {
    const GalleryEntry e = gallery_entry(name, 3);
    CHECK(e.measure.dim() == (name == "extremal_1d" ? 1 : 3));
  }
  CHECK_THROWS_AS(gallery_entry("nonesuch", 3), Error);
  for (const auto& [name, m] : gallery_1d()) {
    INFO(name);
    CHECK(m.mean() == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.variance() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(2.0 * m.sup() <= 2.0 + 1e-12);
  }
}
