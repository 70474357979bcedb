#include "lcp/perimeter.hpp"

#include "lcp/gallery.hpp"
#include "lcp/geometry.hpp"
#include "lcp/parallel.hpp"
#include "lcp/random_body.hpp"
#include "lcp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lcp {

namespace {

double unit_sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

bool radial_about_origin(const Measure& mu) {
  return mu.family() == Measure::Family::Gaussian || mu.family() == Measure::Family::PNormRadial;
}

PerimeterResult ball_perimeter(const Measure& mu, const Ball& B, const SamplerConfig& cfg) {
  const int n = static_cast<int>(B.center.size());
  const double area = unit_sphere_area(n) * std::pow(B.radius, n - 1);
  if (radial_about_origin(mu) && B.center.norm() == 0.0)
    return {area * mu.density(B.radius * Vec::Unit(n, 0)), 0.0, 0, cfg.seed, "closed-form", true};
  const uint64_t seed = derive_seed(cfg.seed, 0x5350);
  Rng rng(seed);
  long double s = 0.0L, s2 = 0.0L;
  const long N = std::max<long>(cfg.samples, 2);
  for (long i = 0; i < N; ++i) {
    const double f = mu.density(B.center + B.radius * rng.unit_vec(n));
    s += f;
    s2 += static_cast<long double>(f) * f;
  }
  const double mean = static_cast<double>(s / N);
  const double var = std::max(0.0, static_cast<double>((s2 - s * s / N) / (N - 1)));
  return {area * mean, area * std::sqrt(var / N), N, seed, "sphere", false};
}

// (1 / vol K) sum_F lambda(F ∩ K), each term an exact section volume.
PerimeterResult clipped_uniform_perimeter(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  const HPolytope& a = A.h_form();
  const HPolytope& k = mu.body().h_form();
  const int n = A.dim();
  Mat M(a.A.rows() + k.A.rows(), n);
  Vec b(a.b.size() + k.b.size());
  M << a.A, k.A;
  b << a.b, k.b;
  // A inside K needs no clipping.
  bool inside = true;
  for (const Vec& v : A.structure().vertices()) inside = inside && mu.body().contains(v, 1e-12);
  if (inside) return {surface_area(A) * mu.sup_density(), 0.0, 0, cfg.seed, "closed-form", true};
  // Sections through large supports get expensive past dimension six.
  if (n >= 7) return facet_perimeter(mu, A, cfg);
  double total = 0.0;
  for (const FacetRecord& F : facets(A)) total += hyperplane_section_volume(M, b, F.normal, F.offset);
  return {total * mu.sup_density(), 0.0, 0, cfg.seed, "closed-form", true};
}

}  // namespace

PerimeterResult facet_perimeter(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  const auto F = facets(A);
  double S = 0.0;
  for (const auto& f : F) S += f.area;
  require(S > 0.0, ErrorCode::Degenerate, "body has no boundary area");
  std::vector<Estimate> parts(F.size());
  parallel_for(static_cast<int>(F.size()), cfg.threads, [&](int i) {
    SamplerConfig c = cfg;
    c.samples = std::max<long>(64, std::lround(cfg.samples * F[i].area / S));
    parts[i] = estimate_facet_integral(mu, A, F[i].index, c);
  });
  PerimeterResult r{0.0, 0.0, 0, cfg.seed, "facet-integral", false};
  double var = 0.0;
  for (const auto& e : parts) {
    r.value += e.value;
    var += e.stderr * e.stderr;
    r.samples += e.samples;
  }
  r.stderr = std::sqrt(var);
  return r;
}

namespace {

// Radial parametrization of the boundary from an interior point c: for a
// uniform direction u the ray meets the facet with unit normal a at
// distance rho, and the surface element is rho^n / d dsigma(u) with
// d = b - <a, c>. Needs no facet triangulation.
PerimeterResult radial_impl(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  require(A.is_polytope(), ErrorCode::Unsupported, "radial boundary estimator needs a polytope");
  const HPolytope& H = A.h_form();
  const int n = A.dim();
  const Vec c = chebyshev_inball(A).center;
  const Vec d = H.b - H.A * c;
  const uint64_t seed = derive_seed(cfg.seed, 0x726164);
  const long N = std::max<long>(cfg.samples, 2);
  const int chains = std::max(1, cfg.chains);
  std::vector<long double> s(chains, 0.0L), s2(chains, 0.0L);
  parallel_for(chains, cfg.threads, [&](int k) {
    Rng rng(derive_seed(seed, k));
    const long count = N / chains + (k < N % chains ? 1 : 0);
    for (long i = 0; i < count; ++i) {
      const Vec u = rng.unit_vec(n);
      const Vec au = H.A * u;
      double rho = std::numeric_limits<double>::infinity();
      int hit = -1;
      for (Eigen::Index j = 0; j < au.size(); ++j)
        if (au[j] > 0.0 && d[j] / au[j] < rho) {
          rho = d[j] / au[j];
          hit = static_cast<int>(j);
        }
      const double w = mu.density(c + rho * u) * std::pow(rho, n) / d[hit];
      s[k] += w;
      s2[k] += static_cast<long double>(w) * w;
    }
  });
  long double S = 0.0L, S2 = 0.0L;
  for (int k = 0; k < chains; ++k) {
    S += s[k];
    S2 += s2[k];
  }
  const double mean = static_cast<double>(S / N);
  const double var = std::max(0.0, static_cast<double>((S2 - S * S / N) / (N - 1)));
  const double area = unit_sphere_area(n);
  return {area * mean, area * std::sqrt(var / N), N, seed, "radial-boundary", false};
}

// Facet triangulations grow quickly with dimension; past this size the
// radial estimator is used instead.
bool large_polytope(const ConvexBody& A) {
  return A.dim() >= 7 && A.structure().vertices().size() > 300;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

PerimeterResult perimeter(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  require(mu.dim() == A.dim(), ErrorCode::InvalidArgument, "measure and body dimensions differ");
  switch (A.kind()) {
    case ConvexBody::Kind::Ball:
      return ball_perimeter(mu, *A.as_ball(), cfg);
    case ConvexBody::Kind::Intersection:
      throw Error(ErrorCode::Unsupported, "perimeter of a ball/polytope intersection is not supported");
    default:
      break;
  }
  if (large_polytope(A)) return radial_impl(mu, A, cfg);
  if (mu.family() == Measure::Family::UniformBody && mu.body().is_polytope())
    return clipped_uniform_perimeter(mu, A, cfg);
  return facet_perimeter(mu, A, cfg);
}

PerimeterResult perimeter_radial(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  require(mu.dim() == A.dim(), ErrorCode::InvalidArgument, "measure and body dimensions differ");
  return radial_impl(mu, A, cfg);
}

Perimeter1D perimeter_1d(const Measure1D& mu, double a, double b) {
  require(a <= b, ErrorCode::InvalidArgument, "interval needs a <= b");
  Perimeter1D r;
  r.value = mu.left_limit(a) + mu.right_limit(b);
  r.at_jump = mu.left_limit(a) != mu.right_limit(a) || mu.left_limit(b) != mu.right_limit(b);
  return r;
}

GammaUniform gamma_uniform(const ConvexBody& K) {
  const int n = K.dim();
  const double vol = volume(K);
  require(std::abs(vol - 1.0) <= 1e-6, ErrorCode::NotIsotropic, "body volume is " + fmt(vol) + ", not 1");
  const auto [bar, cov] = uniform_body_moments(K);
  require(bar.norm() <= 1e-6, ErrorCode::NotIsotropic, "body is not centered");
  const double L2 = cov.trace() / n;
  require((cov - L2 * Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-6 * L2, ErrorCode::NotIsotropic,
          "body covariance is not a multiple of the identity");
  GammaUniform g;
  g.L = std::sqrt(L2);
  g.S = surface_area(K);
  g.value = g.L * g.S;
  g.bound = std::sqrt(n / (n + 2.0)) * n;
  g.slack = g.bound - g.value;
  return g;
}

double gamma_1d(const Measure1D& mu) { return 2.0 * mu.sup(); }

FdResult perimeter_fd(const Measure& mu, const ConvexBody& A, std::vector<double> eps_grid,
                      const SamplerConfig& cfg) {
  require(A.is_polytope(), ErrorCode::Unsupported, "finite differences need a polytope");
  const HPolytope& H = A.h_form();
  require(H.A.rows() <= 20 && A.dim() <= 4, ErrorCode::CapExceeded,
          "finite differences are limited to 20 facets and n <= 4");
  if (eps_grid.empty()) eps_grid = {0.1, 0.05, 0.02, 0.01};
  std::sort(eps_grid.begin(), eps_grid.end());
  for (double e : eps_grid) require(e > 0.0, ErrorCode::InvalidArgument, "eps must be positive");
  const double emax = eps_grid.back();
  const int G = static_cast<int>(eps_grid.size());

  const Samples S = sample(mu, cfg);
  const long N = S.size();
  // Row g: indicator of 0 < d(x, A) <= eps_g divided by eps_g. Row G: the
  // Richardson combination of the two smallest eps.
  Mat V = Mat::Zero(G + 1, N);
  std::vector<long> unconverged(G, 0);
  for (long i = 0; i < N; ++i) {
    const Vec x = S.X.col(i);
    const double gap = (H.A * x - H.b).maxCoeff();
    if (gap <= 0.0 || gap > emax) continue;
    const Projection p = project_onto_polytope(H, x);
    for (int g = 0; g < G; ++g) {
      if (p.distance <= eps_grid[g]) V(g, i) = 1.0 / eps_grid[g];
      if (!p.converged && std::abs(p.distance - eps_grid[g]) < 1e-6) ++unconverged[g];
    }
  }
  FdResult out;
  if (G >= 2) {
    const double e1 = eps_grid[0], e2 = eps_grid[1];
    V.row(G) = (e2 * V.row(0) - e1 * V.row(1)) / (e2 - e1);
  }
  const auto est = mean_estimates(S, V);
  for (int g = 0; g < G; ++g) {
    FdPoint pt{eps_grid[g], est[g], unconverged[g], ""};
    if (unconverged[g] > 0) pt.error = "projection did not converge for " + std::to_string(unconverged[g]) + " points";
    out.points.push_back(pt);
  }
  if (G >= 2) {
    out.extrapolated = est[G].value;
    out.extrapolated_stderr = est[G].stderr;
    out.model_error = std::abs(est[G].value - est[0].value);
  } else {
    out.extrapolated = est[0].value;
    out.extrapolated_stderr = est[0].stderr;
  }
  return out;
}

std::vector<std::string> gamma_families() { return {"dilates", "gallery", "random", "slabs", "balls"}; }

GammaSearchResult gamma_search(const Measure& mu, const std::vector<std::string>& families,
                               const SamplerConfig& cfg) {
  const int n = mu.dim();
  const Vec mode = mu.argmax();
  struct Candidate {
    std::string family, label;
    ConvexBody body;
  };
  std::vector<Candidate> cands;
  auto add = [&](const std::string& fam, const std::string& label, auto make) {
    try {
      cands.push_back({fam, label, make()});
    } catch (const Error&) {
      // Degenerate candidates (e.g. an empty slab) are skipped.
    }
  };
  for (const std::string& fam : families) {
    if (fam == "dilates") {
      if (mu.family() == Measure::Family::UniformBody) {
        for (double l : {0.5, 0.75, 0.9, 0.95, 0.99, 1.0})
          add(fam, "support*" + fmt(l), [&] { return dilate(mu.body(), l); });
      } else {
        for (double t : {0.1, 0.25, 0.5, 1.0, 2.0, 0.5 * n, 1.0 * n, 2.0 * n, 6.0 * n}) {
          const LevelSet R = mu.level_set(t);
          if (R.is_explicit()) add(fam, "R_" + fmt(t), [&] { return R.body(); });
        }
      }
    } else if (fam == "gallery") {
      for (double s : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        add(fam, "cube*" + fmt(s), [&] { return ConvexBody::cube(n, s).translated(mode); });
        if (n >= 2) {
          add(fam, "simplex*" + fmt(s), [&] { return regular_simplex_isotropic(n).body->scaled(s).translated(mode); });
          add(fam, "cross_polytope*" + fmt(s),
              [&] { return cross_polytope_isotropic(n).body->scaled(s).translated(mode); });
        }
      }
    } else if (fam == "random") {
      Rng rng(derive_seed(cfg.seed, 0x72616e64));
      for (int i = 0; i < 20; ++i) {
        const bool sym = i % 2 == 0;
        const double scale = 0.5 + 0.25 * (i % 8);
        add(fam, "random#" + std::to_string(i), [&] { return random_hpolytope(n, rng, sym, scale); });
      }
    } else if (fam == "slabs") {
      if (n == 1) {
        const double m = mode(0);
        for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
          add(fam, "[m+" + fmt(d) + ",m+" + fmt(2 * d) + "]",
              [&] { return ConvexBody::box(Vec::Constant(1, m + d), Vec::Constant(1, m + 2 * d)); });
          add(fam, "[m-" + fmt(2 * d) + ",m-" + fmt(d) + "]",
              [&] { return ConvexBody::box(Vec::Constant(1, m - 2 * d), Vec::Constant(1, m - d)); });
          add(fam, "[m-" + fmt(d) + ",m+" + fmt(d) + "]",
              [&] { return ConvexBody::box(Vec::Constant(1, m - d), Vec::Constant(1, m + d)); });
        }
      } else {
        const double R = 12.0;
        for (int k = 0; k < n; ++k)
          for (double h : {0.05, 0.25, 0.5, 1.0}) {
            Vec lo = mode.array() - R, hi = mode.array() + R;
            lo(k) = mode(k) - h;
            hi(k) = mode(k) + h;
            add(fam, "slab(e" + std::to_string(k) + "," + fmt(h) + ")", [&] { return ConvexBody::box(lo, hi); });
          }
      }
    } else if (fam == "balls") {
      for (double r : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0})
        add(fam, "ball(mode," + fmt(r) + ")", [&] { return ConvexBody::ball(mode, r); });
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown body family '" + fam + "'");
    }
  }
  require(!cands.empty(), ErrorCode::InvalidArgument, "no candidate bodies for the search");

  std::vector<GammaTraceRow> trace;
  int best = -1;
  PerimeterResult best_r;
  for (size_t i = 0; i < cands.size(); ++i) {
    SamplerConfig c = cfg;
    c.seed = derive_seed(cfg.seed, 0x6761 + i);
    PerimeterResult r;
    try {
      r = perimeter(mu, cands[i].body, c);
    } catch (const Error&) {
      continue;
    }
    trace.push_back({cands[i].family, cands[i].label, r.value, r.stderr});
    if (best < 0 || r.value > best_r.value) {
      best = static_cast<int>(i);
      best_r = r;
    }
  }
  require(best >= 0, ErrorCode::NonConvergence, "no candidate perimeter could be evaluated");
  return {best_r, cands[best].body, cands[best].family, cands[best].label, std::move(trace)};
}

}  // namespace lcp
