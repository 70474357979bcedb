#include "lcp/geometry.hpp"

#include "lcp/lp.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lcp {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(int base, long long i) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Width along xi using the vertex list; xi need not be normalized.
double vertex_width(const std::vector<Vec>& verts, const Vec& xi) {
  double lo = verts.front().dot(xi), hi = lo;
  for (const Vec& v : verts) {
    const double s = v.dot(xi);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

}  // namespace

double width(const ConvexBody& K, const Vec& xi) {
  if (K.is_polytope()) return vertex_width(K.structure().vertices(), xi);
  return K.support(xi) + K.support(-xi);
}

std::vector<Vec> sphere_directions(int n, int count) {
  require(n >= 1 && n <= 12, ErrorCode::InvalidArgument, "sphere_directions supports n <= 12");
  std::vector<Vec> out;
  out.reserve(count);
  for (long long i = 1; static_cast<int>(out.size()) < count; ++i) {
    Vec g(n);
    for (int j = 0; j < n; ++j) {
      const double u = radical_inverse(kPrimes[j], i);
      g[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    const double nrm = g.norm();
    if (nrm > 1e-12) out.push_back(g / nrm);
  }
  return out;
}

std::pair<double, Vec> sphere_minimize(const std::function<double(const Vec&)>& f, int n,
                                       const std::vector<Vec>& seeds, int budget) {
  std::vector<Vec> cands;
  for (const Vec& s : seeds)
    if (s.norm() > 0.0) cands.push_back(s.normalized());
  for (Vec& d : sphere_directions(n, budget)) cands.push_back(std::move(d));
  if (n == 1) cands = {Vec::Ones(1)};

  std::vector<std::pair<double, int>> scored;
  scored.reserve(cands.size());
  for (size_t i = 0; i < cands.size(); ++i) scored.emplace_back(f(cands[i]), static_cast<int>(i));
  std::sort(scored.begin(), scored.end());

  double best = scored.front().first;
  Vec best_dir = cands[scored.front().second];
  const int starts = std::min<int>(10, static_cast<int>(scored.size()));
  for (int s = 0; s < starts && n > 1; ++s) {
    Vec u = cands[scored[s].second];
    double val = scored[s].first;
    double step = 0.25;
    int evals = 0;
    while (step > 1e-9 && evals < 4000) {
      bool improved = false;
      for (int j = 0; j < n && !improved; ++j) {
        for (double sgn : {1.0, -1.0}) {
          Vec c = u;
          c[j] += sgn * step;
          c.normalize();
          const double v = f(c);
          ++evals;
          if (v < val) {
            val = v;
            u = c;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (val < best) {
      best = val;
      best_dir = u;
    }
  }
  return {best, best_dir};
}

MinWidth min_width(const ConvexBody& K, int budget) {
  const int n = K.dim();
  if (const Ball* b = K.as_ball()) return {2.0 * b->radius, Vec::Unit(n, 0), true};
  require(K.is_polytope(), ErrorCode::Unsupported, "min_width needs a polytope or a ball");
  if (auto box = K.as_box()) {
    const Vec side = box->second - box->first;
    Eigen::Index j;
    const double w = side.minCoeff(&j);
    return {w, Vec::Unit(n, j), true};
  }
  const auto& verts = K.structure().vertices();
  std::vector<Vec> seeds;
  for (const auto& f : K.structure().facets()) seeds.push_back(f.normal);
  const size_t pairs = verts.size() * (verts.size() - 1) / 2;
  const size_t stride = std::max<size_t>(1, pairs / 20000);
  size_t k = 0;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j, ++k)
      if (k % stride == 0) seeds.push_back(verts[j] - verts[i]);
  auto [value, dir] = sphere_minimize([&](const Vec& u) { return vertex_width(verts, u); }, n,
                                      seeds, budget);
  return {value, dir, false};
}

double inradius_origin(const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) {
    const double r = b->radius - b->center.norm();
    require(r > 0.0, ErrorCode::OriginNotInterior, "origin is not interior to the ball");
    return r;
  }
  if (K.kind() == ConvexBody::Kind::Intersection) {
    const auto [a, c] = K.intersection_parts();
    return std::min(inradius_origin(a), inradius_origin(c));
  }
  const HPolytope& h = K.h_form();
  const double r = h.b.minCoeff();
  require(r > 0.0, ErrorCode::OriginNotInterior, "origin is not interior to the polytope");
  // A redundant row's halfspace still contains K, so it never lowers the minimum.
  return r;
}

InballResult chebyshev_inball(const ConvexBody& K) {
  require(K.is_polytope(), ErrorCode::Unsupported, "chebyshev_inball needs a polytope");
  const HPolytope& h = K.as_h() ? *K.as_h() : K.h_form();
  const ChebyshevBall cb = chebyshev_ball(h.A, h.b);
  require(cb.status == LpStatus::Optimal, ErrorCode::Degenerate, "inball LP failed");
  require(cb.radius > 0.0, ErrorCode::Degenerate, "body has empty interior");
  InballResult out{cb.center, cb.radius, {}};
  const double scale = std::max(1.0, h.b.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < h.A.rows(); ++i) {
    const double nrm = h.A.row(i).norm();
    if (std::abs(h.A.row(i).dot(cb.center) + cb.radius * nrm - h.b[i]) <= 1e-9 * scale * nrm)
      out.active.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<FacetRecord> facets(const ConvexBody& K) {
  const auto& s = K.structure();
  std::vector<FacetRecord> out;
  for (size_t f = 0; f < s.facets().size(); ++f) {
    FacetRecord r;
    r.normal = s.facets()[f].normal;
    r.offset = s.facets()[f].offset;
    for (int v : s.facets()[f].vertices) r.vertices.push_back(s.vertices()[v]);
    r.area = s.facet_area(static_cast<int>(f));
    r.index = static_cast<int>(f);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Vec> enumerate_vertices(const ConvexBody& K) { return K.structure().vertices(); }

double volume(const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) return unit_ball_volume(K.dim()) * std::pow(b->radius, K.dim());
  require(K.is_polytope(), ErrorCode::Unsupported, "volume needs a polytope or a ball");
  return K.structure().volume();
}

double surface_area(const ConvexBody& K) {
  const int n = K.dim();
  if (const Ball* b = K.as_ball()) {
    if (n == 1) return 2.0;
    return n * unit_ball_volume(n) * std::pow(b->radius, n - 1);
  }
  require(K.is_polytope(), ErrorCode::Unsupported, "surface area needs a polytope or a ball");
  if (n == 1) return 2.0;  // counting measure of the two endpoints
  return K.structure().surface_area();
}

double circumradius_origin(const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) return b->center.norm() + b->radius;
  require(K.is_polytope(), ErrorCode::Unsupported, "circumradius needs a polytope or a ball");
  double r = 0.0;
  for (const Vec& v : K.structure().vertices()) r = std::max(r, v.norm());
  return r;
}

std::pair<Vec, Vec> bounding_box(const ConvexBody& K) {
  if (const Ball* b = K.as_ball())
    return {b->center.array() - b->radius, b->center.array() + b->radius};
  if (K.kind() == ConvexBody::Kind::Intersection) {
    const auto [a, c] = K.intersection_parts();
    auto ba = bounding_box(a);
    auto bc = bounding_box(c);
    return {ba.first.cwiseMax(bc.first), ba.second.cwiseMin(bc.second)};
  }
  const auto& verts = K.structure().vertices();
  Vec lo = verts.front(), hi = verts.front();
  for (const Vec& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

bool is_symmetric(const ConvexBody& K, double tol) {
  if (const Ball* b = K.as_ball()) return b->center.norm() <= tol * b->radius;
  if (!K.is_polytope()) return false;
  const auto& verts = K.structure().vertices();
  double scale = 1.0;
  for (const Vec& v : verts) scale = std::max(scale, v.norm());
  for (const Vec& v : verts) {
    bool found = false;
    for (const Vec& w : verts)
      if ((v + w).norm() <= tol * scale) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

Projection project_onto_polytope(const HPolytope& P, const Vec& x, int max_sweeps, double tol) {
  const Eigen::Index m = P.A.rows();
  Vec lambda = Vec::Zero(m);
  Vec norms2(m);
  for (Eigen::Index i = 0; i < m; ++i) norms2[i] = P.A.row(i).squaredNorm();
  Vec y = x;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  Projection out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double viol = P.A.row(i).dot(y) - P.b[i];
      const double next = std::max(0.0, lambda[i] + viol / norms2[i]);
      const double delta = next - lambda[i];
      if (delta != 0.0) {
        y -= delta * P.A.row(i).transpose();
        lambda[i] = next;
        change = std::max(change, std::abs(delta) * std::sqrt(norms2[i]));
      }
    }
    if (change <= tol * scale) {
      out.converged = true;
      break;
    }
  }
  out.point = y;
  out.distance = (y - x).norm();
  return out;
}

}  // namespace lcp
