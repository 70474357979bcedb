#include "lcp/polytope.hpp"

#include "lcp/lp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

namespace lcp {
namespace {

class Bits {
 public:
  explicit Bits(int size = 0) : words_((size + 63) / 64, 0) {}
  void set(int i) { words_[i >> 6] |= (uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.words_.resize(words_.size());
    for (size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }
  Bits& operator|=(const Bits& o) {
    for (size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  int count() const {
    int c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool subset_of(const Bits& o) const {
    for (size_t k = 0; k < words_.size(); ++k)
      if ((words_[k] & ~o.words_[k]) != 0) return false;
    return true;
  }
  std::vector<int> indices(int limit) const {
    std::vector<int> out;
    for (int i = 0; i < limit; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

 private:
  std::vector<uint64_t> words_;
};

struct DdVertex {
  Vec x;
  Bits tight;
};

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

void normalize_rows(Mat& A, Vec& b) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double nrm = A.row(i).norm();
    require(nrm > 0.0, ErrorCode::InvalidArgument, "constraint row " + std::to_string(i) + " is zero");
    A.row(i) /= nrm;
    b[i] /= nrm;
  }
}

double mean_norm(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const Vec& p : pts) s += p.norm();
  return pts.empty() ? 1.0 : std::max(s / static_cast<double>(pts.size()), 1e-300);
}

int rank_of(const Mat& M, double rel_tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  qr.setThreshold(rel_tol);
  return static_cast<int>(qr.rank());
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<VertexRecord> double_description(const Mat& A_in, const Vec& b_in) {
  const int n = static_cast<int>(A_in.cols());
  const int m = static_cast<int>(A_in.rows());
  require(n >= 1 && n <= kMaxPolytopeDim, ErrorCode::CapExceeded,
          "vertex enumeration supports dimensions 1.." + std::to_string(kMaxPolytopeDim));
  require(m <= kMaxConstraintRows, ErrorCode::CapExceeded,
          "vertex enumeration is capped at " + std::to_string(kMaxConstraintRows) +
              " rows; supply the body in V-form instead");
  require(b_in.size() == m, ErrorCode::InvalidArgument, "A and b sizes differ");
  Mat A = A_in;
  Vec b = b_in;
  normalize_rows(A, b);

  Vec lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    Vec c = Vec::Zero(n);
    c[j] = 1.0;
    const LpResult up = lp_maximize(A, b, c);
    require(up.status != LpStatus::Infeasible, ErrorCode::Infeasible, "polyhedron is empty");
    require(up.status == LpStatus::Optimal, ErrorCode::NonCompact, "polyhedron is unbounded");
    const LpResult down = lp_maximize(A, b, -c);
    require(down.status == LpStatus::Optimal, ErrorCode::NonCompact, "polyhedron is unbounded");
    hi[j] = up.value;
    lo[j] = -down.value;
  }
  const double extent = (hi - lo).maxCoeff();
  const double scale = std::max({1.0, hi.cwiseAbs().maxCoeff(), lo.cwiseAbs().maxCoeff()});
  const double tol = 1e-9 * scale;
  const double pad = 1.0 + extent;

  // Enclosing simplex: x_j >= lo_j - pad (rows m..m+n-1), sum x <= S (row m+n).
  const int total = m + n + 1;
  const Vec L = lo.array() - pad;
  const double S = hi.sum() + pad;
  const double T = S - L.sum();
  std::vector<DdVertex> verts;
  {
    DdVertex v0{L, Bits(total)};
    for (int j = 0; j < n; ++j) v0.tight.set(m + j);
    verts.push_back(v0);
    for (int k = 0; k < n; ++k) {
      DdVertex vk{L, Bits(total)};
      vk.x[k] += T;
      for (int j = 0; j < n; ++j)
        if (j != k) vk.tight.set(m + j);
      vk.tight.set(m + n);
      verts.push_back(vk);
    }
  }

  std::vector<double> slack;
  for (int i = 0; i < m; ++i) {
    const auto nv = verts.size();
    slack.resize(nv);
    std::vector<int> plus, zero, minus;
    for (size_t k = 0; k < nv; ++k) {
      slack[k] = A.row(i).dot(verts[k].x) - b[i];
      if (slack[k] < -tol)
        plus.push_back(static_cast<int>(k));
      else if (slack[k] > tol)
        minus.push_back(static_cast<int>(k));
      else
        zero.push_back(static_cast<int>(k));
    }
    for (int z : zero) verts[z].tight.set(i);
    if (minus.empty()) continue;

    std::vector<DdVertex> next;
    next.reserve(plus.size() + zero.size() + plus.size());
    for (int p : plus) {
      for (int q : minus) {
        Bits common = verts[p].tight & verts[q].tight;
        if (common.count() < n - 1) continue;
        bool adjacent = true;
        for (size_t w = 0; w < nv && adjacent; ++w) {
          if (static_cast<int>(w) == p || static_cast<int>(w) == q) continue;
          if (common.subset_of(verts[w].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        const double t = slack[p] / (slack[p] - slack[q]);
        DdVertex nvtx{verts[p].x + t * (verts[q].x - verts[p].x), common};
        nvtx.tight.set(i);
        next.push_back(std::move(nvtx));
      }
    }
    for (int p : plus) next.push_back(std::move(verts[p]));
    for (int z : zero) next.push_back(std::move(verts[z]));
    verts = std::move(next);
    require(static_cast<int>(verts.size()) <= kMaxEnumeratedVertices, ErrorCode::CapExceeded,
            "vertex enumeration exceeded " + std::to_string(kMaxEnumeratedVertices) + " vertices");
  }

  // Undo the row normalization only in the sense that callers index rows as
  // given; coordinates are unaffected by row scaling.
  std::vector<Vec> pts;
  for (const DdVertex& v : verts) pts.push_back(v.x);
  const double dedup = 1e-9 * mean_norm(pts);

  std::vector<int> order(verts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int c) { return lex_less(verts[a].x, verts[c].x); });
  std::vector<VertexRecord> out;
  std::vector<Bits> out_bits;
  for (int k : order) {
    bool merged = false;
    for (size_t r = 0; r < out.size(); ++r) {
      if ((out[r].x - verts[k].x).cwiseAbs().maxCoeff() <= dedup) {
        out_bits[r] |= verts[k].tight;
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back({verts[k].x, {}});
      out_bits.push_back(verts[k].tight);
    }
  }
  for (size_t r = 0; r < out.size(); ++r) out[r].tight = out_bits[r].indices(m);
  return out;
}

std::vector<Vec> vertices_by_subsets(const Mat& A_in, const Vec& b_in) {
  const int n = static_cast<int>(A_in.cols());
  const int m = static_cast<int>(A_in.rows());
  double combos = 1.0;
  for (int k = 0; k < n; ++k) combos = combos * (m - k) / (k + 1);
  require(n <= 8 && m <= 30 && combos <= 6e6, ErrorCode::CapExceeded,
          "subset enumeration is capped at m <= 30, n <= 8");
  Mat A = A_in;
  Vec b = b_in;
  normalize_rows(A, b);

  std::vector<Vec> found;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Mat M(n, n);
  Vec r(n);
  while (n <= m) {
    for (int k = 0; k < n; ++k) {
      M.row(k) = A.row(idx[k]);
      r[k] = b[idx[k]];
    }
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      const Vec x = lu.solve(r);
      const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
      if (((A * x - b).array() <= 1e-9 * scale).all()) found.push_back(x);
    }
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(found.begin(), found.end(), lex_less);
  const double dedup = 1e-9 * mean_norm(found);
  std::vector<Vec> out;
  for (const Vec& v : found)
    if (out.empty() || (out.back() - v).cwiseAbs().maxCoeff() > dedup) {
      bool dup = false;
      for (const Vec& w : out)
        if ((w - v).cwiseAbs().maxCoeff() <= dedup) dup = true;
      if (!dup) out.push_back(v);
    }
  return out;
}

PolytopeStructure PolytopeStructure::from_h(const Mat& A_in, const Vec& b_in) {
  Mat A = A_in;
  Vec b = b_in;
  normalize_rows(A, b);
  const auto records = double_description(A, b);
  std::vector<Vec> verts;
  for (const auto& r : records) verts.push_back(r.x);
  PolytopeStructure s;
  s.finalize(std::move(verts), A, b);
  return s;
}

PolytopeStructure PolytopeStructure::from_v(const std::vector<Vec>& points_in) {
  require(!points_in.empty(), ErrorCode::InvalidArgument, "empty point set");
  const int n = static_cast<int>(points_in.front().size());
  std::vector<Vec> points = points_in;
  std::sort(points.begin(), points.end(), lex_less);
  {
    const double dedup = 1e-9 * mean_norm(points);
    std::vector<Vec> uniq;
    for (const Vec& p : points) {
      bool dup = false;
      for (const Vec& q : uniq)
        if ((p - q).cwiseAbs().maxCoeff() <= dedup) dup = true;
      if (!dup) uniq.push_back(p);
    }
    points = std::move(uniq);
  }
  require(static_cast<int>(points.size()) >= n + 1, ErrorCode::Degenerate,
          "need at least n+1 distinct points");
  Vec c = Vec::Zero(n);
  for (const Vec& p : points) c += p;
  c /= static_cast<double>(points.size());
  Mat P(points.size(), n);
  for (size_t i = 0; i < points.size(); ++i) P.row(i) = (points[i] - c).transpose();
  require(rank_of(P, 1e-10) == n, ErrorCode::Degenerate, "points are not full-dimensional");

  // Facets of conv(points) are the vertices of the polar {y : <p_i - c, y> <= 1}.
  // A point sitting at the centroid gives a zero row and is interior anyway.
  std::vector<int> row_point;
  for (size_t i = 0; i < points.size(); ++i)
    if (P.row(i).norm() > 1e-12 * mean_norm(points)) row_point.push_back(static_cast<int>(i));
  Mat Pr(row_point.size(), n);
  for (size_t r = 0; r < row_point.size(); ++r) Pr.row(r) = P.row(row_point[r]);
  const auto polar = double_description(Pr, Vec::Ones(row_point.size()));
  Mat A(polar.size(), n);
  Vec b(polar.size());
  std::vector<std::vector<int>> on_facet(points.size());
  for (size_t k = 0; k < polar.size(); ++k) {
    A.row(k) = polar[k].x.transpose();
    b[k] = 1.0 + polar[k].x.dot(c);
    for (int r : polar[k].tight) on_facet[row_point[r]].push_back(static_cast<int>(k));
  }
  // A point is a vertex iff the normals of the facets through it span R^n.
  std::vector<Vec> verts;
  for (size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(on_facet[i].size()) < n) continue;
    Mat N(on_facet[i].size(), n);
    for (size_t k = 0; k < on_facet[i].size(); ++k) N.row(k) = A.row(on_facet[i][k]);
    if (rank_of(N, 1e-9) == n) verts.push_back(points[i]);
  }
  normalize_rows(A, b);
  PolytopeStructure s;
  s.finalize(std::move(verts), A, b);
  return s;
}

void PolytopeStructure::finalize(std::vector<Vec> verts, const Mat& A, const Vec& b) {
  dim_ = static_cast<int>(A.cols());
  std::sort(verts.begin(), verts.end(), lex_less);
  vertices_ = std::move(verts);
  double scale = 1.0;
  for (const Vec& v : vertices_) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const double tol = 1e-8 * scale;

  std::set<std::vector<int>> seen;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    std::vector<int> on;
    for (size_t k = 0; k < vertices_.size(); ++k)
      if (std::abs(A.row(i).dot(vertices_[k]) - b[i]) <= tol) on.push_back(static_cast<int>(k));
    if (on.empty()) continue;
    if (seen.count(on)) continue;
    if (affine_dim(on) != dim_ - 1) {
      warnings_.push_back("row " + std::to_string(i) + " supports a lower-dimensional face; dropped");
      continue;
    }
    seen.insert(on);
    facets_.push_back({A.row(i).transpose(), b[i], std::move(on)});
  }
  vertex_facets_.assign(vertices_.size(), {});
  for (size_t f = 0; f < facets_.size(); ++f)
    for (int v : facets_[f].vertices) vertex_facets_[v].push_back(static_cast<int>(f));
}

int PolytopeStructure::affine_dim(const Face& face) const {
  if (face.size() <= 1) return 0;
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->dims.find(face);
    if (it != memo_->dims.end()) return it->second;
  }
  Mat E(dim_, face.size() - 1);
  for (size_t k = 1; k < face.size(); ++k) E.col(k - 1) = vertices_[face[k]] - vertices_[face[0]];
  const int r = rank_of(E, 1e-9);
  std::lock_guard<std::mutex> lock(memo_->mu);
  memo_->dims.emplace(face, r);
  return r;
}

std::set<PolytopeStructure::Face> PolytopeStructure::facets_of(const Face& face, int face_dim, int apex) const {
  std::set<Face> subfaces;
  for (const FaceHyperplane& f : facets_) {
    Face w;
    std::set_intersection(face.begin(), face.end(), f.vertices.begin(), f.vertices.end(),
                          std::back_inserter(w));
    if (static_cast<int>(w.size()) < face_dim || w.size() == face.size()) continue;
    if (std::binary_search(w.begin(), w.end(), apex)) continue;
    if (subfaces.count(w)) continue;
    if (affine_dim(w) == face_dim - 1) subfaces.insert(std::move(w));
  }
  return subfaces;
}

// Cone decomposition from the apex without expanding into simplices:
// vol_k(F) = (1/k) sum_G dist(apex, aff G) vol_{k-1}(G) over the facets G of
// F that miss the apex. Memoized per face, so shared faces are visited once.
double PolytopeStructure::face_volume(const Face& face, int face_dim) const {
  if (face_dim == 0) return 1.0;
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->volumes.find(face);
    if (it != memo_->volumes.end()) return it->second;
  }
  double vol = 0.0;
  if (face_dim == 1) {
    const Vec dir = vertices_[face.back()] - vertices_[face.front()];
    double lo = vertices_[face.front()].dot(dir), hi = lo;
    for (int v : face) {
      lo = std::min(lo, vertices_[v].dot(dir));
      hi = std::max(hi, vertices_[v].dot(dir));
    }
    vol = (hi - lo) / dir.norm();
  } else {
    const int apex = face.front();
    for (const Face& g : facets_of(face, face_dim, apex)) {
      Mat E(dim_, g.size() - 1);
      for (size_t k = 1; k < g.size(); ++k) E.col(k - 1) = vertices_[g[k]] - vertices_[g[0]];
      Eigen::ColPivHouseholderQR<Mat> qr(E);
      const Mat Q = Mat(qr.householderQ()).leftCols(face_dim - 1);
      const Vec d = vertices_[apex] - vertices_[g[0]];
      const double h = (d - Q * (Q.transpose() * d)).norm();
      vol += h * face_volume(g, face_dim - 1) / face_dim;
    }
  }
  std::lock_guard<std::mutex> lock(memo_->mu);
  memo_->volumes.emplace(face, vol);
  return vol;
}

const PolytopeStructure::Simplices& PolytopeStructure::triangulate(const Face& face,
                                                                   int face_dim) const {
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->triangulations.find(face);
    if (it != memo_->triangulations.end()) return it->second;
  }
  Simplices out;
  if (face_dim == 0) {
    out.push_back({face.front()});
  } else if (face_dim == 1) {
    // Extreme points of a (numerically) collinear set.
    const Vec dir = vertices_[face.back()] - vertices_[face.front()];
    int lo = face.front(), hi = face.front();
    for (int v : face) {
      if (vertices_[v].dot(dir) < vertices_[lo].dot(dir)) lo = v;
      if (vertices_[v].dot(dir) > vertices_[hi].dot(dir)) hi = v;
    }
    out.push_back({std::min(lo, hi), std::max(lo, hi)});
  } else {
    const int apex = face.front();
    const std::set<Face> subfaces = facets_of(face, face_dim, apex);
    for (const Face& w : subfaces) {
      for (const auto& s : triangulate(w, face_dim - 1)) {
        std::vector<int> simplex;
        simplex.reserve(s.size() + 1);
        simplex.push_back(apex);
        simplex.insert(simplex.end(), s.begin(), s.end());
        out.push_back(std::move(simplex));
      }
    }
  }
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->triangulations.emplace(face, std::move(out)).first->second;
}

std::vector<std::vector<int>> PolytopeStructure::triangulation() const {
  Face all(vertices_.size());
  std::iota(all.begin(), all.end(), 0);
  return triangulate(all, dim_);
}

std::vector<std::vector<int>> PolytopeStructure::facet_triangulation(int facet) const {
  return triangulate(facets_.at(facet).vertices, dim_ - 1);
}

double PolytopeStructure::volume() const {
  Face all(vertices_.size());
  std::iota(all.begin(), all.end(), 0);
  return face_volume(all, dim_);
}

const std::vector<double>& PolytopeStructure::facet_simplex_volumes(int facet) const {
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->facet_volumes.find(facet);
    if (it != memo_->facet_volumes.end()) return it->second;
  }
  std::vector<double> vols;
  std::vector<Vec> pts;
  for (const auto& s : triangulate(facets_.at(facet).vertices, dim_ - 1)) {
    pts.clear();
    for (int v : s) pts.push_back(vertices_[v]);
    vols.push_back(simplex_volume(pts));
  }
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->facet_volumes.emplace(facet, std::move(vols)).first->second;
}

double PolytopeStructure::facet_area(int facet) const {
  if (dim_ == 1) return 1.0;
  return face_volume(facets_.at(facet).vertices, dim_ - 1);
}

double PolytopeStructure::surface_area() const {
  double total = 0.0;
  for (size_t f = 0; f < facets_.size(); ++f) total += facet_area(static_cast<int>(f));
  return total;
}

int PolytopeStructure::edge_count() const {
  int edges = 0;
  for (size_t u = 0; u < vertices_.size(); ++u) {
    for (size_t v = u + 1; v < vertices_.size(); ++v) {
      std::vector<int> common;
      std::set_intersection(vertex_facets_[u].begin(), vertex_facets_[u].end(),
                            vertex_facets_[v].begin(), vertex_facets_[v].end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) < dim_ - 1) continue;
      int shared = 0;
      for (size_t w = 0; w < vertices_.size(); ++w) {
        bool in_all = true;
        for (int f : common)
          if (!std::binary_search(facets_[f].vertices.begin(), facets_[f].vertices.end(),
                                  static_cast<int>(w)))
            in_all = false;
        if (in_all) ++shared;
      }
      if (shared == 2) ++edges;
    }
  }
  return edges;
}

double simplex_volume(const std::vector<Vec>& points) {
  const int k = static_cast<int>(points.size()) - 1;
  if (k <= 0) return k == 0 ? 1.0 : 0.0;
  Mat E(points.front().size(), k);
  for (int j = 1; j <= k; ++j) E.col(j - 1) = points[j] - points[0];
  const double g = (E.transpose() * E).determinant();
  return std::sqrt(std::max(g, 0.0)) / factorial(k);
}

double polyhedron_volume_or_zero(const Mat& A, const Vec& b) {
  const int n = static_cast<int>(A.cols());
  if (n == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double a = A(i, 0);
      if (a > 0)
        hi = std::min(hi, b[i] / a);
      else if (a < 0)
        lo = std::max(lo, b[i] / a);
      else if (b[i] < 0)
        return 0.0;
    }
    require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::NonCompact, "unbounded interval");
    return std::max(0.0, hi - lo);
  }
  const ChebyshevBall cb = chebyshev_ball(A, b);
  if (cb.status == LpStatus::Infeasible) return 0.0;
  require(cb.status == LpStatus::Optimal, ErrorCode::NonCompact, "polyhedron is unbounded");
  const double scale = std::max(1.0, cb.center.cwiseAbs().maxCoeff());
  if (cb.radius <= 1e-10 * scale) return 0.0;
  return PolytopeStructure::from_h(A, b).volume();
}

double hyperplane_section_volume(const Mat& A, const Vec& b, const Vec& a, double beta) {
  const int n = static_cast<int>(A.cols());
  const Vec x0 = beta * a;
  const double scale = std::max(1.0, std::abs(beta));
  if (n == 1) {
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (A.row(i).dot(x0) - b[i] > 1e-9 * scale * A.row(i).norm()) return 0.0;
    return 1.0;
  }
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat Q = qr.householderQ();
  const Mat U = Q.rightCols(n - 1);
  std::vector<int> keep;
  const Mat AU = A * U;
  const Vec bb = b - A * x0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double rn = A.row(i).norm();
    if (AU.row(i).norm() <= 1e-12 * rn) {
      if (bb[i] < -1e-9 * scale * rn) return 0.0;
      continue;
    }
    keep.push_back(static_cast<int>(i));
  }
  Mat As(keep.size(), n - 1);
  Vec bs(keep.size());
  for (size_t k = 0; k < keep.size(); ++k) {
    As.row(k) = AU.row(keep[k]);
    bs[k] = bb[keep[k]];
  }
  return polyhedron_volume_or_zero(As, bs);
}

}  // namespace lcp
