#include "lcp/body.hpp"

#include "lcp/geometry.hpp"
#include "lcp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <variant>

namespace lcp {

namespace {

struct Pair {
  ConvexBody first;
  ConvexBody second;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_h(const Mat& A, const Vec& b) {
  const int n = static_cast<int>(A.cols());
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(A.rows() == b.size(), ErrorCode::InvalidArgument, "A and b sizes differ");
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    require(A.row(i).norm() > 0.0, ErrorCode::InvalidArgument,
            "constraint row " + std::to_string(i) + " is zero");
  for (int j = 0; j < n; ++j) {
    for (double sgn : {1.0, -1.0}) {
      const LpResult r = lp_maximize(A, b, sgn * Vec::Unit(n, j));
      require(r.status != LpStatus::Infeasible, ErrorCode::Infeasible, "H-polytope is empty");
      require(r.status == LpStatus::Optimal, ErrorCode::NonCompact, "H-polytope is unbounded");
    }
  }
  const ChebyshevBall cb = chebyshev_ball(A, b);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  require(cb.status == LpStatus::Optimal && cb.radius > 1e-10 * scale, ErrorCode::LowerDimensional,
          "H-polytope has empty interior");
}

// Clips [lo, hi] to {s : s (a.d) <= b - a.x}, given ad = a.d and rest = b - a.x.
void clip_values(double ad, double rest, double& lo, double& hi) {
  if (std::abs(ad) <= 1e-300) {
    if (rest < 0.0) {
      lo = kInf;
      hi = -kInf;
    }
    return;
  }
  const double s = rest / ad;
  if (ad > 0.0)
    hi = std::min(hi, s);
  else
    lo = std::max(lo, s);
}

}  // namespace

struct ConvexBody::Node {
  std::variant<HPolytope, VPolytope, Ball, Pair> shape;
  int dim = 0;
  mutable std::once_flag once;
  mutable std::optional<PolytopeStructure> structure;
  // Normalized H-form used for membership/chords of polytopes.
  mutable std::once_flag h_once;
  mutable HPolytope unit_h;
};

ConvexBody ConvexBody::hpolytope(Mat A, Vec b) {
  validate_h(A, b);
  auto node = std::make_shared<Node>();
  node->dim = static_cast<int>(A.cols());
  node->shape = HPolytope{std::move(A), std::move(b)};
  return ConvexBody(node);
}

ConvexBody ConvexBody::vpolytope(std::vector<Vec> vertices) {
  require(!vertices.empty(), ErrorCode::InvalidArgument, "V-polytope needs vertices");
  const int n = static_cast<int>(vertices.front().size());
  for (const Vec& v : vertices)
    require(v.size() == n, ErrorCode::InvalidArgument, "vertex dimensions differ");
  auto node = std::make_shared<Node>();
  node->dim = n;
  node->shape = VPolytope{std::move(vertices)};
  ConvexBody body(node);
  body.structure();  // validates full-dimensionality
  return body;
}

ConvexBody ConvexBody::ball(Vec center, double radius) {
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "ball radius must be positive");
  auto node = std::make_shared<Node>();
  node->dim = static_cast<int>(center.size());
  node->shape = Ball{std::move(center), radius};
  return ConvexBody(node);
}

ConvexBody ConvexBody::box(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  Mat A = Mat::Zero(2 * n, n);
  Vec b(2 * n);
  for (int j = 0; j < n; ++j) {
    require(hi[j] > lo[j], ErrorCode::LowerDimensional, "box side must be positive");
    A(2 * j, j) = 1.0;
    b[2 * j] = hi[j];
    A(2 * j + 1, j) = -1.0;
    b[2 * j + 1] = -lo[j];
  }
  return hpolytope(std::move(A), std::move(b));
}

ConvexBody ConvexBody::cube(int n, double half_side) {
  return box(Vec::Constant(n, -half_side), Vec::Constant(n, half_side));
}

ConvexBody::Kind ConvexBody::kind() const {
  switch (node_->shape.index()) {
    case 0: return Kind::HPolytope;
    case 1: return Kind::VPolytope;
    case 2: return Kind::Ball;
    default: return Kind::Intersection;
  }
}

int ConvexBody::dim() const { return node_->dim; }

const HPolytope* ConvexBody::as_h() const { return std::get_if<HPolytope>(&node_->shape); }
const VPolytope* ConvexBody::as_v() const { return std::get_if<VPolytope>(&node_->shape); }
const Ball* ConvexBody::as_ball() const { return std::get_if<Ball>(&node_->shape); }

std::pair<ConvexBody, ConvexBody> ConvexBody::intersection_parts() const {
  const Pair* p = std::get_if<Pair>(&node_->shape);
  require(p != nullptr, ErrorCode::InvalidArgument, "body is not an intersection");
  return {p->first, p->second};
}

const PolytopeStructure& ConvexBody::structure() const {
  require(is_polytope(), ErrorCode::Unsupported, "body is not a polytope");
  std::call_once(node_->once, [&] {
    if (const HPolytope* h = as_h())
      node_->structure = PolytopeStructure::from_h(h->A, h->b);
    else
      node_->structure = PolytopeStructure::from_v(as_v()->vertices);
  });
  return *node_->structure;
}

const HPolytope& ConvexBody::h_form() const {
  require(is_polytope(), ErrorCode::Unsupported, "body is not a polytope");
  std::call_once(node_->h_once, [&] {
    HPolytope out;
    if (const HPolytope* h = as_h()) {
      out = *h;
      for (Eigen::Index i = 0; i < out.A.rows(); ++i) {
        const double nrm = out.A.row(i).norm();
        out.A.row(i) /= nrm;
        out.b[i] /= nrm;
      }
    } else {
      const auto& facets = structure().facets();
      out.A.resize(facets.size(), dim());
      out.b.resize(facets.size());
      for (size_t f = 0; f < facets.size(); ++f) {
        out.A.row(f) = facets[f].normal.transpose();
        out.b[f] = facets[f].offset;
      }
    }
    node_->unit_h = std::move(out);
  });
  return node_->unit_h;
}

bool ConvexBody::contains(const Vec& x, double tol) const {
  if (const Ball* ball = as_ball())
    return (x - ball->center).norm() <= ball->radius + tol * std::max(1.0, ball->radius);
  if (const Pair* p = std::get_if<Pair>(&node_->shape))
    return p->first.contains(x, tol) && p->second.contains(x, tol);
  h_form();
  const HPolytope& h = node_->unit_h;
  const double scale = std::max(1.0, h.b.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < h.A.rows(); ++i)
    if (h.A.row(i).dot(x) - h.b[i] > tol * scale) return false;
  return true;
}

std::pair<double, double> ConvexBody::chord(const Vec& x, const Vec& d) const {
  if (const Ball* ball = as_ball()) {
    // |x - c + s d|^2 = r^2
    const Vec y = x - ball->center;
    const double a = d.squaredNorm();
    const double hb = y.dot(d);
    const double c = y.squaredNorm() - ball->radius * ball->radius;
    const double disc = hb * hb - a * c;
    if (disc < 0.0 || a == 0.0) return {kInf, -kInf};
    const double sq = std::sqrt(disc);
    return {(-hb - sq) / a, (-hb + sq) / a};
  }
  if (const Pair* p = std::get_if<Pair>(&node_->shape)) {
    const auto [l1, h1] = p->first.chord(x, d);
    const auto [l2, h2] = p->second.chord(x, d);
    return {std::max(l1, l2), std::min(h1, h2)};
  }
  h_form();
  const HPolytope& h = node_->unit_h;
  const Vec ad = h.A * d;
  const Vec rest = h.b - h.A * x;
  double lo = -kInf, hi = kInf;
  for (Eigen::Index i = 0; i < h.A.rows() && lo <= hi; ++i) clip_values(ad[i], rest[i], lo, hi);
  return {lo, hi};
}

double ConvexBody::support(const Vec& xi) const {
  require(xi.size() == dim(), ErrorCode::InvalidArgument, "direction has wrong dimension");
  require(xi.norm() > 0.0, ErrorCode::InvalidArgument, "support direction must be nonzero");
  if (const Ball* ball = as_ball()) return ball->center.dot(xi) + ball->radius * xi.norm();
  if (const VPolytope* v = as_v()) {
    double best = -kInf;
    for (const Vec& p : v->vertices) best = std::max(best, p.dot(xi));
    return best;
  }
  if (const HPolytope* h = as_h()) {
    const LpResult r = lp_maximize(h->A, h->b, xi);
    require(r.status == LpStatus::Optimal, ErrorCode::NonCompact, "support LP did not solve");
    return r.value;
  }
  throw Error(ErrorCode::Unsupported,
              "support function of an intersection with a ball is not available");
}

std::optional<std::pair<Vec, Vec>> ConvexBody::as_box() const {
  if (!is_polytope()) return std::nullopt;
  const auto& verts = structure().vertices();
  const int n = dim();
  if (verts.size() != (size_t{1} << n)) return std::nullopt;
  Vec lo = verts.front(), hi = verts.front();
  for (const Vec& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double tol = 1e-12 * std::max({1.0, lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()});
  for (const Vec& v : verts)
    for (int j = 0; j < n; ++j)
      if (std::abs(v[j] - lo[j]) > tol && std::abs(v[j] - hi[j]) > tol) return std::nullopt;
  return std::make_pair(lo, hi);
}

ConvexBody ConvexBody::scaled(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), ErrorCode::InvalidArgument,
          "dilation factor must be positive");
  auto node = std::make_shared<Node>();
  node->dim = dim();
  if (const HPolytope* h = as_h()) {
    node->shape = HPolytope{h->A, h->b * factor};
  } else if (const VPolytope* v = as_v()) {
    VPolytope out;
    for (const Vec& p : v->vertices) out.vertices.push_back(p * factor);
    node->shape = std::move(out);
  } else if (const Ball* b = as_ball()) {
    node->shape = Ball{b->center * factor, b->radius * factor};
  } else {
    const Pair& p = std::get<Pair>(node_->shape);
    node->shape = Pair{p.first.scaled(factor), p.second.scaled(factor)};
  }
  return ConvexBody(node);
}

ConvexBody ConvexBody::translated(const Vec& shift) const {
  require(shift.size() == dim(), ErrorCode::InvalidArgument, "shift has wrong dimension");
  auto node = std::make_shared<Node>();
  node->dim = dim();
  if (const HPolytope* h = as_h()) {
    node->shape = HPolytope{h->A, h->b + h->A * shift};
  } else if (const VPolytope* v = as_v()) {
    VPolytope out;
    for (const Vec& p : v->vertices) out.vertices.push_back(p + shift);
    node->shape = std::move(out);
  } else if (const Ball* b = as_ball()) {
    node->shape = Ball{b->center + shift, b->radius};
  } else {
    const Pair& p = std::get<Pair>(node_->shape);
    node->shape = Pair{p.first.translated(shift), p.second.translated(shift)};
  }
  return ConvexBody(node);
}

ConvexBody ConvexBody::linear_image(const Mat& T) const {
  require(T.rows() == dim() && T.cols() == dim(), ErrorCode::InvalidArgument,
          "map has wrong shape");
  Eigen::FullPivLU<Mat> lu(T);
  require(lu.isInvertible(), ErrorCode::Degenerate, "linear map is singular");
  auto node = std::make_shared<Node>();
  node->dim = dim();
  if (const HPolytope* h = as_h()) {
    node->shape = HPolytope{h->A * lu.inverse(), h->b};
  } else if (const VPolytope* v = as_v()) {
    VPolytope out;
    for (const Vec& p : v->vertices) out.vertices.push_back(T * p);
    node->shape = std::move(out);
  } else if (const Ball* b = as_ball()) {
    // Only similarities keep a ball a ball.
    const double lam = std::pow(std::abs(T.determinant()), 1.0 / dim());
    const Mat G = T.transpose() * T;
    require((G - lam * lam * Mat::Identity(dim(), dim())).norm() <= 1e-10 * lam * lam,
            ErrorCode::Unsupported, "image of a ball under a non-similarity is an ellipsoid");
    node->shape = Ball{T * b->center, b->radius * lam};
  } else {
    const Pair& p = std::get<Pair>(node_->shape);
    node->shape = Pair{p.first.linear_image(T), p.second.linear_image(T)};
  }
  return ConvexBody(node);
}

std::string ConvexBody::describe() const {
  const std::string n = std::to_string(dim());
  if (const HPolytope* h = as_h())
    return "hpolytope(n=" + n + ",m=" + std::to_string(h->A.rows()) + ")";
  if (const VPolytope* v = as_v())
    return "vpolytope(n=" + n + ",k=" + std::to_string(v->vertices.size()) + ")";
  if (as_ball()) return "ball(n=" + n + ")";
  const Pair& p = std::get<Pair>(node_->shape);
  return "intersection(" + p.first.describe() + "," + p.second.describe() + ")";
}

ConvexBody intersect(const ConvexBody& a, const ConvexBody& b) {
  require(a.dim() == b.dim(), ErrorCode::InvalidArgument, "dimension mismatch");
  if (a.is_polytope() && b.is_polytope()) {
    const HPolytope& ha = a.h_form();
    const HPolytope& hb = b.h_form();
    Mat A(ha.A.rows() + hb.A.rows(), a.dim());
    A << ha.A, hb.A;
    Vec bb(ha.b.size() + hb.b.size());
    bb << ha.b, hb.b;
    const ChebyshevBall cb = chebyshev_ball(A, bb);
    require(cb.status == LpStatus::Optimal, ErrorCode::EmptyIntersection,
            "bodies do not intersect");
    const double scale = std::max(1.0, bb.cwiseAbs().maxCoeff());
    require(cb.radius > 1e-10 * scale, ErrorCode::LowerDimensional,
            "intersection is lower-dimensional");
    return ConvexBody::hpolytope(std::move(A), std::move(bb));
  }
  const auto separation = [](const ConvexBody& ball_body, const ConvexBody& other) {
    const Ball& ball = *ball_body.as_ball();
    double d = 0.0;
    if (const Ball* ob = other.as_ball())
      d = (ob->center - ball.center).norm() - ob->radius;
    else if (other.is_polytope())
      d = project_onto_polytope(other.h_form(), ball.center).distance;
    else
      return;  // nested composites are not pre-checked
    require(d < ball.radius + 1e-12 * ball.radius, ErrorCode::EmptyIntersection,
            "bodies do not intersect");
    require(d < ball.radius * (1.0 - 1e-10), ErrorCode::LowerDimensional,
            "intersection is lower-dimensional");
  };
  if (a.as_ball()) separation(a, b);
  else if (b.as_ball()) separation(b, a);
  auto node = std::make_shared<ConvexBody::Node>();
  node->dim = a.dim();
  node->shape = Pair{a, b};
  return ConvexBody(node);
}

}  // namespace lcp
