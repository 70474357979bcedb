#pragma once

#include "lcp/polytope.hpp"
#include "lcp/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcp {

struct HPolytope {
  Mat A;  // rows a_i of the constraints <a_i, x> <= b_i
  Vec b;
};

struct VPolytope {
  std::vector<Vec> vertices;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

// An immutable convex body. Scaling and translation are applied eagerly to
// the primitive representations (an H-polytope stays an H-polytope, a ball
// stays a ball), and intersections of two polytopes become one H-polytope,
// so the only composite node kept at run time is the intersection of a ball
// with something else. Copies share state and are safe to use from several
// threads at once.
class ConvexBody {
 public:
  enum class Kind { HPolytope, VPolytope, Ball, Intersection };

  // Validated constructors: H-form must be bounded and full-dimensional,
  // V-form full-dimensional, a ball must have positive radius.
  static ConvexBody hpolytope(Mat A, Vec b);
  static ConvexBody vpolytope(std::vector<Vec> vertices);
  static ConvexBody ball(Vec center, double radius);
  static ConvexBody box(const Vec& lo, const Vec& hi);
  static ConvexBody cube(int n, double half_side);

  Kind kind() const;
  int dim() const;
  bool is_polytope() const { return kind() == Kind::HPolytope || kind() == Kind::VPolytope; }

  // Membership with a scale-aware tolerance on the normalized constraint
  // residuals (or the distance to a ball's sphere).
  bool contains(const Vec& x, double tol = 1e-9) const;

  // The parameter interval {s : x + s d in K}; lo > hi when the line misses K.
  std::pair<double, double> chord(const Vec& x, const Vec& d) const;

  double support(const Vec& xi) const;

  // Primitive views.
  const HPolytope* as_h() const;
  const VPolytope* as_v() const;
  const Ball* as_ball() const;
  std::pair<ConvexBody, ConvexBody> intersection_parts() const;

  // An exact inequality description for polytopes (the facets for V-form).
  const HPolytope& h_form() const;
  // Lazily enumerated vertices/facets/triangulations of a polytope.
  const PolytopeStructure& structure() const;

  // Axis-aligned box [lo, hi] if the body is one (up to 1e-12).
  std::optional<std::pair<Vec, Vec>> as_box() const;

  ConvexBody scaled(double factor) const;
  ConvexBody translated(const Vec& shift) const;
  ConvexBody linear_image(const Mat& T) const;

  std::string describe() const;

 private:
  struct Node;
  explicit ConvexBody(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend ConvexBody intersect(const ConvexBody& a, const ConvexBody& b);
};

// Intersection; polytope pairs become a single H-polytope. Throws
// EmptyIntersection when the bodies are disjoint and LowerDimensional when
// they only touch.
ConvexBody intersect(const ConvexBody& a, const ConvexBody& b);

inline ConvexBody dilate(const ConvexBody& K, double factor) { return K.scaled(factor); }
inline ConvexBody translate(const ConvexBody& K, const Vec& v) { return K.translated(v); }

}  // namespace lcp
