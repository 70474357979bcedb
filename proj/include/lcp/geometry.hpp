#pragma once

#include "lcp/body.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace lcp {

double width(const ConvexBody& K, const Vec& xi);

struct MinWidth {
  double value = 0.0;
  Vec direction;
  bool certified = false;  // exact only for balls and axis-aligned boxes
};

// Upper bound on the minimal width: the smallest width over facet normals,
// normalized vertex differences and `budget` quasi-uniform directions,
// refined by a local pattern search from the best ten candidates.
MinWidth min_width(const ConvexBody& K, int budget = 2000);

// Largest r with r B ⊆ K. Throws OriginNotInterior when 0 is not interior.
double inradius_origin(const ConvexBody& K);

struct InballResult {
  Vec center;
  double radius = 0.0;
  std::vector<int> active;  // constraint rows touching the ball
};

// Chebyshev ball of a polytope via its H-form (facets for V-polytopes).
InballResult chebyshev_inball(const ConvexBody& K);

struct FacetRecord {
  Vec normal;
  double offset = 0.0;
  std::vector<Vec> vertices;
  double area = 0.0;
  int index = 0;  // facet index in the body's PolytopeStructure
};

std::vector<FacetRecord> facets(const ConvexBody& K);
std::vector<Vec> enumerate_vertices(const ConvexBody& K);
double volume(const ConvexBody& K);
double surface_area(const ConvexBody& K);

// max |x| over K.
double circumradius_origin(const ConvexBody& K);
std::pair<Vec, Vec> bounding_box(const ConvexBody& K);

// K = -K, decided from the vertex set (polytopes) or the center (balls).
bool is_symmetric(const ConvexBody& K, double tol = 1e-9);

struct Projection {
  Vec point;
  double distance = 0.0;
  bool converged = false;
};

// Euclidean projection onto {y : A y <= b} by Hildreth's row-action method.
Projection project_onto_polytope(const HPolytope& P, const Vec& x, int max_sweeps = 2000,
                                 double tol = 1e-10);

// Deterministic, roughly uniform unit vectors: a Halton sequence pushed
// through the normal quantile function and normalized.
std::vector<Vec> sphere_directions(int n, int count);

// Minimizes a positive function on the unit sphere over the same candidate
// scheme as min_width (the candidate list plus quasi-uniform directions, then
// local search). Returns the best value and direction found, i.e. an upper
// bound on the true minimum.
std::pair<double, Vec> sphere_minimize(const std::function<double(const Vec&)>& f, int n,
                                       const std::vector<Vec>& seeds, int budget);

}  // namespace lcp
