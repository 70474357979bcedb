#pragma once

#include "lcp/types.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace lcp {

// Hard limits for the combinatorial routines.
inline constexpr int kMaxPolytopeDim = 9;
inline constexpr int kMaxConstraintRows = 1024;
inline constexpr int kMaxEnumeratedVertices = 200000;

struct FaceHyperplane {
  Vec normal;  // unit outward normal
  double offset = 0.0;
  std::vector<int> vertices;  // indices into PolytopeStructure::vertices()
};

// A vertex of {x : A x <= b} together with the rows that are tight there.
struct VertexRecord {
  Vec x;
  std::vector<int> tight;
};

// Vertices of {x : A x <= b} by the double-description method, starting from
// a simplex that encloses the LP bounding box. The polytope must be bounded
// (NonCompact otherwise) and nonempty (Infeasible otherwise).
std::vector<VertexRecord> double_description(const Mat& A, const Vec& b);

// The same vertex set by brute force over all n-subsets of rows. Kept as an
// independent cross-check for double_description; only sensible for small m.
std::vector<Vec> vertices_by_subsets(const Mat& A, const Vec& b);

// Combinatorial description of a full-dimensional polytope: vertices sorted
// lexicographically, irredundant facets, and lazily built triangulations.
// Immutable once constructed apart from the internal memo tables, which are
// guarded by a mutex.
class PolytopeStructure {
 public:
  static PolytopeStructure from_h(const Mat& A, const Vec& b);
  static PolytopeStructure from_v(const std::vector<Vec>& points);

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<FaceHyperplane>& facets() const { return facets_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Pulling triangulation of the whole polytope (n-simplices as vertex index
  // lists) and of a single facet ((n-1)-simplices). The apex of each face is
  // its lexicographically smallest vertex.
  std::vector<std::vector<int>> triangulation() const;
  std::vector<std::vector<int>> facet_triangulation(int facet) const;
  // (n-1)-volumes of the simplices of facet_triangulation(facet), memoized.
  const std::vector<double>& facet_simplex_volumes(int facet) const;

  double volume() const;
  double facet_area(int facet) const;
  double surface_area() const;

  // Number of edges (1-faces); used for Euler-characteristic checks.
  int edge_count() const;

 private:
  using Face = std::vector<int>;
  using Simplices = std::vector<std::vector<int>>;

  PolytopeStructure() = default;
  void finalize(std::vector<Vec> verts, const Mat& A, const Vec& b);
  const Simplices& triangulate(const Face& face, int face_dim) const;
  std::set<Face> facets_of(const Face& face, int face_dim, int apex) const;
  double face_volume(const Face& face, int face_dim) const;
  int affine_dim(const Face& face) const;

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<FaceHyperplane> facets_;
  std::vector<std::vector<int>> vertex_facets_;
  std::vector<std::string> warnings_;

  struct Memo {
    std::mutex mu;
    std::map<Face, Simplices> triangulations;
    std::map<Face, int> dims;
    std::map<int, std::vector<double>> facet_volumes;
    std::map<Face, double> volumes;
  };
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Volume of the simplex spanned by the given points (k+1 points in R^n,
// k <= n) via the Gram determinant of its edge vectors.
double simplex_volume(const std::vector<Vec>& points);

// (n-1)-volume of {x : A x <= b, <a, x> = beta} for a unit vector a, or 0 if
// that set is empty or lower-dimensional. Used to clip facets against bodies.
double hyperplane_section_volume(const Mat& A, const Vec& b, const Vec& a, double beta);

// n-volume of {x : A x <= b}, 0 when empty or lower-dimensional.
double polyhedron_volume_or_zero(const Mat& A, const Vec& b);

}  // namespace lcp
