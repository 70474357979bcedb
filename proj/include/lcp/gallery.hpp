#pragma once

#include "lcp/body.hpp"
#include "lcp/measure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lcp {

// A named extremal object with closed-form metadata. For the body entries
// `body` is the isotropic body K (volume one, centered, Cov = L^2 I) and
// `measure` is the isotropic uniform measure on K / L.
struct GalleryEntry {
  std::string name;
  int n = 0;
  std::optional<ConvexBody> body;
  Measure measure;
  std::map<std::string, double> meta;  // e.g. "L", "r", "S", "vol", "gamma"
  std::string notes;
};

// n+1 unit vectors with pairwise inner products -1/n and zero sum.
std::vector<Vec> regular_simplex_vertices(int n);

GalleryEntry regular_simplex_isotropic(int n);
GalleryEntry cube_isotropic(int n);
GalleryEntry cross_polytope_isotropic(int n);
GalleryEntry extremal_1d();
GalleryEntry gaussian_entry(int n);
// Isotropic density proportional to exp(-|x/sigma|^p / p).
GalleryEntry pnorm_isotropic(int n, double p);
// Isotropic density proportional to exp(-||x/sigma||_K^p) for K the cube
// [-1,1]^n or the cross-polytope.
GalleryEntry body_norm_isotropic(int n, double p, const std::string& body);
GalleryEntry product_measure(std::vector<Measure1D> factors);

// One-dimensional standardized gallery densities.
std::vector<std::pair<std::string, Measure1D>> gallery_1d();

std::vector<std::string> gallery_names();
// Looks up an entry by name; `p` is used by the p-norm families.
GalleryEntry gallery_entry(const std::string& name, int n, double p = 1.5);

}  // namespace lcp
