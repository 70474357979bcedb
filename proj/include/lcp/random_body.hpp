#pragma once

#include "lcp/body.hpp"
#include "lcp/rng.hpp"

namespace lcp {

// Random H-polytope with 0 inside: between 2n and 4n random unit normals
// with offsets in scale * [0.3, 1.5], so the Chebyshev radius is at least
// 0.3 * scale. With `symmetric` the rows come in pairs (a, b), (-a, b).
// Unbounded draws are rejected and redrawn.
ConvexBody random_hpolytope(int n, Rng& rng, bool symmetric, double scale = 1.0);

}  // namespace lcp
