#include "lcp/random_body.hpp"

namespace lcp {

ConvexBody random_hpolytope(int n, Rng& rng, bool symmetric, double scale) {
  require(n >= 1 && scale > 0.0, ErrorCode::InvalidArgument, "bad random polytope parameters");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    int m = 2 * n + static_cast<int>(rng.below(2 * n + 1));
    if (symmetric) m += m % 2;
    Mat A(m, n);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
      if (symmetric && i % 2 == 1) {
        A.row(i) = -A.row(i - 1);
        b(i) = b(i - 1);
        continue;
      }
      A.row(i) = rng.unit_vec(n).transpose();
      b(i) = scale * rng.uniform(0.3, 1.5);
    }
    try {
      return ConvexBody::hpolytope(std::move(A), std::move(b));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonCompact) throw;
    }
  }
  throw Error(ErrorCode::NonConvergence, "could not draw a bounded random polytope");
}

}  // namespace lcp
