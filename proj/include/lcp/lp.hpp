#pragma once

#include "lcp/types.hpp"

namespace lcp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
};

// Dense two-phase tableau simplex for
//
//   maximize c.x  subject to  A x <= b,  x free.
//
// Sized for the small problems this library generates (a few hundred rows,
// at most nine columns). Dantzig pricing is used until a run of degenerate
// pivots is seen, then Bland's rule takes over so the method cannot cycle.
// Ratio-test ties go to the lowest basic-variable index, which makes the
// returned vertex deterministic.
LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c);

}  // namespace lcp

namespace lcp {

struct ChebyshevBall {
  LpStatus status = LpStatus::Infeasible;
  Vec center;
  double radius = 0.0;
};

// Largest ball inside {x : A x <= b}: maximize r subject to
// <a_i, x> + r |a_i| <= b_i and r >= 0. Infeasible when the set is empty.
ChebyshevBall chebyshev_ball(const Mat& A, const Vec& b);

}  // namespace lcp
