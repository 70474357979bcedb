#include "lcp/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lcp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kDegenerateStreak = 25;
constexpr int kMaxIterations = 100000;

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_(rows + 1, cols + 1) {
    t_.setZero();
    basis_.assign(rows, -1);
  }

  double& at(int r, int c) { return t_(r, c); }
  double& rhs(int r) { return t_(r, cols_); }
  double& obj(int c) { return t_(rows_, c); }
  double obj_value() const { return t_(rows_, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int pr, int pc) {
    const double p = t_(pr, pc);
    t_.row(pr) /= p;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = t_(r, pc);
      if (f != 0.0) t_.row(r) -= f * t_.row(pr);
    }
    basis_[pr] = pc;
  }

  // Runs simplex iterations on the current objective row. Columns with
  // allowed[c] == false never enter. Returns false if unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    int degenerate = 0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      const bool bland = degenerate >= kDegenerateStreak;
      int enter = -1;
      double best = -kPivotEps;
      for (int c = 0; c < cols_; ++c) {
        if (!allowed[c]) continue;
        const double v = t_(rows_, c);
        if (v < best) {
          enter = c;
          if (bland) break;
          best = v;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(r, cols_) / a;
        if (ratio < best_ratio - 1e-12 ||
            (leave >= 0 && std::abs(ratio - best_ratio) <= 1e-12 &&
             basis_[r] < basis_[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      degenerate = best_ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::NonConvergence, "simplex iteration limit reached");
  }

 private:
  int rows_;
  int cols_;
  Mat t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  require(b.size() == m && c.size() == d, ErrorCode::InvalidArgument,
          "lp_maximize: dimension mismatch");

  // Columns: u (d), v (d), slack (m), artificial (one per negative rhs).
  std::vector<int> art_row;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0) art_row.push_back(i);
  const int n_art = static_cast<int>(art_row.size());
  const int u0 = 0, v0 = d, s0 = 2 * d, a0 = 2 * d + m;
  const int cols = a0 + n_art;

  Tableau tab(m, cols);
  int next_art = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < d; ++j) {
      tab.at(i, u0 + j) = sign * A(i, j);
      tab.at(i, v0 + j) = -sign * A(i, j);
    }
    tab.at(i, s0 + i) = sign;
    tab.rhs(i) = sign * b[i];
    if (b[i] < 0) {
      tab.at(i, a0 + next_art) = 1.0;
      tab.basis()[i] = a0 + next_art;
      ++next_art;
    } else {
      tab.basis()[i] = s0 + i;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    for (int k = 0; k < n_art; ++k) tab.obj(a0 + k) = 1.0;
    for (int k = 0; k < n_art; ++k) {
      const int r = art_row[k];
      for (int col = 0; col <= cols; ++col) tab.obj(col) -= tab.at(r, col);
    }
    tab.optimize(allowed);
    if (tab.obj_value() < -1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
      return {LpStatus::Infeasible, 0.0, Vec()};
    }
    // Drive remaining artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (tab.basis()[r] < a0) continue;
      for (int col = 0; col < a0; ++col) {
        if (std::abs(tab.at(r, col)) > 1e-9) {
          tab.pivot(r, col);
          break;
        }
      }
    }
    for (int k = 0; k < n_art; ++k) allowed[a0 + k] = false;
  }

  // Phase 2 objective row.
  for (int col = 0; col <= cols; ++col) tab.obj(col) = 0.0;
  for (int j = 0; j < d; ++j) {
    tab.obj(u0 + j) = -c[j];
    tab.obj(v0 + j) = c[j];
  }
  for (int r = 0; r < m; ++r) {
    const int bc = tab.basis()[r];
    const double f = tab.obj(bc);
    if (f != 0.0)
      for (int col = 0; col <= cols; ++col) tab.obj(col) -= f * tab.at(r, col);
  }
  if (!tab.optimize(allowed)) return {LpStatus::Unbounded, 0.0, Vec()};

  Vec x = Vec::Zero(d);
  for (int r = 0; r < m; ++r) {
    const int bc = tab.basis()[r];
    if (bc < v0)
      x[bc - u0] += tab.rhs(r);
    else if (bc < s0)
      x[bc - v0] -= tab.rhs(r);
  }
  return {LpStatus::Optimal, c.dot(x), x};
}

}  // namespace lcp

namespace lcp {

ChebyshevBall chebyshev_ball(const Mat& A, const Vec& b) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  Mat M(m + 1, d + 1);
  Vec rhs(m + 1);
  for (int i = 0; i < m; ++i) {
    M.row(i).head(d) = A.row(i);
    M(i, d) = A.row(i).norm();
    rhs[i] = b[i];
  }
  M.row(m).setZero();
  M(m, d) = -1.0;
  rhs[m] = 0.0;
  Vec c = Vec::Zero(d + 1);
  c[d] = 1.0;
  const LpResult res = lp_maximize(M, rhs, c);
  ChebyshevBall out;
  out.status = res.status;
  if (res.status == LpStatus::Optimal) {
    out.center = res.x.head(d);
    out.radius = res.x[d];
  }
  return out;
}

}  // namespace lcp
