#include "tabletop/graspeval/linear_program.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tabletop::graspeval {
namespace {

// Row-major tableau: rows 0..m-1 constraints, row m objective; last column
// holds the right-hand side.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;
  int m = 0;
  int n = 0;  // structural plus artificial columns

  double rhs(int r) const { return t(r, n); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r <= m; ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Runs simplex on the objective row over columns [0, usable). Returns false
  // when unbounded.
  bool optimise(int usable, double tol) {
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < usable; ++j) {
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double a = t(r, enter);
        if (a <= tol) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave >= 0 &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  double tolerance) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Tableau tab;
  tab.m = m;
  tab.n = n + m;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const double s = b(r) < 0.0 ? -1.0 : 1.0;
    tab.t.block(r, 0, 1, n) = s * a.row(r);
    tab.t(r, n + r) = 1.0;
    tab.t(r, n + m) = s * b(r);
    tab.basis[static_cast<std::size_t>(r)] = n + r;
  }
  // Phase one: minimise the sum of artificials.
  for (int r = 0; r < m; ++r) tab.t.row(m) -= tab.t.row(r);
  for (int r = 0; r < m; ++r) tab.t(m, n + r) = 0.0;
  tab.optimise(n, tolerance);

  const double scale = std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  LpResult result;
  if (-tab.t(m, n + m) > tolerance * scale * 10.0) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis; rows that cannot pivot are
  // redundant and are left with a zero artificial.
  std::vector<char> dead(static_cast<std::size_t>(m), 0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[static_cast<std::size_t>(r)] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(r, j)) > tolerance) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(r, col);
    } else {
      dead[static_cast<std::size_t>(r)] = 1;
    }
  }

  // Phase two objective in terms of the current basis.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, n) = c.transpose();
  for (int r = 0; r < m; ++r) {
    const int bc = tab.basis[static_cast<std::size_t>(r)];
    if (bc < n && c(bc) != 0.0) tab.t.row(m) -= c(bc) * tab.t.row(r);
  }
  if (!tab.optimise(n, tolerance)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int bc = tab.basis[static_cast<std::size_t>(r)];
    if (bc < n && !dead[static_cast<std::size_t>(r)]) result.x(bc) = std::max(0.0, tab.rhs(r));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace tabletop::graspeval
