#include "support/lp_oracle.hpp"

#include <cmath>
#include <limits>

namespace tabletop::testing {
namespace {

constexpr double kEps = 1e-11;

// Tableau rows: constraints then objective (minimisation form, row holds
// reduced costs; last column = rhs / -objective).
bool run_simplex(Eigen::MatrixXd& t, std::vector<int>& basis, int columns) {
  const int m = static_cast<int>(t.rows()) - 1;
  const int rhs = static_cast<int>(t.cols()) - 1;
  int degenerate_streak = 0;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    if (degenerate_streak < 20) {
      double most = -kEps;
      for (int j = 0; j < columns; ++j) {
        if (t(m, j) < most) {
          most = t(m, j);
          enter = j;
        }
      }
    } else {
      for (int j = 0; j < columns && enter < 0; ++j) {
        if (t(m, j) < -kEps) enter = j;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (t(r, enter) > kEps) {
        const double q = t(r, rhs) / t(r, enter);
        if (q < ratio - 1e-14 || (q <= ratio + 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
          ratio = q;
          leave = r;
        }
      }
    }
    if (leave < 0) return false;
    degenerate_streak = ratio < 1e-14 ? degenerate_streak + 1 : 0;
    t.row(leave) /= t(leave, enter);
    for (int r = 0; r <= m; ++r) {
      if (r != leave) t.row(r) -= t(r, enter) * t.row(leave);
    }
    basis[leave] = enter;
  }
  return false;
}

}  // namespace

std::optional<double> oracle_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const double sign = b(r) < 0 ? -1.0 : 1.0;
    t.row(r).head(n) = sign * a.row(r);
    t(r, n + r) = 1.0;
    t(r, n + m) = sign * b(r);
    basis[r] = n + r;
    t.row(m) -= t.row(r);
  }
  t.row(m).segment(n, m).setZero();
  run_simplex(t, basis, n);
  if (-t(m, n + m) > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) return std::nullopt;
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t(r, j)) > 1e-9) {
        t.row(r) /= t(r, j);
        for (int q = 0; q <= m; ++q) {
          if (q != r) t.row(q) -= t(q, j) * t.row(r);
        }
        basis[r] = j;
        break;
      }
    }
  }
  t.row(m).setZero();
  t.row(m).head(n) = -c.transpose();
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) t.row(m) += c(basis[r]) * t.row(r);
  }
  if (!run_simplex(t, basis, n)) return std::nullopt;
  double value = 0.0;
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) value += c(basis[r]) * t(r, n + m);
  }
  return value;
}

std::optional<double> oracle_min_weight(const std::vector<Wrench>& points) {
  // lambda_i = s + mu_i with mu, s >= 0.
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(7);
  for (int i = 0; i < n; ++i) {
    a.block<6, 1>(0, i) = points[i];
    a.block<6, 1>(0, n) += points[i];
    a(6, i) = 1.0;
  }
  a(6, n) = n;
  b(6) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;
  return oracle_maximize(a, b, c);
}

bool oracle_origin_inside(const std::vector<Wrench>& points) {
  Eigen::MatrixXd w(6, points.size());
  for (std::size_t i = 0; i < points.size(); ++i) w.col(i) = points[i];
  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(w);
  rank_check.setThreshold(1e-9);
  if (rank_check.rank() < 6) return false;
  const auto s = oracle_min_weight(points);
  return s && *s > 1e-10;
}

bool oracle_in_hull(const std::vector<Wrench>& points, const Wrench& x) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, n);
  Eigen::VectorXd b(7);
  for (int i = 0; i < n; ++i) {
    a.block<6, 1>(0, i) = points[i];
    a(6, i) = 1.0;
  }
  b << x, 1.0;
  return oracle_maximize(a, b, Eigen::VectorXd::Zero(n)).has_value();
}

}  // namespace tabletop::testing
