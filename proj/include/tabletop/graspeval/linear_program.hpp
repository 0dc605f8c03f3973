#pragma once

#include <Eigen/Dense>

namespace tabletop::graspeval {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Minimises c.x subject to A x = b, x >= 0 with a dense two-phase simplex
// and Bland's rule. `tolerance` bounds pivots, reduced costs and the phase
// one objective (relative to the largest |b|).
LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  double tolerance = 1e-10);

}  // namespace tabletop::graspeval
