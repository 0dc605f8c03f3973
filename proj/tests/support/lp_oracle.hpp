#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

// Reference linear programming kept separate from the library solver:
// textbook two-phase tableau, largest-coefficient pivoting with a switch to
// Bland's rule after degenerate steps.
namespace tabletop::testing {

// max c.x subject to A x = b, x >= 0; nullopt when infeasible or unbounded.
std::optional<double> oracle_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      const Eigen::VectorXd& c);

using Wrench = Eigen::Matrix<double, 6, 1>;

// Largest s such that some convex combination with every weight >= s hits the
// origin (nullopt if no combination does).
std::optional<double> oracle_min_weight(const std::vector<Wrench>& points);

// Origin strictly inside the hull: points span R^6 and a combination with all
// weights positive reaches the origin.
bool oracle_origin_inside(const std::vector<Wrench>& points);

// Point inside the closed convex hull.
bool oracle_in_hull(const std::vector<Wrench>& points, const Wrench& x);

}  // namespace tabletop::testing
