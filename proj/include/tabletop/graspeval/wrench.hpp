#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tabletop::graspeval {

using Vector6d = Eigen::Matrix<double, 6, 1>;

struct ContactPoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // inward, unit
  double friction = 0.24;
};

struct EvalConfig {
  int cone_edges = 8;
  double max_grip_force = 40.0;    // N, bound on the summed normal force
  double lift_wrench_scale = 1.2;  // multiplier on the gravity wrench
  double gravity = 9.81;

  // Throws InvalidArgument.
  void validate() const;
};

// Equality residual allowed when checking equilibrium.
inline constexpr double kFeasibilityTolerance = 1e-9;

// Friction cone edges n + mu (cos a t1 + sin a t2), normal component 1. The
// tangent t1 follows n x (p - origin) so the cone turns with the contact set.
std::vector<Eigen::Vector3d> cone_edges(const ContactPoint& contact, const Eigen::Vector3d& origin,
                                        int edges);

// Largest contact distance from the origin (1 when all contacts sit on it).
double torque_scale(const std::vector<ContactPoint>& contacts, const Eigen::Vector3d& origin);

// Unit-force edge wrenches (force, torque / rho) of every contact.
std::vector<Vector6d> primitive_wrenches(const std::vector<ContactPoint>& contacts,
                                         const Eigen::Vector3d& origin, int edges);

// Radius of the largest origin-centred ball inside the hull of the
// primitive wrenches, 0 when the origin is not strictly inside.
double force_closure_epsilon(const std::vector<ContactPoint>& contacts,
                             const Eigen::Vector3d& origin, const EvalConfig& config);

// Whether non-negative cone-edge forces with summed normal force at most
// max_grip_force balance `wrench` (force N, torque N m about `origin`).
bool can_resist_wrench(const std::vector<ContactPoint>& contacts, const Eigen::Vector3d& origin,
                       const Vector6d& wrench, const EvalConfig& config);

}  // namespace tabletop::graspeval
