#pragma once

#include <array>
#include <span>

#include <Eigen/Geometry>

namespace tabletop::geom {

inline constexpr double kPi = 3.14159265358979323846;

// Rigid transform x -> R x + t. Quaternion kept normalized.
struct Pose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Quaterniond& q, const Eigen::Vector3d& t);

  static Pose identity() { return {}; }
  static Pose from_translation(const Eigen::Vector3d& t);
  static Pose from_rotation(const Eigen::Matrix3d& r);
  static Pose rotation_z(double yaw);
  // Accepts a homogeneous matrix whose rotation block may carry rounding noise;
  // the rotation is re-orthonormalized through the quaternion.
  static Pose from_matrix(const Eigen::Matrix4d& m);
  static Pose from_row_major(std::span<const double, 16> values);

  Eigen::Matrix3d rotation_matrix() const { return rotation.toRotationMatrix(); }
  Eigen::Matrix4d matrix() const;
  std::array<double, 16> row_major() const;

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const { return rotation * v; }
  // Composition: (a * b)(x) = a(b(x)).
  Pose operator*(const Pose& other) const;
  Pose inverse() const;

  bool is_normalized(double tol = 1e-9) const {
    return std::abs(rotation.norm() - 1.0) <= tol;
  }
};

// Yaw of the rotation's x-axis image projected onto the xy-plane
// (ZYX Euler yaw). Left-multiplying by a z-rotation of angle a adds a.
double yaw_of(const Eigen::Matrix3d& r);

// Angle of the relative rotation between two orientations, radians.
double rotation_distance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

}  // namespace tabletop::geom
