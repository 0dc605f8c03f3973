#include "tabletop/geom/pose.hpp"

#include <cmath>

namespace tabletop::geom {

Pose::Pose(const Eigen::Quaterniond& q, const Eigen::Vector3d& t)
    : rotation(q.normalized()), translation(t) {}

Pose Pose::from_translation(const Eigen::Vector3d& t) {
  return {Eigen::Quaterniond::Identity(), t};
}

Pose Pose::from_rotation(const Eigen::Matrix3d& r) {
  return {Eigen::Quaterniond(r), Eigen::Vector3d::Zero()};
}

Pose Pose::rotation_z(double yaw) {
  return {Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())),
          Eigen::Vector3d::Zero()};
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  // Project the (possibly rounded) block onto SO(3) before extracting.
  const Eigen::Matrix3d block = m.topLeftCorner<3, 3>();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return {Eigen::Quaterniond(r), m.topRightCorner<3, 1>()};
}

Pose Pose::from_row_major(std::span<const double, 16> values) {
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = values[static_cast<std::size_t>(4 * r + c)];
  }
  return from_matrix(m);
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation;
  return m;
}

std::array<double, 16> Pose::row_major() const {
  const Eigen::Matrix4d m = matrix();
  std::array<double, 16> out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[static_cast<std::size_t>(4 * r + c)] = m(r, c);
  }
  return out;
}

Pose Pose::operator*(const Pose& other) const {
  return {rotation * other.rotation, rotation * other.translation + translation};
}

Pose Pose::inverse() const {
  const Eigen::Quaterniond inv = rotation.conjugate();
  return {inv, -(inv * translation)};
}

double yaw_of(const Eigen::Matrix3d& r) { return std::atan2(r(1, 0), r(0, 0)); }

double rotation_distance(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return a.angularDistance(b);
}

}  // namespace tabletop::geom
