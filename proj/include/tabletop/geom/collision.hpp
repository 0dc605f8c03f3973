#pragma once

#include <array>

#include "tabletop/geom/bvh.hpp"

namespace tabletop::geom {

// Triangle pairs (and boxes) closer than this count as intersecting, so
// face-to-face touching geometry collides.
inline constexpr double kContactTolerance = 1e-6;

using TriangleCorners = std::array<Eigen::Vector3d, 3>;

Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const TriangleCorners& tri);
double point_triangle_distance(const Eigen::Vector3d& p, const TriangleCorners& tri);
double segment_segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
                                const Eigen::Vector3d& p2, const Eigen::Vector3d& q2);

// True iff the closed triangles intersect or come within `tolerance`.
bool triangles_intersect(const TriangleCorners& a, const TriangleCorners& b,
                         double tolerance = kContactTolerance);

// Oriented box: centre/orientation in some frame plus half extents.
struct OrientedBox {
  Pose pose;
  Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();

  std::array<Eigen::Vector3d, 8> corners() const;
  Eigen::AlignedBox3d aabb() const;
  TriMesh to_mesh() const;
};

// Separating-axis test of a box against a triangle given in the same frame;
// the box is inflated by `tolerance`.
bool box_intersects_triangle(const OrientedBox& box, const TriangleCorners& tri,
                             double tolerance = kContactTolerance);

// Surface intersection of two meshes sharing one frame.
bool bvhs_intersect(const Bvh& a, const Bvh& b, double tolerance = kContactTolerance);

// Ray-parity containment test against a closed mesh.
bool point_in_mesh(const Bvh& mesh, const Eigen::Vector3d& point);

// Box (in the mesh frame) touches the mesh surface, or lies wholly inside it.
bool box_intersects_mesh(const OrientedBox& box, const Bvh& mesh,
                         double tolerance = kContactTolerance);

// True iff some triangle of posed A intersects some triangle of posed B.
// Containment without surface contact is not reported here; see
// point_in_mesh.
bool meshes_intersect(const TriMesh& mesh_a, const Pose& pose_a, const TriMesh& mesh_b,
                      const Pose& pose_b, double tolerance = kContactTolerance);

}  // namespace tabletop::geom
