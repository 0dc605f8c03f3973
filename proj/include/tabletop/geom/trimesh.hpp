#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Geometry>

#include "tabletop/geom/pose.hpp"

namespace tabletop::geom {

using Triangle = std::array<std::uint32_t, 3>;

// Triangle mesh in metres. Winding is counter-clockwise seen from outside.
struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Triangle> triangles;

  bool empty() const { return triangles.empty(); }

  // Throws MalformedMesh when an index is out of range, a triangle repeats a
  // vertex, or a coordinate is not finite.
  void validate() const;

  Eigen::AlignedBox3d bounds() const;
  std::array<Eigen::Vector3d, 3> corners(std::size_t tri) const;
  // Unit normal from the winding; zero for degenerate triangles.
  Eigen::Vector3d normal(std::size_t tri) const;
  double area(std::size_t tri) const;
  double surface_area() const;

  TriMesh transformed(const Pose& pose) const;
  TriMesh scaled(double factor) const;
};

// Every undirected edge is shared by exactly two triangles.
bool is_edge_manifold_closed(const TriMesh& mesh);

// Signed enclosed volume (positive for outward winding).
double signed_volume(const TriMesh& mesh);

// Closed edge structure and |signed volume| above 1e-12 m^3 with positive sign.
bool is_watertight(const TriMesh& mesh);

inline constexpr double kWatertightVolumeTolerance = 1e-12;

}  // namespace tabletop::geom
