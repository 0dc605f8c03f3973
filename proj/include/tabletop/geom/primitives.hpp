#pragma once

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

// Closed, outward-wound primitive meshes.

// Axis-aligned box spanning [min, min + size].
TriMesh make_box(const Eigen::Vector3d& size,
                 const Eigen::Vector3d& min = Eigen::Vector3d::Zero());
// Box centred on the origin.
TriMesh make_centered_box(const Eigen::Vector3d& size);
// Cylinder along z with its base on z = 0, axis through the origin.
TriMesh make_cylinder(double radius, double height, int segments);
// Square pyramid: base [-b/2, b/2]^2 at z = 0, apex (0, 0, height).
TriMesh make_pyramid(double base, double height);
// Subdivided icosphere.
TriMesh make_icosphere(double radius, int subdivisions);

}  // namespace tabletop::geom
