#pragma once

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

struct MassProperties {
  double volume = 0.0;                                       // m^3
  Eigen::Vector3d center_of_mass = Eigen::Vector3d::Zero();  // m
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();         // kg m^2 about the COM
};

// Uniform-density integration over signed tetrahedra. Throws NonWatertight
// unless the mesh is closed with positive volume, InvalidArgument for
// non-positive mass.
MassProperties mass_properties(const TriMesh& mesh, double mass);

}  // namespace tabletop::geom
