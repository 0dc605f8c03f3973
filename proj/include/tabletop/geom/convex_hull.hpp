#pragma once

#include <span>

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

// Watertight, outward-wound hull of the input points. Only points on the hull
// appear as vertices. Throws DegenerateInput for coplanar/collinear input.
TriMesh convex_hull(std::span<const Eigen::Vector3d> points);

}  // namespace tabletop::geom
