#pragma once

#include <cstdint>
#include <vector>

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

struct SurfaceSample {
  Eigen::Vector3d point;
  Eigen::Vector3d normal;  // outward
  std::uint32_t triangle = 0;
};

// Area-weighted uniform samples; deterministic per seed. Throws EmptyMesh for
// meshes without area.
std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, std::size_t count,
                                          std::uint64_t seed);

}  // namespace tabletop::geom
