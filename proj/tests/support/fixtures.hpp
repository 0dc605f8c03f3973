#pragma once

#include <filesystem>
#include <string>

#include "support/temp_dir.hpp"
#include "tabletop/geom/trimesh.hpp"
#include "tabletop/objectlib/object_type.hpp"

namespace tabletop::testing {

// Writes `mesh` as OBJ into `dir` and ingests it (scale 1).
objectlib::ObjectType ingest_mesh(const TempDir& dir, const std::string& id,
                                  const geom::TriMesh& mesh, double mass,
                                  double friction = objectlib::kDefaultFriction);

// Library with: cube_5cm, cube_4cm, box_small (3x5x8 cm), box_flat (6x4x3 cm),
// cylinder (r 2.5 cm, h 8 cm), plus anything added by the caller.
objectlib::ObjectLibrary standard_library(const TempDir& dir);

}  // namespace tabletop::testing
