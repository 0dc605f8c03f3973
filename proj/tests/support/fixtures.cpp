#include "support/fixtures.hpp"

#include "tabletop/geom/mesh_io.hpp"
#include "tabletop/geom/primitives.hpp"

namespace tabletop::testing {

objectlib::ObjectType ingest_mesh(const TempDir& dir, const std::string& id,
                                  const geom::TriMesh& mesh, double mass, double friction) {
  const auto path = dir / ("meshes/" + id + ".obj");
  std::filesystem::create_directories(path.parent_path());
  geom::write_obj(mesh, path);
  objectlib::ObjectSpec spec;
  spec.identifier = id;
  spec.mesh_path = path;
  spec.mass = mass;
  spec.friction = friction;
  return objectlib::ingest_object(spec);
}

objectlib::ObjectLibrary standard_library(const TempDir& dir) {
  objectlib::ObjectLibrary lib;
  lib.name = "standard";
  const auto add = [&](const std::string& id, const geom::TriMesh& mesh, double mass) {
    lib.objects.emplace(id, ingest_mesh(dir, id, mesh, mass));
  };
  add("cube_5cm", geom::make_centered_box({0.05, 0.05, 0.05}), 0.1);
  add("cube_4cm", geom::make_centered_box({0.04, 0.04, 0.04}), 0.08);
  add("box_small", geom::make_centered_box({0.03, 0.05, 0.08}), 0.12);
  add("box_flat", geom::make_centered_box({0.06, 0.04, 0.03}), 0.09);
  add("cylinder", geom::make_cylinder(0.025, 0.08, 32), 0.15);
  return lib;
}

}  // namespace tabletop::testing
