#include "tabletop/scene/scene.hpp"

#include <algorithm>
#include <cctype>

#include "tabletop/error.hpp"
#include "tabletop/geom/collision.hpp"
#include "tabletop/geom/rng.hpp"

namespace tabletop::scene {

using objectlib::ObjectLibrary;
using objectlib::ObjectType;

std::optional<GroundArea> area_preset(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "A2") return kAreaA2;
  if (upper == "A3") return kAreaA3;
  if (upper == "A4") return kAreaA4;
  return std::nullopt;
}

std::string_view to_string(InstanceStatus status) {
  switch (status) {
    case InstanceStatus::Ok: return "Ok";
    case InstanceStatus::Collision: return "Collision";
    case InstanceStatus::OutOfBounds: return "OutOfBounds";
  }
  return "Unknown";
}

geom::TriMesh posed_mesh(const ObjectType& object, const geom::Pose& pose) {
  return object.mesh.transformed(pose);
}

namespace {

struct Placed {
  const ObjectType* object;
  geom::Pose pose;
  geom::TriMesh world;
  Eigen::AlignedBox3d box;
};

Placed make_placed(const ObjectType& object, const geom::Pose& pose) {
  Placed p{&object, pose, posed_mesh(object, pose), {}};
  p.box = p.world.bounds();
  return p;
}

// Surface contact, or one closed mesh entirely inside the other.
bool collide(const Placed& a, const Placed& b) {
  const Eigen::Vector3d pad = Eigen::Vector3d::Constant(geom::kContactTolerance);
  const Eigen::AlignedBox3d box_a(a.box.min() - pad, a.box.max() + pad);
  if (!box_a.intersects(b.box)) return false;
  if (geom::meshes_intersect(a.object->mesh, a.pose, b.object->mesh, b.pose)) return true;
  const auto inside = [](const Placed& outer, const Placed& inner) {
    const Eigen::Vector3d local = outer.pose.inverse() * inner.world.vertices.front();
    return geom::point_in_mesh(*outer.object->bvh, local);
  };
  return inside(a, b) || inside(b, a);
}

bool below_ground(const Placed& p) { return p.box.min().z() < -kGroundPenetration; }

bool out_of_bounds(const Placed& p, const GroundArea& area) {
  for (const auto& v : p.world.vertices) {
    if (v.x() < 0.0 || v.x() > area.width || v.y() < 0.0 || v.y() > area.depth) return true;
  }
  return false;
}

}  // namespace

std::vector<InstanceStatus> validate_scene(const Scene& scene, const ObjectLibrary& library) {
  std::vector<Placed> placed;
  placed.reserve(scene.instances.size());
  for (const auto& inst : scene.instances) {
    placed.push_back(make_placed(library.at(inst.object_id), inst.pose));
  }
  std::vector<InstanceStatus> status(placed.size(), InstanceStatus::Ok);
  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (below_ground(placed[i])) status[i] = InstanceStatus::Collision;
    for (std::size_t j = i + 1; j < placed.size(); ++j) {
      if (collide(placed[i], placed[j])) {
        status[i] = InstanceStatus::Collision;
        status[j] = InstanceStatus::Collision;
      }
    }
  }
  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (status[i] == InstanceStatus::Ok && out_of_bounds(placed[i], scene.ground_area)) {
      status[i] = InstanceStatus::OutOfBounds;
    }
  }
  return status;
}

geom::Pose place_pose(const objectlib::StablePose& stable, double x, double y, double yaw) {
  return geom::Pose::from_translation({x, y, 0.0}) * geom::Pose::rotation_z(yaw) * stable.pose;
}

Scene random_scene(const ObjectLibrary& library, const RandomSceneParams& params, GroundArea area) {
  if (params.n < 0 || params.k < 1) {
    throw Error(ErrorCode::InvalidArgument, "random scene needs n >= 0 and k >= 1");
  }
  if (!(area.width > 0.0 && area.depth > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ground area must be positive");
  }
  Scene scene;
  scene.ground_area = area;
  scene.library_path = library.source;
  if (params.n == 0) return scene;
  if (library.objects.empty()) throw Error(ErrorCode::InvalidArgument, "empty object library");

  std::vector<const ObjectType*> types;
  for (const auto& [id, object] : library.objects) types.push_back(&object);

  constexpr double kInset = 1e-9;
  Rng rng(params.seed);
  std::vector<Placed> placed;
  for (int i = 0; i < params.n; ++i) {
    const ObjectType& object = *types[rng.index(types.size())];
    if (object.stable_poses.empty()) continue;
    double u = rng.uniform();
    std::size_t pose_index = object.stable_poses.size() - 1;
    for (std::size_t s = 0; s < object.stable_poses.size(); ++s) {
      u -= object.stable_poses[s].probability;
      if (u < 0.0) {
        pose_index = s;
        break;
      }
    }
    const auto& stable = object.stable_poses[pose_index];
    for (int attempt = 0; attempt < params.k; ++attempt) {
      const double yaw = rng.uniform(0.0, 2.0 * geom::kPi);
      const double fx = rng.uniform();
      const double fy = rng.uniform();
      const geom::Pose oriented = place_pose(stable, 0.0, 0.0, yaw);
      const auto box = posed_mesh(object, oriented).bounds();
      const double x_lo = -box.min().x() + kInset, x_hi = area.width - box.max().x() - kInset;
      const double y_lo = -box.min().y() + kInset, y_hi = area.depth - box.max().y() - kInset;
      if (x_lo > x_hi || y_lo > y_hi) continue;
      Placed candidate = make_placed(
          object, place_pose(stable, x_lo + fx * (x_hi - x_lo), y_lo + fy * (y_hi - y_lo), yaw));
      if (out_of_bounds(candidate, area) || below_ground(candidate)) continue;
      const bool blocked = std::any_of(placed.begin(), placed.end(),
                                       [&](const Placed& p) { return collide(p, candidate); });
      if (blocked) continue;
      scene.instances.push_back({object.identifier, candidate.pose});
      placed.push_back(std::move(candidate));
      break;
    }
  }
  return scene;
}

Scene snap_to_stable(Scene scene, std::size_t instance, const ObjectLibrary& library,
                     std::size_t stable_pose_index) {
  if (instance >= scene.instances.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "instance index " + std::to_string(instance));
  }
  auto& inst = scene.instances[instance];
  const ObjectType& object = library.at(inst.object_id);
  if (stable_pose_index >= object.stable_poses.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "stable pose index " + std::to_string(stable_pose_index) + " of " +
                    std::to_string(object.stable_poses.size()));
  }
  const auto& stable = object.stable_poses[stable_pose_index];
  const double yaw = geom::yaw_of(inst.pose.rotation_matrix()) -
                     geom::yaw_of(stable.pose.rotation_matrix());
  inst.pose = place_pose(stable, inst.pose.translation.x(), inst.pose.translation.y(), yaw);
  return scene;
}

}  // namespace tabletop::scene
