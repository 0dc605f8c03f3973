#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/geom/pose.hpp"
#include "tabletop/graspgen/gripper.hpp"
#include "tabletop/objectlib/object_type.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::graspgen {

struct Contact {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d inward_normal = Eigen::Vector3d::Zero();
};

// Grasp frame in the object (or scene) frame: x from contacts[0] towards
// contacts[1], origin at their midpoint, approach +z.
struct Grasp {
  geom::Pose pose;
  double width = 0.0;
  std::array<Contact, 2> contacts;
  std::string object_id;

  Grasp transformed(const geom::Pose& t) const;
};

struct SamplingParams {
  int n_surface_samples = 1000;
  int rays_per_cone = 4;
  int n_approach_angles = 8;
  std::uint64_t seed = 0;
  // Optional cap; a seeded subset is kept in generation order.
  std::optional<std::size_t> max_grasps;

  void validate() const;
};

struct GraspSet {
  std::string object_id;
  SamplingParams params;
  std::vector<Grasp> grasps;
};

// Contacts closer than this are discarded.
inline constexpr double kMinContactDistance = 1e-3;

// Angle between each inward normal and the line towards the other contact
// is within arctan(mu).
bool check_antipodal(const Contact& c1, const Contact& c2, double mu);

// Grasp frame for a contact pair rotated by `angle` about the contact axis.
geom::Pose grasp_frame(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2, double angle);

// Samples grasps in the object frame. Throws NonWatertight.
GraspSet sample_antipodal_grasps(const objectlib::ObjectType& object,
                                 const ParallelJawGripper& gripper, const SamplingParams& params);

// True when the hand at the grasp width touches the object anywhere but the
// pad contact slabs. `grasp_pose` is in the object frame.
bool collides_with_target(const ParallelJawGripper& gripper, const geom::Pose& grasp_pose,
                          double width, const geom::Bvh& object);

// Posed scene prepared for repeated gripper tests.
class SceneCollider {
 public:
  // Throws UnknownObjectId.
  SceneCollider(const scene::Scene& scene, const objectlib::ObjectLibrary& library);

  // Gripper-at-pose test against the target (contact slabs exempt when
  // `exempt_target`), every other instance and the ground plane. The pose is
  // in the scene frame.
  bool gripper_collides(std::size_t target, const ParallelJawGripper& gripper,
                        const geom::Pose& grasp_in_scene, double width, bool exempt_target) const;

  // Axis-aligned pass only: some hand box's bounding box overlaps a
  // non-target instance's bounding box, or a box corner dips below the ground.
  bool gripper_overlaps_coarse(std::size_t target, const ParallelJawGripper& gripper,
                               const geom::Pose& grasp_in_scene, double width) const;

 private:
  struct Posed {
    const objectlib::ObjectType* object;
    geom::Pose inverse;
    Eigen::AlignedBox3d box;
  };
  std::vector<Posed> instances_;
};

// Keeps grasps (given in the target's object frame) whose hand at grasp width
// is free in the scene. Throws UnknownInstance.
GraspSet filter_gripper_collisions(const GraspSet& grasps, const scene::Scene& scene,
                                   const objectlib::ObjectLibrary& library, std::size_t target,
                                   const ParallelJawGripper& gripper);

// Conservative pre-filter on bounding boxes; keeps grasps passing
// gripper_overlaps_coarse. Throws UnknownInstance.
GraspSet coarse_collision_filter(const GraspSet& grasps, const scene::Scene& scene,
                                 const objectlib::ObjectLibrary& library, std::size_t target,
                                 const ParallelJawGripper& gripper);

}  // namespace tabletop::graspgen
