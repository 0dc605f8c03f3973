#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabletop/graspeval/wrench.hpp"
#include "tabletop/graspgen/grasp.hpp"
#include "tabletop/objectlib/object_type.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::graspeval {

enum class TrialLabel { Success, FailPregraspCollision, FailNoContact, FailObstacleContact, FailCannotHold };

std::string_view to_string(TrialLabel label);
// Throws SchemaViolation for an unknown name.
TrialLabel label_from_string(std::string_view name);

// Pad sampling used when closing: a grid of rays per pad, and the depth past
// the first contact within which pad compliance still makes contact.
inline constexpr int kPadGrid = 5;
inline constexpr double kPadCompliance = 0.003;

struct FingerClosure {
  std::optional<TrialLabel> failure;
  // Contact patch of the left (-x) and right (+x) pad.
  std::array<std::vector<ContactPoint>, 2> fingers;
};

struct GraspOutcome {
  TrialLabel label = TrialLabel::FailNoContact;
  double epsilon_quality = 0.0;
  std::vector<ContactPoint> contacts;
};

// Scene prepared for repeated trials. Throws UnknownObjectId.
class TrialContext {
 public:
  TrialContext(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
               graspgen::ParallelJawGripper gripper, EvalConfig config);

  // Closes both pads from max_opening; `grasp_in_scene` is in the scene frame.
  FingerClosure close_fingers(std::size_t target, const geom::Pose& grasp_in_scene) const;

  // Full trial of a grasp given in the target's object frame. Throws
  // UnknownInstance.
  GraspOutcome evaluate(std::size_t target, const graspgen::Grasp& grasp) const;

  const scene::Scene& scene() const { return scene_; }
  const EvalConfig& config() const { return config_; }

 private:
  struct Hit {
    double distance;
    long owner;  // instance index, -1 for the ground
    Eigen::Vector3d point;
    Eigen::Vector3d normal;  // outward, scene frame
  };
  std::optional<Hit> first_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction,
                               double reach) const;

  const scene::Scene& scene_;
  std::vector<const objectlib::ObjectType*> objects_;
  std::vector<geom::Pose> inverses_;
  graspgen::SceneCollider collider_;
  graspgen::ParallelJawGripper gripper_;
  EvalConfig config_;
};

FingerClosure close_fingers(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                            std::size_t target, const geom::Pose& grasp_in_scene,
                            const graspgen::ParallelJawGripper& gripper);

GraspOutcome evaluate_grasp(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                            std::size_t target, const graspgen::Grasp& grasp,
                            const graspgen::ParallelJawGripper& gripper, const EvalConfig& config);

struct TrialRecord {
  std::string scene_id;
  std::string object_id;
  std::size_t grasp_id = 0;
  bool sim_label = false;
  std::optional<bool> real_label;
  TrialLabel outcome = TrialLabel::FailNoContact;
  double epsilon = 0.0;
  double lift_wrench_scale = 1.2;
};

// Grasps (object frame) to try on one scene instance.
struct InstanceGrasps {
  std::size_t instance = 0;
  graspgen::GraspSet grasps;
};

// One record per grasp in input order. Records carry the object type id, or
// "type@instance" when the type occurs more than once in the scene.
std::vector<TrialRecord> evaluate_batch(const std::string& scene_id, const scene::Scene& scene,
                                        const objectlib::ObjectLibrary& library,
                                        const std::vector<InstanceGrasps>& grasps,
                                        const graspgen::ParallelJawGripper& gripper,
                                        const EvalConfig& config);

// Per (scene, object): ceil(c/2) successes and floor(c/2) failures where
// available, the shortfall of one class filled from the other. Input order is
// kept. Throws InvalidArgument for c < 1.
std::vector<TrialRecord> select_balanced(const std::vector<TrialRecord>& records,
                                         int per_object_count, std::uint64_t seed);

}  // namespace tabletop::graspeval
