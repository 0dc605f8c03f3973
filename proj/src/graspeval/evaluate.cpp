#include "tabletop/graspeval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tabletop/error.hpp"
#include "tabletop/geom/parallel.hpp"
#include "tabletop/geom/rng.hpp"

namespace tabletop::graspeval {
namespace {

constexpr std::array<std::pair<TrialLabel, std::string_view>, 5> kLabelNames{{
    {TrialLabel::Success, "Success"},
    {TrialLabel::FailPregraspCollision, "FailPregraspCollision"},
    {TrialLabel::FailNoContact, "FailNoContact"},
    {TrialLabel::FailObstacleContact, "FailObstacleContact"},
    {TrialLabel::FailCannotHold, "FailCannotHold"},
}};

// Extreme grid cells of a contact region: the corners along both diagonals.
std::vector<int> patch_corners(const std::vector<int>& cells) {
  std::vector<int> picks;
  auto extreme = [&](auto key, bool largest) {
    int best = cells.front();
    for (int c : cells) {
      const int k = key(c);
      const int kb = key(best);
      if (largest ? k > kb : k < kb) best = c;
    }
    if (std::find(picks.begin(), picks.end(), best) == picks.end()) picks.push_back(best);
  };
  auto sum = [](int c) { return c / kPadGrid + c % kPadGrid; };
  auto diff = [](int c) { return c / kPadGrid - c % kPadGrid; };
  extreme(sum, false);
  extreme(diff, true);
  extreme(sum, true);
  extreme(diff, false);
  return picks;
}

}  // namespace

std::string_view to_string(TrialLabel label) {
  for (const auto& [value, name] : kLabelNames) {
    if (value == label) return name;
  }
  return "Unknown";
}

TrialLabel label_from_string(std::string_view name) {
  for (const auto& [value, text] : kLabelNames) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown trial label '" + std::string(name) + "'");
}

TrialContext::TrialContext(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                           graspgen::ParallelJawGripper gripper, EvalConfig config)
    : scene_(scene), collider_(scene, library), gripper_(gripper), config_(config) {
  gripper_.validate();
  config_.validate();
  for (const auto& inst : scene.instances) {
    objects_.push_back(&library.at(inst.object_id));
    inverses_.push_back(inst.pose.inverse());
  }
}

std::optional<TrialContext::Hit> TrialContext::first_hit(const Eigen::Vector3d& origin,
                                                         const Eigen::Vector3d& direction,
                                                         double reach) const {
  std::optional<Hit> best;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const geom::Pose& inv = inverses_[i];
    const auto hit = objects_[i]->bvh->raycast(inv * origin, inv.rotation * direction, 0.0, reach);
    if (hit && (!best || hit->distance < best->distance)) {
      const geom::Pose& pose = scene_.instances[i].pose;
      best = Hit{hit->distance, static_cast<long>(i), pose * hit->point, pose.rotation * hit->normal};
    }
  }
  double t_ground = std::numeric_limits<double>::infinity();
  if (origin.z() <= 0.0) {
    t_ground = 0.0;
  } else if (direction.z() < 0.0) {
    t_ground = -origin.z() / direction.z();
  }
  if (t_ground <= reach && (!best || t_ground < best->distance)) {
    best = Hit{t_ground, -1, origin + t_ground * direction, Eigen::Vector3d::UnitZ()};
  }
  return best;
}

FingerClosure TrialContext::close_fingers(std::size_t target,
                                          const geom::Pose& grasp_in_scene) const {
  FingerClosure out;
  const double half = 0.5 * gripper_.max_opening;
  const double friction = objects_.at(target)->friction;
  bool obstacle = false;
  bool empty = false;
  for (int f = 0; f < 2; ++f) {
    const double s = f == 0 ? -1.0 : 1.0;
    const Eigen::Vector3d dir = grasp_in_scene.rotation * Eigen::Vector3d(-s, 0.0, 0.0);
    std::vector<std::optional<Hit>> hits(kPadGrid * kPadGrid);
    double nearest = std::numeric_limits<double>::infinity();
    for (int a = 0; a < kPadGrid; ++a) {
      for (int b = 0; b < kPadGrid; ++b) {
        const double y = gripper_.pad_width * (static_cast<double>(a) / (kPadGrid - 1) - 0.5);
        const double z = gripper_.pad_height * (static_cast<double>(b) / (kPadGrid - 1) - 0.5);
        const Eigen::Vector3d origin = grasp_in_scene * Eigen::Vector3d(s * half, y, z);
        auto& h = hits[static_cast<std::size_t>(a * kPadGrid + b)];
        h = first_hit(origin, dir, half);
        if (h) nearest = std::min(nearest, h->distance);
      }
    }
    if (!std::isfinite(nearest)) {
      empty = true;
      continue;
    }
    std::vector<int> cells;
    for (int c = 0; c < kPadGrid * kPadGrid; ++c) {
      const auto& h = hits[static_cast<std::size_t>(c)];
      if (!h || h->distance > nearest + kPadCompliance) continue;
      if (h->owner != static_cast<long>(target)) {
        obstacle = true;
      } else {
        cells.push_back(c);
      }
    }
    if (cells.empty()) continue;
    for (int c : patch_corners(cells)) {
      const auto& h = *hits[static_cast<std::size_t>(c)];
      out.fingers[static_cast<std::size_t>(f)].push_back({h.point, -h.normal.normalized(), friction});
    }
  }
  if (obstacle) {
    out.failure = TrialLabel::FailObstacleContact;
  } else if (empty || out.fingers[0].empty() || out.fingers[1].empty()) {
    out.failure = TrialLabel::FailNoContact;
  }
  return out;
}

GraspOutcome TrialContext::evaluate(std::size_t target, const graspgen::Grasp& grasp) const {
  if (target >= objects_.size()) {
    throw Error(ErrorCode::UnknownInstance, "instance " + std::to_string(target));
  }
  const geom::Pose& instance = scene_.instances[target].pose;
  const geom::Pose in_scene = instance * grasp.pose;
  GraspOutcome outcome;
  if (collider_.gripper_collides(target, gripper_, in_scene, gripper_.max_opening, false)) {
    outcome.label = TrialLabel::FailPregraspCollision;
    return outcome;
  }
  const FingerClosure closure = close_fingers(target, in_scene);
  for (const auto& finger : closure.fingers) {
    outcome.contacts.insert(outcome.contacts.end(), finger.begin(), finger.end());
  }
  if (closure.failure) {
    outcome.label = *closure.failure;
    return outcome;
  }
  const objectlib::ObjectType& object = *objects_[target];
  const Eigen::Vector3d com = instance * object.mass_properties.center_of_mass;
  outcome.epsilon_quality = force_closure_epsilon(outcome.contacts, com, config_);
  Vector6d lift = Vector6d::Zero();
  lift.z() = -object.mass * config_.gravity * config_.lift_wrench_scale;
  const bool holds = can_resist_wrench(outcome.contacts, com, lift, config_);
  outcome.label = holds && outcome.epsilon_quality > 0.0 ? TrialLabel::Success : TrialLabel::FailCannotHold;
  return outcome;
}

FingerClosure close_fingers(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                            std::size_t target, const geom::Pose& grasp_in_scene,
                            const graspgen::ParallelJawGripper& gripper) {
  if (target >= scene.instances.size()) {
    throw Error(ErrorCode::UnknownInstance, "instance " + std::to_string(target));
  }
  return TrialContext(scene, library, gripper, EvalConfig{}).close_fingers(target, grasp_in_scene);
}

GraspOutcome evaluate_grasp(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                            std::size_t target, const graspgen::Grasp& grasp,
                            const graspgen::ParallelJawGripper& gripper, const EvalConfig& config) {
  return TrialContext(scene, library, gripper, config).evaluate(target, grasp);
}

std::vector<TrialRecord> evaluate_batch(const std::string& scene_id, const scene::Scene& scene,
                                        const objectlib::ObjectLibrary& library,
                                        const std::vector<InstanceGrasps>& grasps,
                                        const graspgen::ParallelJawGripper& gripper,
                                        const EvalConfig& config) {
  const TrialContext context(scene, library, gripper, config);
  std::map<std::string, int> type_count;
  for (const auto& inst : scene.instances) ++type_count[inst.object_id];

  struct Job {
    std::size_t instance;
    std::size_t index;
    const graspgen::Grasp* grasp;
  };
  std::vector<Job> jobs;
  for (const auto& set : grasps) {
    if (set.instance >= scene.instances.size()) {
      throw Error(ErrorCode::UnknownInstance, "instance " + std::to_string(set.instance));
    }
    for (std::size_t i = 0; i < set.grasps.grasps.size(); ++i) {
      jobs.push_back({set.instance, i, &set.grasps.grasps[i]});
    }
  }
  std::vector<TrialRecord> records(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const GraspOutcome outcome = context.evaluate(job.instance, *job.grasp);
    const std::string& type = scene.instances[job.instance].object_id;
    TrialRecord& r = records[j];
    r.scene_id = scene_id;
    r.object_id = type_count.at(type) > 1 ? type + "@" + std::to_string(job.instance) : type;
    r.grasp_id = job.index;
    r.sim_label = outcome.label == TrialLabel::Success;
    r.outcome = outcome.label;
    r.epsilon = outcome.epsilon_quality;
    r.lift_wrench_scale = config.lift_wrench_scale;
  });
  return records;
}

std::vector<TrialRecord> select_balanced(const std::vector<TrialRecord>& records,
                                         int per_object_count, std::uint64_t seed) {
  if (per_object_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "per-object count must be at least 1");
  }
  std::map<std::pair<std::string, std::string>, std::array<std::vector<std::size_t>, 2>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[{records[i].scene_id, records[i].object_id}][records[i].sim_label ? 0 : 1].push_back(i);
  }
  const std::size_t c = static_cast<std::size_t>(per_object_count);
  std::vector<std::size_t> chosen;
  std::uint64_t group = 0;
  for (auto& [key, classes] : groups) {
    Rng rng(derive_seed(seed, group++));
    for (auto& members : classes) {
      for (std::size_t i = members.size(); i > 1; --i) {
        std::swap(members[i - 1], members[rng.index(i)]);
      }
    }
    auto& [wins, losses] = classes;
    std::size_t ns = std::min((c + 1) / 2, wins.size());
    std::size_t nf = std::min(c / 2, losses.size());
    if (ns < (c + 1) / 2) nf = std::min(losses.size(), c - ns);
    if (nf < c / 2) ns = std::min(wins.size(), c - nf);
    chosen.insert(chosen.end(), wins.begin(), wins.begin() + static_cast<long>(ns));
    chosen.insert(chosen.end(), losses.begin(), losses.begin() + static_cast<long>(nf));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<TrialRecord> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(records[i]);
  return out;
}

}  // namespace tabletop::graspeval
