#pragma once

#include <filesystem>

#include "tabletop/graspgen/grasp.hpp"
#include "tabletop/io/tree.hpp"

namespace tabletop::graspgen {

inline constexpr int kGraspSetVersion = 1;

io::Json grasp_set_to_json(const GraspSet& set);
GraspSet grasp_set_from_json(const io::Json& document);

io::Json gripper_to_json(const ParallelJawGripper& gripper);
// Missing fields keep their defaults.
ParallelJawGripper gripper_from_json(const io::Json& value, const std::string& path);

io::Json sampling_params_to_json(const SamplingParams& params);
SamplingParams sampling_params_from_json(const io::Json& value, const std::string& path);

void save_grasp_set(const GraspSet& set, const std::filesystem::path& path);
GraspSet load_grasp_set(const std::filesystem::path& path);

}  // namespace tabletop::graspgen
