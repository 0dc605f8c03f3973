#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabletop/graspeval/evaluate.hpp"

namespace tabletop::graspeval {

struct PipelineParams {
  graspgen::SamplingParams sampling;  // seed is replaced per instance
  std::size_t candidates = 1000;      // cap per instance after sampling
  int per_object_count = 10;
  std::uint64_t seed = 0;
};

// Candidates surviving each stage for one instance.
struct StageCounts {
  std::size_t instance = 0;
  std::string object_id;
  std::size_t sampled = 0;
  std::size_t after_coarse = 0;
  std::size_t after_pregrasp = 0;
  std::size_t successes = 0;
};

struct PipelineResult {
  std::vector<StageCounts> stages;
  std::vector<TrialRecord> evaluated;
  std::vector<TrialRecord> selected;
};

// Sample per instance, drop coarse then exact collisions, evaluate what is
// left and pick a balanced subset per object. Throws UnknownObjectId and
// NonWatertight.
PipelineResult run_pipeline(const std::string& scene_id, const scene::Scene& scene,
                            const objectlib::ObjectLibrary& library,
                            const graspgen::ParallelJawGripper& gripper, const EvalConfig& config,
                            const PipelineParams& params);

}  // namespace tabletop::graspeval
