#include "tabletop/graspeval/pipeline.hpp"

#include "tabletop/geom/rng.hpp"

namespace tabletop::graspeval {

PipelineResult run_pipeline(const std::string& scene_id, const scene::Scene& scene,
                            const objectlib::ObjectLibrary& library,
                            const graspgen::ParallelJawGripper& gripper, const EvalConfig& config,
                            const PipelineParams& params) {
  PipelineResult result;
  std::vector<InstanceGrasps> batch;
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const auto& object = library.at(scene.instances[i].object_id);
    graspgen::SamplingParams sampling = params.sampling;
    sampling.seed = derive_seed(params.seed, i);
    sampling.max_grasps = params.candidates;
    StageCounts counts;
    counts.instance = i;
    counts.object_id = object.identifier;
    const auto sampled = graspgen::sample_antipodal_grasps(object, gripper, sampling);
    counts.sampled = sampled.grasps.size();
    const auto coarse = graspgen::coarse_collision_filter(sampled, scene, library, i, gripper);
    counts.after_coarse = coarse.grasps.size();
    auto exact = graspgen::filter_gripper_collisions(coarse, scene, library, i, gripper);
    counts.after_pregrasp = exact.grasps.size();
    result.stages.push_back(counts);
    batch.push_back({i, std::move(exact)});
  }
  result.evaluated = evaluate_batch(scene_id, scene, library, batch, gripper, config);
  std::size_t offset = 0;
  for (auto& stage : result.stages) {
    for (std::size_t k = 0; k < stage.after_pregrasp; ++k) stage.successes += result.evaluated[offset + k].sim_label;
    offset += stage.after_pregrasp;
  }
  result.selected = select_balanced(result.evaluated, params.per_object_count,
                                    derive_seed(params.seed, 0x5e1ec7));
  return result;
}

}  // namespace tabletop::graspeval
