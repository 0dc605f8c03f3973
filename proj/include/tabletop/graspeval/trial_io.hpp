#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tabletop/graspeval/evaluate.hpp"
#include "tabletop/io/tree.hpp"

namespace tabletop::graspeval {

inline constexpr int kTrialVersion = 1;

// CSV with header scene_id,object_id,grasp_id,sim_label,real_label,
// fail_reason,epsilon,lift_wrench_scale. real_label is empty when absent;
// lift_wrench_scale may be omitted on input. Columns are matched by name.
std::string records_to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_csv(const std::string& text);

io::Json records_to_json(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_json(const io::Json& doc);

// Missing fields keep their defaults. Throws SchemaViolation.
io::Json eval_config_to_json(const EvalConfig& config);
EvalConfig eval_config_from_json(const io::Json& value, const std::string& path);

// Format from the extension: .csv, otherwise YAML (JSON is valid YAML).
// Reading throws FileNotFound or SchemaViolation.
void save_records(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
std::vector<TrialRecord> load_records(const std::filesystem::path& path);

}  // namespace tabletop::graspeval
