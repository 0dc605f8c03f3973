#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/analytics/confusion.hpp"
#include "tabletop/io/tree.hpp"

namespace tabletop::analytics {

// Statistics over one group of records (an object, a scene, or everything).
struct GroupStats {
  std::string scene_id;   // empty for the overall group
  std::string object_id;  // empty for scene and overall groups
  std::size_t records = 0;
  std::size_t unpaired = 0;
  std::optional<ConfusionMatrix> matrix;  // absent without paired records
  std::optional<std::int64_t> precision;  // hundredths; absent when undefined
  std::optional<std::int64_t> recall;
  std::map<std::string, std::size_t> outcomes;  // trial label -> count
};

struct SceneSection {
  GroupStats total;
  std::vector<GroupStats> objects;  // sorted by object id
};

struct Report {
  std::vector<SceneSection> scenes;  // sorted by scene id
  GroupStats overall;
};

Report make_report(const std::vector<graspeval::TrialRecord>& records);

std::string report_text(const Report& report);
io::Json report_json(const Report& report);
std::string report_csv(const Report& report);

// Writes report.txt, report.json and report.csv into `dir` (created).
void write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace tabletop::analytics
