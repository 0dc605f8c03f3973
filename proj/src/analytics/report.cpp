#include "tabletop/analytics/report.hpp"

#include <map>
#include <cstdio>
#include <sstream>

#include "tabletop/error.hpp"

namespace tabletop::analytics {
namespace {

using graspeval::TrialLabel;
using graspeval::TrialRecord;

constexpr TrialLabel kLabels[] = {TrialLabel::Success, TrialLabel::FailPregraspCollision,
                                  TrialLabel::FailNoContact, TrialLabel::FailObstacleContact,
                                  TrialLabel::FailCannotHold};

GroupStats stats(const std::vector<const TrialRecord*>& group, std::string scene, std::string object) {
  GroupStats g;
  g.scene_id = std::move(scene);
  g.object_id = std::move(object);
  for (TrialLabel l : kLabels) g.outcomes[std::string(graspeval::to_string(l))] = 0;
  std::vector<TrialRecord> copy;
  copy.reserve(group.size());
  for (const TrialRecord* r : group) {
    copy.push_back(*r);
    ++g.outcomes[std::string(graspeval::to_string(r->outcome))];
  }
  g.records = copy.size();
  g.unpaired = count_unpaired(copy);
  if (g.unpaired < g.records) {
    g.matrix = confusion_matrix(copy);
    if (g.matrix->tp + g.matrix->fp > 0) g.precision = precision_hundredths(*g.matrix);
    if (g.matrix->tp + g.matrix->fn > 0) g.recall = recall_hundredths(*g.matrix);
  }
  return g;
}

std::string metric_text(const std::optional<std::int64_t>& v) {
  return v ? format_percent(*v) : std::string("undefined");
}

void text_group(std::ostringstream& out, const GroupStats& g, const std::string& indent) {
  out << indent << "records: " << g.records << " (paired " << g.records - g.unpaired << ", unpaired "
      << g.unpaired << ")\n";
  if (g.matrix) {
    const auto& m = *g.matrix;
    char line[128];
    std::snprintf(line, sizeof line, "%s%-8s%8s%8s%8s\n", indent.c_str(), "", "real 0", "real 1", "sum");
    out << line;
    std::snprintf(line, sizeof line, "%s%-8s%8zu%8zu%8zu\n", indent.c_str(), "sim 0", m.tn, m.fn, m.tn + m.fn);
    out << line;
    std::snprintf(line, sizeof line, "%s%-8s%8zu%8zu%8zu\n", indent.c_str(), "sim 1", m.fp, m.tp, m.fp + m.tp);
    out << line;
    std::snprintf(line, sizeof line, "%s%-8s%8zu%8zu%8zu\n", indent.c_str(), "sum", m.tn + m.fp, m.fn + m.tp,
                  m.total());
    out << line;
    out << indent << "Precision: " << metric_text(g.precision) << " Recall: " << metric_text(g.recall) << "\n";
  } else {
    out << indent << "no paired records\n";
  }
  out << indent << "outcomes:";
  for (TrialLabel l : kLabels) {
    const std::string name(graspeval::to_string(l));
    out << " " << name << "=" << g.outcomes.at(name);
  }
  out << "\n";
}

io::Json json_group(const GroupStats& g) {
  io::Json j = io::Json::object();
  if (!g.scene_id.empty()) j["scene_id"] = g.scene_id;
  if (!g.object_id.empty()) j["object_id"] = g.object_id;
  j["records"] = g.records;
  j["unpaired"] = g.unpaired;
  if (g.matrix) {
    j["matrix"] = {{"tn", g.matrix->tn}, {"fp", g.matrix->fp}, {"fn", g.matrix->fn}, {"tp", g.matrix->tp}};
  } else {
    j["matrix"] = nullptr;
  }
  j["precision"] = g.precision ? io::Json(format_percent(*g.precision)) : io::Json(nullptr);
  j["recall"] = g.recall ? io::Json(format_percent(*g.recall)) : io::Json(nullptr);
  io::Json outcomes = io::Json::object();
  for (TrialLabel l : kLabels) {
    const std::string name(graspeval::to_string(l));
    outcomes[name] = g.outcomes.at(name);
  }
  j["outcomes"] = std::move(outcomes);
  return j;
}

void csv_group(std::ostringstream& out, const char* level, const GroupStats& g) {
  auto quoted = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  out << level << ',' << quoted(g.scene_id) << ',' << quoted(g.object_id) << ',' << g.records << ','
      << g.unpaired;
  if (g.matrix) {
    out << ',' << g.matrix->tn << ',' << g.matrix->fp << ',' << g.matrix->fn << ',' << g.matrix->tp;
  } else {
    out << ",,,,";
  }
  auto pct = [](const std::optional<std::int64_t>& v) {
    return v ? format_percent(*v).substr(0, format_percent(*v).size() - 1) : std::string();
  };
  out << ',' << pct(g.precision) << ',' << pct(g.recall);
  for (TrialLabel l : kLabels) out << ',' << g.outcomes.at(std::string(graspeval::to_string(l)));
  out << "\n";
}

}  // namespace

Report make_report(const std::vector<TrialRecord>& records) {
  std::map<std::string, std::map<std::string, std::vector<const TrialRecord*>>> by_scene;
  std::vector<const TrialRecord*> all;
  for (const auto& r : records) {
    by_scene[r.scene_id][r.object_id].push_back(&r);
    all.push_back(&r);
  }
  Report report;
  for (const auto& [scene, objects] : by_scene) {
    SceneSection section;
    std::vector<const TrialRecord*> scene_records;
    for (const auto& [object, group] : objects) {
      section.objects.push_back(stats(group, scene, object));
      scene_records.insert(scene_records.end(), group.begin(), group.end());
    }
    section.total = stats(scene_records, scene, "");
    report.scenes.push_back(std::move(section));
  }
  report.overall = stats(all, "", "");
  return report;
}

std::string report_text(const Report& report) {
  std::ostringstream out;
  for (const auto& section : report.scenes) {
    out << "Scene " << section.total.scene_id << "\n";
    text_group(out, section.total, "  ");
    for (const auto& object : section.objects) {
      out << "  Object " << object.object_id << "\n";
      text_group(out, object, "    ");
    }
    out << "\n";
  }
  out << "Overall\n";
  text_group(out, report.overall, "  ");
  return out.str();
}

io::Json report_json(const Report& report) {
  io::Json doc = io::Json::object();
  io::Json scenes = io::Json::array();
  for (const auto& section : report.scenes) {
    io::Json s = json_group(section.total);
    io::Json objects = io::Json::array();
    for (const auto& object : section.objects) objects.push_back(json_group(object));
    s["objects"] = std::move(objects);
    scenes.push_back(std::move(s));
  }
  doc["scenes"] = std::move(scenes);
  doc["overall"] = json_group(report.overall);
  return doc;
}

std::string report_csv(const Report& report) {
  std::ostringstream out;
  out << "level,scene_id,object_id,records,unpaired,tn,fp,fn,tp,precision,recall";
  for (TrialLabel l : kLabels) out << ',' << graspeval::to_string(l);
  out << "\n";
  for (const auto& section : report.scenes) {
    csv_group(out, "scene", section.total);
    for (const auto& object : section.objects) csv_group(out, "object", object);
  }
  csv_group(out, "overall", report.overall);
  return out.str();
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, dir.string() + ": " + ec.message());
  io::write_file(dir / "report.txt", report_text(report));
  io::write_file(dir / "report.json", report_json(report).dump(2) + "\n");
  io::write_file(dir / "report.csv", report_csv(report));
}

}  // namespace tabletop::analytics
