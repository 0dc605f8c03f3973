#include "tabletop/graspeval/trial_io.hpp"

#include <map>
#include <sstream>

#include "tabletop/error.hpp"

namespace tabletop::graspeval {

using namespace io;

namespace {

constexpr const char* kColumns[] = {"scene_id", "object_id", "grasp_id", "sim_label", "real_label",
                                    "fail_reason", "epsilon", "lift_wrench_scale"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + what);
}

// One RFC 4180 line: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        cells.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c == '"' && cells.back().empty()) {
      quoted = true;
    } else {
      cells.back() += c;
    }
  }
  if (quoted) bad(where, "unterminated quote");
  return cells;
}

bool parse_flag(const std::string& s, const std::string& where) {
  if (s == "1" || s == "true" || s == "True") return true;
  if (s == "0" || s == "false" || s == "False") return false;
  bad(where, "expected a boolean, got '" + s + "'");
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  bad(where, "expected a number, got '" + s + "'");
}

std::size_t parse_id(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    bad(where, "expected a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

void check_consistent(const TrialRecord& r, const std::string& where) {
  if (r.sim_label != (r.outcome == TrialLabel::Success)) {
    bad(where, "sim_label disagrees with fail_reason");
  }
  if (!(r.epsilon >= 0.0)) bad(where, "epsilon must be non-negative");
}

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i ? "," : "") << kColumns[i];
  out << "\n";
  for (const auto& r : records) {
    out << csv_field(r.scene_id) << ',' << csv_field(r.object_id) << ',' << r.grasp_id << ','
        << (r.sim_label ? 1 : 0) << ',' << (r.real_label ? (*r.real_label ? "1" : "0") : "") << ','
        << to_string(r.outcome) << ',' << format_number(r.epsilon) << ','
        << format_number(r.lift_wrench_scale) << "\n";
  }
  return out.str();
}

std::vector<TrialRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::size_t> column;
  std::vector<TrialRecord> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line, "line " + std::to_string(line_no));
    if (column.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) column[cells[i]] = i;
      for (const char* name : {"scene_id", "object_id", "grasp_id", "sim_label", "fail_reason", "epsilon"}) {
        if (!column.count(name)) bad("header", std::string("missing column '") + name + "'");
      }
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != column.size()) bad(where, "expected " + std::to_string(column.size()) + " fields");
    auto cell = [&](const char* name) { return cells[column.at(name)]; };
    TrialRecord r;
    r.scene_id = cell("scene_id");
    r.object_id = cell("object_id");
    r.grasp_id = parse_id(cell("grasp_id"), where + ".grasp_id");
    r.sim_label = parse_flag(cell("sim_label"), where + ".sim_label");
    if (column.count("real_label") && !cell("real_label").empty()) {
      r.real_label = parse_flag(cell("real_label"), where + ".real_label");
    }
    try {
      r.outcome = label_from_string(cell("fail_reason"));
    } catch (const Error&) {
      bad(where + ".fail_reason", "unknown label '" + cell("fail_reason") + "'");
    }
    r.epsilon = parse_double(cell("epsilon"), where + ".epsilon");
    if (column.count("lift_wrench_scale")) {
      r.lift_wrench_scale = parse_double(cell("lift_wrench_scale"), where + ".lift_wrench_scale");
    }
    check_consistent(r, where);
    out.push_back(std::move(r));
  }
  if (column.empty()) bad("header", "missing");
  return out;
}

Json records_to_json(const std::vector<TrialRecord>& records) {
  Json doc = Json::object();
  doc["version"] = kTrialVersion;
  Json list = Json::array();
  for (const auto& r : records) {
    Json j = Json::object();
    j["scene_id"] = r.scene_id;
    j["object_id"] = r.object_id;
    j["grasp_id"] = r.grasp_id;
    j["sim_label"] = r.sim_label;
    if (r.real_label) j["real_label"] = *r.real_label;
    j["fail_reason"] = std::string(to_string(r.outcome));
    j["epsilon"] = r.epsilon;
    j["lift_wrench_scale"] = r.lift_wrench_scale;
    list.push_back(std::move(j));
  }
  doc["records"] = std::move(list);
  return doc;
}

std::vector<TrialRecord> records_from_json(const Json& doc) {
  expect_object(doc, "");
  reject_unknown_keys(doc, {"version", "records"}, "");
  if (as_integer(require(doc, "version", ""), "version") != kTrialVersion) {
    bad("version", "unsupported");
  }
  const Json& list = as_array(require(doc, "records", ""), "records");
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = index_path("records", i);
    const Json& j = expect_object(list[i], path);
    reject_unknown_keys(j, {"scene_id", "object_id", "grasp_id", "sim_label", "real_label", "fail_reason",
                            "epsilon", "lift_wrench_scale"},
                        path);
    TrialRecord r;
    r.scene_id = as_string(require(j, "scene_id", path), join_path(path, "scene_id"));
    r.object_id = as_string(require(j, "object_id", path), join_path(path, "object_id"));
    const auto id = as_integer(require(j, "grasp_id", path), join_path(path, "grasp_id"));
    if (id < 0) bad(join_path(path, "grasp_id"), "negative");
    r.grasp_id = static_cast<std::size_t>(id);
    r.sim_label = as_bool(require(j, "sim_label", path), join_path(path, "sim_label"));
    if (j.contains("real_label") && !j["real_label"].is_null()) {
      r.real_label = as_bool(j["real_label"], join_path(path, "real_label"));
    }
    const std::string reason = as_string(require(j, "fail_reason", path), join_path(path, "fail_reason"));
    try {
      r.outcome = label_from_string(reason);
    } catch (const Error&) {
      bad(join_path(path, "fail_reason"), "unknown label '" + reason + "'");
    }
    r.epsilon = as_number(require(j, "epsilon", path), join_path(path, "epsilon"));
    if (j.contains("lift_wrench_scale")) {
      r.lift_wrench_scale = as_positive(j["lift_wrench_scale"], join_path(path, "lift_wrench_scale"));
    }
    check_consistent(r, path);
    out.push_back(std::move(r));
  }
  return out;
}

Json eval_config_to_json(const EvalConfig& config) {
  Json j = Json::object();
  j["cone_edges"] = config.cone_edges;
  j["max_grip_force"] = config.max_grip_force;
  j["lift_wrench_scale"] = config.lift_wrench_scale;
  j["gravity"] = config.gravity;
  return j;
}

EvalConfig eval_config_from_json(const Json& value, const std::string& path) {
  expect_object(value, path);
  reject_unknown_keys(value, {"cone_edges", "max_grip_force", "lift_wrench_scale", "gravity"},
                      path);
  EvalConfig c;
  if (value.contains("cone_edges")) {
    c.cone_edges = static_cast<int>(as_integer(value["cone_edges"], join_path(path, "cone_edges")));
  }
  const auto num = [&](const char* key, double& out) {
    if (value.contains(key)) out = as_number(value[key], join_path(path, key));
  };
  num("max_grip_force", c.max_grip_force);
  num("lift_wrench_scale", c.lift_wrench_scale);
  num("gravity", c.gravity);
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, (path.empty() ? "config" : path) + ": " + e.what());
  }
  return c;
}

void save_records(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    write_file(path, records_to_csv(records));
  } else {
    write_file(path, emit_yaml(records_to_json(records)));
  }
}

std::vector<TrialRecord> load_records(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return records_from_csv(read_file(path));
  return records_from_json(load_yaml(path));
}

}  // namespace tabletop::graspeval
