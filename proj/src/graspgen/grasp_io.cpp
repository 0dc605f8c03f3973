#include "tabletop/graspgen/grasp_io.hpp"

#include "tabletop/error.hpp"

namespace tabletop::graspgen {

using namespace io;

namespace {

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d as_vec3(const Json& value, const std::string& path) {
  as_array(value, path);
  if (value.size() != 3) throw Error(ErrorCode::SchemaViolation, path + ": expected 3 numbers");
  return {as_number(value[0], index_path(path, 0)), as_number(value[1], index_path(path, 1)),
          as_number(value[2], index_path(path, 2))};
}

int as_count(const Json& value, const std::string& path) {
  const auto v = as_integer(value, path);
  if (v < 1 || v > 100000000) throw Error(ErrorCode::SchemaViolation, path + ": must be >= 1");
  return static_cast<int>(v);
}

}  // namespace

Json sampling_params_to_json(const SamplingParams& p) {
  Json j = Json::object();
  j["n_surface_samples"] = p.n_surface_samples;
  j["rays_per_cone"] = p.rays_per_cone;
  j["n_approach_angles"] = p.n_approach_angles;
  j["seed"] = p.seed;
  if (p.max_grasps) j["max_grasps"] = *p.max_grasps;
  return j;
}

SamplingParams sampling_params_from_json(const Json& value, const std::string& path) {
  reject_unknown_keys(value, {"n_surface_samples", "rays_per_cone", "n_approach_angles", "seed",
                              "max_grasps"},
                      path);
  SamplingParams p;
  if (value.contains("n_surface_samples")) {
    p.n_surface_samples = as_count(value["n_surface_samples"], join_path(path, "n_surface_samples"));
  }
  if (value.contains("rays_per_cone")) {
    p.rays_per_cone = as_count(value["rays_per_cone"], join_path(path, "rays_per_cone"));
  }
  if (value.contains("n_approach_angles")) {
    p.n_approach_angles = as_count(value["n_approach_angles"], join_path(path, "n_approach_angles"));
  }
  if (value.contains("seed")) {
    const Json& s = value["seed"];
    if (s.is_number_unsigned()) {
      p.seed = s.get<std::uint64_t>();
    } else {
      const auto v = as_integer(s, join_path(path, "seed"));
      if (v < 0) throw Error(ErrorCode::SchemaViolation, join_path(path, "seed") + ": negative");
      p.seed = static_cast<std::uint64_t>(v);
    }
  }
  if (value.contains("max_grasps") && !value["max_grasps"].is_null()) {
    p.max_grasps = static_cast<std::size_t>(as_count(value["max_grasps"], join_path(path, "max_grasps")));
  }
  return p;
}

Json gripper_to_json(const ParallelJawGripper& g) {
  Json j = Json::object();
  j["max_opening"] = g.max_opening;
  j["pad_height"] = g.pad_height;
  j["pad_width"] = g.pad_width;
  j["pad_thickness"] = g.pad_thickness;
  j["palm_size"] = vec3(g.palm_size);
  j["palm_offset"] = g.palm_offset;
  j["stem_recess"] = g.stem_recess;
  j["contact_allowance"] = g.contact_allowance;
  return j;
}

ParallelJawGripper gripper_from_json(const Json& value, const std::string& path) {
  reject_unknown_keys(value, {"max_opening", "pad_height", "pad_width", "pad_thickness",
                              "palm_size", "palm_offset", "stem_recess", "contact_allowance"},
                      path);
  ParallelJawGripper g;
  const auto num = [&](const char* key, double& out) {
    if (value.contains(key)) out = as_number(value[key], join_path(path, key));
  };
  num("max_opening", g.max_opening);
  num("pad_height", g.pad_height);
  num("pad_width", g.pad_width);
  num("pad_thickness", g.pad_thickness);
  num("palm_offset", g.palm_offset);
  num("stem_recess", g.stem_recess);
  num("contact_allowance", g.contact_allowance);
  if (value.contains("palm_size")) g.palm_size = as_vec3(value["palm_size"], join_path(path, "palm_size"));
  try {
    g.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, (path.empty() ? "gripper" : path) + ": " + e.what());
  }
  return g;
}

Json grasp_set_to_json(const GraspSet& set) {
  Json doc = Json::object();
  doc["version"] = kGraspSetVersion;
  doc["object_id"] = set.object_id;
  doc["params"] = sampling_params_to_json(set.params);
  Json grasps = Json::array();
  for (const auto& g : set.grasps) {
    Json j = Json::object();
    j["pose"] = pose_to_json(g.pose);
    j["width"] = g.width;
    Json contacts = Json::array();
    for (const auto& c : g.contacts) {
      Json cj = Json::object();
      cj["point"] = vec3(c.point);
      cj["normal"] = vec3(c.inward_normal);
      contacts.push_back(cj);
    }
    j["contacts"] = contacts;
    grasps.push_back(j);
  }
  doc["grasps"] = grasps;
  return doc;
}

GraspSet grasp_set_from_json(const Json& doc) {
  reject_unknown_keys(doc, {"version", "object_id", "params", "grasps"}, "");
  const auto version = as_integer(require(doc, "version", ""), "version");
  if (version != kGraspSetVersion) {
    throw Error(ErrorCode::SchemaViolation, "version: unsupported value " + std::to_string(version));
  }
  GraspSet set;
  set.object_id = as_string(require(doc, "object_id", ""), "object_id");
  if (doc.contains("params")) set.params = sampling_params_from_json(doc["params"], "params");
  const Json& list = as_array(require(doc, "grasps", ""), "grasps");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = index_path("grasps", i);
    reject_unknown_keys(list[i], {"pose", "width", "contacts"}, path);
    Grasp g;
    g.object_id = set.object_id;
    g.pose = as_pose(require(list[i], "pose", path), join_path(path, "pose"));
    g.width = as_number(require(list[i], "width", path), join_path(path, "width"));
    if (g.width < 0) throw Error(ErrorCode::SchemaViolation, join_path(path, "width") + ": negative");
    const std::string cpath = join_path(path, "contacts");
    const Json& contacts = as_array(require(list[i], "contacts", path), cpath);
    if (contacts.size() != 2) throw Error(ErrorCode::SchemaViolation, cpath + ": expected 2 contacts");
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string kp = index_path(cpath, k);
      reject_unknown_keys(contacts[k], {"point", "normal"}, kp);
      g.contacts[k].point = as_vec3(require(contacts[k], "point", kp), join_path(kp, "point"));
      g.contacts[k].inward_normal =
          as_vec3(require(contacts[k], "normal", kp), join_path(kp, "normal")).normalized();
    }
    set.grasps.push_back(std::move(g));
  }
  return set;
}

void save_grasp_set(const GraspSet& set, const std::filesystem::path& path) {
  write_file(path, emit_yaml(grasp_set_to_json(set)));
}

GraspSet load_grasp_set(const std::filesystem::path& path) {
  return grasp_set_from_json(load_yaml(path));
}

}  // namespace tabletop::graspgen
