#include "tabletop/scene/scene_io.hpp"

#include "tabletop/error.hpp"

namespace tabletop::scene {
namespace fs = std::filesystem;
using namespace io;

Json board_to_json(const BoardSpec& board) {
  Json j = Json::object();
  j["dictionary"] = board.dictionary;
  j["marker_size_mm"] = board.marker_size_mm;
  j["marker_spacing_mm"] = board.marker_spacing_mm;
  j["first_id"] = board.first_id;
  return j;
}

BoardSpec board_from_json(const Json& value, const std::string& path) {
  reject_unknown_keys(value, {"dictionary", "marker_size_mm", "marker_spacing_mm", "first_id"},
                      path);
  BoardSpec board;
  if (value.contains("dictionary")) {
    board.dictionary = as_string(value["dictionary"], join_path(path, "dictionary"));
  }
  if (value.contains("marker_size_mm")) {
    board.marker_size_mm = as_positive(value["marker_size_mm"], join_path(path, "marker_size_mm"));
  }
  if (value.contains("marker_spacing_mm")) {
    board.marker_spacing_mm =
        as_number(value["marker_spacing_mm"], join_path(path, "marker_spacing_mm"));
    if (board.marker_spacing_mm < 0) {
      throw Error(ErrorCode::SchemaViolation, join_path(path, "marker_spacing_mm") + ": negative");
    }
  }
  if (value.contains("first_id")) {
    const auto id = as_integer(value["first_id"], join_path(path, "first_id"));
    if (id < 0) throw Error(ErrorCode::SchemaViolation, join_path(path, "first_id") + ": negative");
    board.first_id = static_cast<int>(id);
  }
  return board;
}

Json scene_to_json(const Scene& scene, const fs::path& base_dir) {
  Json doc = Json::object();
  doc["version"] = kSceneVersion;
  const fs::path base = fs::absolute(base_dir).lexically_normal();
  doc["object_library"] =
      scene.library_path.empty() ? std::string() : scene.library_path.lexically_relative(base).generic_string();
  doc["ground_area"] = Json::array({scene.ground_area.width, scene.ground_area.depth});
  Json objects = Json::array();
  for (const auto& inst : scene.instances) {
    Json o = Json::object();
    o["object_type"] = inst.object_id;
    o["pose"] = pose_to_json(inst.pose);
    objects.push_back(o);
  }
  doc["objects"] = objects;
  if (scene.board) doc["board"] = board_to_json(*scene.board);
  return doc;
}

Scene scene_from_json(const Json& doc, const fs::path& base_dir) {
  reject_unknown_keys(doc, {"version", "object_library", "ground_area", "objects", "board"}, "");
  const auto version = as_integer(require(doc, "version", ""), "version");
  if (version != kSceneVersion) {
    throw Error(ErrorCode::SchemaViolation, "version: unsupported value " + std::to_string(version));
  }
  Scene scene;
  const std::string lib = as_string(require(doc, "object_library", ""), "object_library");
  if (!lib.empty()) scene.library_path = (fs::absolute(base_dir) / lib).lexically_normal();
  const Json& area = as_array(require(doc, "ground_area", ""), "ground_area");
  if (area.size() != 2) {
    throw Error(ErrorCode::SchemaViolation, "ground_area: expected [width, depth]");
  }
  scene.ground_area.width = as_positive(area[0], "ground_area[0]");
  scene.ground_area.depth = as_positive(area[1], "ground_area[1]");
  const Json& objects = as_array(require(doc, "objects", ""), "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = index_path("objects", i);
    reject_unknown_keys(objects[i], {"object_type", "pose"}, path);
    ObjectInstance inst;
    inst.object_id =
        as_string(require(objects[i], "object_type", path), join_path(path, "object_type"));
    inst.pose = as_pose(require(objects[i], "pose", path), join_path(path, "pose"));
    scene.instances.push_back(std::move(inst));
  }
  if (doc.contains("board") && !doc["board"].is_null()) {
    scene.board = board_from_json(doc["board"], "board");
  }
  return scene;
}

void save_scene(const Scene& scene, const fs::path& path) {
  write_file(path, emit_yaml(scene_to_json(scene, fs::absolute(path).parent_path())));
}

Scene load_scene(const fs::path& path) {
  return scene_from_json(load_yaml(path), fs::absolute(path).parent_path());
}

}  // namespace tabletop::scene
