#pragma once

#include <filesystem>

#include "tabletop/io/tree.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::scene {

inline constexpr int kSceneVersion = 1;

// Library path written relative to `base_dir` and resolved against it.
io::Json scene_to_json(const Scene& scene, const std::filesystem::path& base_dir);
Scene scene_from_json(const io::Json& document, const std::filesystem::path& base_dir);

io::Json board_to_json(const BoardSpec& board);
BoardSpec board_from_json(const io::Json& value, const std::string& path);

void save_scene(const Scene& scene, const std::filesystem::path& path);
// Throws SchemaViolation; unknown object ids surface at validation.
Scene load_scene(const std::filesystem::path& path);

}  // namespace tabletop::scene
