#pragma once

#include <filesystem>
#include <string>

#include "tabletop/io/tree.hpp"
#include "tabletop/objectlib/object_type.hpp"

namespace tabletop::objectlib {

inline constexpr int kLibraryVersion = 1;

// Mesh paths are written relative to `base_dir` and resolved against it.
io::Json library_to_json(const ObjectLibrary& library, const std::filesystem::path& base_dir);
ObjectLibrary library_from_json(const io::Json& document, const std::filesystem::path& base_dir);

void save_library(const ObjectLibrary& library, const std::filesystem::path& path);
// Throws SchemaViolation (with field path) or MissingMeshFile.
ObjectLibrary load_library(const std::filesystem::path& path);

// URDF with the source mesh as visual and the hull STL as collision geometry.
std::string make_urdf(const ObjectType& object, const std::string& visual_filename,
                      const std::string& collision_filename);

}  // namespace tabletop::objectlib
