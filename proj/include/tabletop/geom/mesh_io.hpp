#pragma once

#include <filesystem>
#include <string>

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

// Loads an OBJ (v/f records, polygons fan-triangulated) or STL (binary or
// ASCII; coincident vertices welded) file and multiplies coordinates by
// `scale`. Throws FileNotFound, UnsupportedFormat or MalformedMesh.
TriMesh load_mesh(const std::filesystem::path& path, double scale = 1.0);

TriMesh parse_obj(const std::string& text);
TriMesh parse_stl(const std::string& bytes);

std::string to_binary_stl(const TriMesh& mesh, const std::string& header = "tabletop");
void write_binary_stl(const TriMesh& mesh, const std::filesystem::path& path);
void write_obj(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace tabletop::geom
