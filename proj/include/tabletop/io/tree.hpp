#pragma once

#include <array>
#include <filesystem>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "tabletop/geom/pose.hpp"

namespace tabletop::io {

using Json = nlohmann::ordered_json;

// Whole-file helpers. read_file throws FileNotFound; write_file writes via a
// temporary sibling and renames, throwing IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// YAML text <-> JSON value. Quoted YAML scalars stay strings; plain scalars
// become null, booleans, integers or doubles when they parse as such.
Json parse_yaml(const std::string& text);
Json load_yaml(const std::filesystem::path& path);
// Block style for maps, flow style for scalar lists; doubles as %.9g.
std::string emit_yaml(const Json& value);

// Shortest %.9g rendering of a double.
std::string format_number(double value);

// Schema helpers. Every failure throws SchemaViolation naming `path`.
const Json& expect_object(const Json& value, const std::string& path);
const Json& require(const Json& object, const std::string& key, const std::string& path);
void reject_unknown_keys(const Json& object, std::initializer_list<const char*> allowed,
                         const std::string& path);
double as_number(const Json& value, const std::string& path);
double as_positive(const Json& value, const std::string& path);
std::int64_t as_integer(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
bool as_bool(const Json& value, const std::string& path);
const Json& as_array(const Json& value, const std::string& path);
std::array<double, 16> as_matrix16(const Json& value, const std::string& path);
// 16 row-major numbers forming a rigid homogeneous transform.
geom::Pose as_pose(const Json& value, const std::string& path);
Json pose_to_json(const geom::Pose& pose);

inline std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}
inline std::string index_path(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

}  // namespace tabletop::io
