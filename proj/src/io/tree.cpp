#include "tabletop/io/tree.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "tabletop/error.hpp"

namespace tabletop::io {
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename onto " + path.string());
}

namespace {

Json scalar_to_json(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  static const std::regex null_re("~|null|Null|NULL|");
  static const std::regex true_re("true|True|TRUE");
  static const std::regex false_re("false|False|FALSE");
  static const std::regex int_re("[-+]?[0-9]+");
  static const std::regex float_re(
      R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
  if (std::regex_match(text, null_re)) return nullptr;
  if (std::regex_match(text, true_re)) return true;
  if (std::regex_match(text, false_re)) return false;
  if (std::regex_match(text, int_re)) {
    errno = 0;
    const long long v = std::strtoll(text.c_str(), nullptr, 10);
    if (errno == 0) return v;
  }
  if (std::regex_match(text, float_re)) return std::strtod(text.c_str(), nullptr);
  return text;
}

Json node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      Json arr = Json::array();
      for (const auto& item : node) arr.push_back(node_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      Json obj = Json::object();
      for (const auto& kv : node) {
        const std::string key = kv.first.Scalar();
        if (obj.contains(key)) throw Error(ErrorCode::SchemaViolation, "duplicate key " + key);
        obj[key] = node_to_json(kv.second);
      }
      return obj;
    }
  }
  return nullptr;
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void emit(YAML::Emitter& out, const Json& value) {
  if (value.is_object()) {
    out << YAML::BeginMap;
    for (const auto& [key, item] : value.items()) {
      out << YAML::Key << key << YAML::Value;
      emit(out, item);
    }
    out << YAML::EndMap;
  } else if (value.is_array()) {
    const bool flow = std::all_of(value.begin(), value.end(), is_scalar);
    out << (flow ? YAML::Flow : YAML::Block) << YAML::BeginSeq;
    for (const auto& item : value) emit(out, item);
    out << YAML::EndSeq;
  } else if (value.is_string()) {
    out << YAML::DoubleQuoted << value.get<std::string>();
  } else if (value.is_boolean()) {
    out << (value.get<bool>() ? "true" : "false");
  } else if (value.is_number_integer()) {
    out << value.dump();
  } else if (value.is_number_float()) {
    out << format_number(value.get<double>());
  } else {
    out << YAML::Null;
  }
}

}  // namespace

Json parse_yaml(const std::string& text) {
  try {
    return node_to_json(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("YAML syntax: ") + e.what());
  }
}

Json load_yaml(const fs::path& path) { return parse_yaml(read_file(path)); }

std::string emit_yaml(const Json& value) {
  YAML::Emitter out;
  out.SetIndent(2);
  emit(out, value);
  std::string text = out.c_str();
  text += '\n';
  return text;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite number");
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

const Json& expect_object(const Json& value, const std::string& path) {
  if (!value.is_object()) {
    throw Error(ErrorCode::SchemaViolation, (path.empty() ? "document" : path) + ": expected a mapping");
  }
  return value;
}

const Json& require(const Json& object, const std::string& key, const std::string& path) {
  expect_object(object, path);
  const auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::SchemaViolation, join_path(path, key) + ": missing required field");
  }
  return *it;
}

void reject_unknown_keys(const Json& object, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  expect_object(object, path);
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorCode::SchemaViolation, join_path(path, key) + ": unknown field");
  }
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw Error(ErrorCode::SchemaViolation, path + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::SchemaViolation, path + ": not finite");
  return v;
}

double as_positive(const Json& value, const std::string& path) {
  const double v = as_number(value, path);
  if (!(v > 0.0)) throw Error(ErrorCode::SchemaViolation, path + ": must be positive");
  return v;
}

std::int64_t as_integer(const Json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) {
      return static_cast<std::int64_t>(v);
    }
  }
  throw Error(ErrorCode::SchemaViolation, path + ": expected an integer");
}

std::string as_string(const Json& value, const std::string& path) {
  if (value.is_string()) return value.get<std::string>();
  throw Error(ErrorCode::SchemaViolation, path + ": expected a string");
}

bool as_bool(const Json& value, const std::string& path) {
  if (value.is_boolean()) return value.get<bool>();
  throw Error(ErrorCode::SchemaViolation, path + ": expected a boolean");
}

const Json& as_array(const Json& value, const std::string& path) {
  if (!value.is_array()) throw Error(ErrorCode::SchemaViolation, path + ": expected a list");
  return value;
}

std::array<double, 16> as_matrix16(const Json& value, const std::string& path) {
  as_array(value, path);
  if (value.size() != 16) {
    throw Error(ErrorCode::SchemaViolation,
                path + ": expected 16 numbers, got " + std::to_string(value.size()));
  }
  std::array<double, 16> out{};
  for (std::size_t i = 0; i < 16; ++i) out[i] = as_number(value[i], index_path(path, i));
  return out;
}

geom::Pose as_pose(const Json& value, const std::string& path) {
  const auto m = as_matrix16(value, path);
  Eigen::Matrix4d h;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) h(r, c) = m[4 * r + c];
  }
  const Eigen::Matrix3d r = h.topLeftCorner<3, 3>();
  const bool rigid = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-6 &&
                     r.determinant() > 0.0 &&
                     (h.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() <= 1e-9;
  if (!rigid) throw Error(ErrorCode::SchemaViolation, path + ": not a rigid transform");
  return geom::Pose::from_matrix(h);
}

Json pose_to_json(const geom::Pose& pose) {
  auto m = pose.row_major();
  // Rotation round-off below this is noise; written as exact zero.
  for (auto& v : m) {
    if (std::abs(v) < 1e-12) v = 0.0;
  }
  return Json(std::vector<double>(m.begin(), m.end()));
}

}  // namespace tabletop::io
