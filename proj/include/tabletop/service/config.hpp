#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/io/tree.hpp"

namespace tabletop::service {

inline constexpr const char* kConfigEnv = "TABLETOP_CONFIG";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path library_path;
  std::filesystem::path data_dir;
  std::vector<std::string> cors_origins;  // "*" allows any origin
  int job_workers = 1;

  // Throws InvalidArgument, FileNotFound (library or data directory missing).
  void validate() const;
};

// Relative paths resolve against `base_dir`. Throws SchemaViolation.
ServiceConfig service_config_from_json(const io::Json& value,
                                       const std::filesystem::path& base_dir);
// Also validates.
ServiceConfig load_service_config(const std::filesystem::path& path);

// The path named by TABLETOP_CONFIG, when set.
std::optional<std::filesystem::path> config_path_from_env();

}  // namespace tabletop::service
