#include "tabletop/service/config.hpp"

#include <cstdlib>

#include "tabletop/error.hpp"

namespace tabletop::service {

namespace fs = std::filesystem;

void ServiceConfig::validate() const {
  if (host.empty()) throw Error(ErrorCode::InvalidArgument, "host must not be empty");
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
  if (job_workers < 1) throw Error(ErrorCode::InvalidArgument, "job_workers must be >= 1");
  if (!fs::is_regular_file(library_path)) {
    throw Error(ErrorCode::FileNotFound, "library not found: " + library_path.string());
  }
  if (!fs::is_directory(data_dir)) {
    throw Error(ErrorCode::FileNotFound, "data directory not found: " + data_dir.string());
  }
}

ServiceConfig service_config_from_json(const io::Json& value, const fs::path& base_dir) {
  io::expect_object(value, "");
  io::reject_unknown_keys(value, {"host", "port", "library", "data_dir", "cors_origins",
                                  "job_workers"},
                          "");
  ServiceConfig c;
  const auto resolve = [&](const std::string& p) {
    return (fs::absolute(base_dir) / p).lexically_normal();
  };
  if (value.contains("host")) c.host = io::as_string(value["host"], "host");
  if (value.contains("port")) c.port = static_cast<int>(io::as_integer(value["port"], "port"));
  c.library_path = resolve(io::as_string(io::require(value, "library", ""), "library"));
  c.data_dir = value.contains("data_dir") ? resolve(io::as_string(value["data_dir"], "data_dir"))
                                          : fs::absolute(base_dir).lexically_normal();
  if (value.contains("cors_origins")) {
    const auto& list = io::as_array(value["cors_origins"], "cors_origins");
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.cors_origins.push_back(io::as_string(list[i], "cors_origins[" + std::to_string(i) + "]"));
    }
  }
  if (value.contains("job_workers")) {
    c.job_workers = static_cast<int>(io::as_integer(value["job_workers"], "job_workers"));
  }
  return c;
}

ServiceConfig load_service_config(const fs::path& path) {
  auto config = service_config_from_json(io::load_yaml(path), fs::absolute(path).parent_path());
  config.validate();
  return config;
}

std::optional<fs::path> config_path_from_env() {
  const char* value = std::getenv(kConfigEnv);
  if (!value || !*value) return std::nullopt;
  return fs::path(value);
}

}  // namespace tabletop::service
