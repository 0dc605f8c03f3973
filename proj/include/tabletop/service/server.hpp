#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tabletop/objectlib/object_type.hpp"
#include "tabletop/scene/scene.hpp"
#include "tabletop/service/config.hpp"
#include "tabletop/service/jobs.hpp"

namespace httplib {
class Server;
}

namespace tabletop::service {

// Working scene of one client. Reads share `data`; writers first claim
// `writer` without waiting (a busy slot is a conflict), then swap the scene
// under an exclusive `data` lock. `revision` grows with every write.
struct SceneSession {
  std::string id;
  std::mutex writer;
  mutable std::shared_mutex data;
  scene::Scene scene;
  std::optional<std::vector<scene::InstanceStatus>> last_validation;
  std::uint64_t revision = 1;
};

class Service {
 public:
  // Loads the library. Throws what load_library and validate throw.
  explicit Service(ServiceConfig config);
  ~Service();

  const ServiceConfig& config() const { return config_; }
  const objectlib::ObjectLibrary& library() const { return library_; }

  // Registers every endpoint on `server`.
  void mount(httplib::Server& server);

  // Binds config().host:port (port 0 picks one) and returns the bound port,
  // or -1. serve() then blocks until stop().
  int bind();
  void serve();
  void stop();

 private:
  std::shared_ptr<SceneSession> session(const std::string& id) const;
  std::shared_ptr<SceneSession> create_session(scene::Scene scene);

  ServiceConfig config_;
  objectlib::ObjectLibrary library_;
  JobQueue jobs_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<SceneSession>> sessions_;
  std::uint64_t next_session_ = 1;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tabletop::service
