#include "tabletop/service/server.hpp"

#include <httplib.h>

#include "tabletop/error.hpp"
#include "tabletop/geom/mesh_io.hpp"
#include "tabletop/graspeval/trial_io.hpp"
#include "tabletop/graspgen/grasp_io.hpp"
#include "tabletop/objectlib/library_io.hpp"
#include "tabletop/printout/document.hpp"
#include "tabletop/scene/scene_io.hpp"

namespace tabletop::service {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaViolation:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::MalformedMesh:
    case ErrorCode::DegenerateInput:
    case ErrorCode::UnknownMarkerId:
      return 400;
    case ErrorCode::UnknownObjectId:
    case ErrorCode::UnknownInstance:
    case ErrorCode::FileNotFound:
    case ErrorCode::MissingMeshFile:
      return 404;
    case ErrorCode::IoError:
      return 500;
    default:
      return 422;
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, Json{{"error", code}, {"message", message}});
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const HttpError& e) {
      send_error(res, e.status, e.code, e.message);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  };
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw HttpError{400, "SchemaViolation", std::string("body: invalid JSON: ") + e.what()};
  }
}

std::string etag(std::uint64_t revision) { return "\"" + std::to_string(revision) + "\""; }

scene::GroundArea area_from_json(const Json& value) {
  if (value.is_string()) {
    if (const auto a = scene::area_preset(value.get<std::string>())) return *a;
    throw Error(ErrorCode::SchemaViolation, "area: unknown preset '" + value.get<std::string>() + "'");
  }
  const Json& pair = io::as_array(value, "area");
  if (pair.size() != 2) throw Error(ErrorCode::SchemaViolation, "area: expected [width, depth]");
  return {io::as_positive(pair[0], "area[0]"), io::as_positive(pair[1], "area[1]")};
}

printout::PageSize page_from_json(const Json& value) {
  if (value.is_string()) {
    if (const auto p = printout::page_preset(value.get<std::string>())) return *p;
    throw Error(ErrorCode::SchemaViolation, "page: unknown preset '" + value.get<std::string>() + "'");
  }
  const Json& pair = io::as_array(value, "page");
  if (pair.size() != 2) throw Error(ErrorCode::SchemaViolation, "page: expected [width_mm, height_mm]");
  return {io::as_positive(pair[0], "page[0]"), io::as_positive(pair[1], "page[1]")};
}

// Unknown object ids are reported before a scene is accepted.
void check_ids(const scene::Scene& s, const objectlib::ObjectLibrary& library) {
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    if (!library.contains(s.instances[i].object_id)) {
      throw Error(ErrorCode::UnknownObjectId, "objects[" + std::to_string(i) +
                                                  "].object_type: unknown object '" +
                                                  s.instances[i].object_id + "'");
    }
  }
}

Json statuses_json(const std::vector<scene::InstanceStatus>& statuses) {
  Json out = Json::array();
  for (auto s : statuses) out.push_back(std::string(scene::to_string(s)));
  return out;
}

// Holds a session's writer slot for the lifetime of a write request.
class WriteGuard {
 public:
  WriteGuard(SceneSession& s, const httplib::Request& req) : lock_(s.writer, std::try_to_lock) {
    if (!lock_.owns_lock()) {
      throw HttpError{409, "Conflict", "session " + s.id + " is being modified by another writer"};
    }
    if (req.has_header("If-Match")) {
      std::shared_lock read(s.data);
      if (req.get_header_value("If-Match") != etag(s.revision)) {
        throw HttpError{409, "Conflict", "session " + s.id + " is at revision " +
                                             std::to_string(s.revision)};
      }
    }
  }

 private:
  std::unique_lock<std::mutex> lock_;
};

}  // namespace

Service::Service(ServiceConfig config)
    : config_(std::move(config)), jobs_(config_.job_workers) {
  config_.validate();
  library_ = objectlib::load_library(config_.library_path);
}

Service::~Service() { stop(); }

std::shared_ptr<SceneSession> Service::session(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError{404, "UnknownSession", "no session '" + id + "'"};
  return it->second;
}

std::shared_ptr<SceneSession> Service::create_session(scene::Scene s) {
  auto created = std::make_shared<SceneSession>();
  created->scene = std::move(s);
  std::lock_guard lock(sessions_mutex_);
  created->id = "s" + std::to_string(next_session_++);
  sessions_[created->id] = created;
  return created;
}

void Service::mount(httplib::Server& server) {
  const fs::path base = config_.library_path.parent_path();
  const Json library_json = objectlib::library_to_json(library_, base);

  const auto scene_doc = [base](const scene::Scene& s) {
    return scene::scene_to_json(s, base);
  };
  const auto parse_scene = [this, base](const Json& doc) {
    auto s = scene::scene_from_json(doc, base);
    s.library_path = config_.library_path;
    check_ids(s, library_);
    return s;
  };
  const auto reply_scene = [scene_doc](httplib::Response& res, const SceneSession& s,
                                       int status = 200) {
    res.set_header("ETag", etag(s.revision));
    send_json(res, status,
              Json{{"session_id", s.id}, {"revision", s.revision}, {"scene", scene_doc(s.scene)}});
  };
  // Applies `change` to a copy of the scene and commits it as a new revision.
  const auto write = [reply_scene](const httplib::Request& req, httplib::Response& res,
                                   SceneSession& s, auto change) {
    WriteGuard guard(s, req);
    scene::Scene next;
    {
      std::shared_lock read(s.data);
      next = s.scene;
    }
    change(next);
    std::unique_lock lock(s.data);
    s.scene = std::move(next);
    s.last_validation.reset();
    ++s.revision;
    lock.unlock();
    std::shared_lock read(s.data);
    reply_scene(res, s);
  };

  server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (origin.empty()) return;
    for (const auto& allowed : config_.cors_origins) {
      if (allowed == "*" || allowed == origin) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Expose-Headers", "ETag");
        res.set_header("Vary", "Origin");
        return;
      }
    }
  });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
  });

  server.Get("/api/library", guarded([library_json](const auto&, auto& res) {
               send_json(res, 200, library_json);
             }));
  server.Get(R"(/api/objects/([^/]+)/mesh)", guarded([this](const auto& req, auto& res) {
               const auto& object = library_.at(req.matches[1].str());
               res.set_content(geom::to_binary_stl(object.mesh, object.identifier), "model/stl");
             }));
  server.Get(R"(/api/objects/([^/]+)/stable_poses)",
             guarded([this, library_json](const auto& req, auto& res) {
               const std::string id = req.matches[1].str();
               library_.at(id);
               for (const auto& entry : library_json["objects"]) {
                 if (entry["identifier"] == id) send_json(res, 200, entry["stable_poses"]);
               }
             }));

  server.Post("/api/sessions", guarded([=, this](const auto& req, auto& res) {
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"scene", "area", "board"}, "");
                scene::Scene s;
                if (body.contains("scene")) {
                  s = parse_scene(body["scene"]);
                } else {
                  s.ground_area = body.contains("area") ? area_from_json(body["area"]) : scene::kAreaA3;
                  s.library_path = config_.library_path;
                  if (body.contains("board")) {
                    s.board = body["board"].is_boolean()
                                  ? (body["board"].get<bool>() ? std::optional(scene::BoardSpec{})
                                                               : std::nullopt)
                                  : std::optional(scene::board_from_json(body["board"], "board"));
                  }
                }
                const auto created = create_session(std::move(s));
                std::shared_lock read(created->data);
                reply_scene(res, *created, 201);
              }));
  server.Get(R"(/api/sessions/([^/]+))", guarded([this](const auto& req, auto& res) {
               const auto s = session(req.matches[1].str());
               std::shared_lock read(s->data);
               Json body{{"session_id", s->id}, {"revision", s->revision},
                         {"instances", s->scene.instances.size()}};
               body["last_validation"] =
                   s->last_validation ? statuses_json(*s->last_validation) : Json();
               res.set_header("ETag", etag(s->revision));
               send_json(res, 200, body);
             }));
  server.Get(R"(/api/sessions/([^/]+)/scene)", guarded([=, this](const auto& req, auto& res) {
               const auto s = session(req.matches[1].str());
               std::shared_lock read(s->data);
               res.set_header("ETag", etag(s->revision));
               send_json(res, 200, scene_doc(s->scene));
             }));
  server.Put(R"(/api/sessions/([^/]+)/scene)", guarded([=, this](const auto& req, auto& res) {
               const auto s = session(req.matches[1].str());
               write(req, res, *s, [&](scene::Scene& next) { next = parse_scene(body_json(req)); });
             }));
  server.Post(R"(/api/sessions/([^/]+)/validate)", guarded([this](const auto& req, auto& res) {
                const auto s = session(req.matches[1].str());
                scene::Scene copy;
                std::uint64_t revision;
                {
                  std::shared_lock read(s->data);
                  copy = s->scene;
                  revision = s->revision;
                }
                const auto statuses = scene::validate_scene(copy, library_);
                {
                  std::unique_lock lock(s->data);
                  if (s->revision == revision) s->last_validation = statuses;
                }
                res.set_header("ETag", etag(revision));
                send_json(res, 200, statuses_json(statuses));
              }));
  server.Post(R"(/api/sessions/([^/]+)/random)", guarded([=, this](const auto& req, auto& res) {
                const auto s = session(req.matches[1].str());
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"n", "k", "seed", "area"}, "");
                scene::RandomSceneParams params;
                if (body.contains("n")) params.n = static_cast<int>(io::as_integer(body["n"], "n"));
                if (body.contains("k")) params.k = static_cast<int>(io::as_integer(body["k"], "k"));
                if (body.contains("seed")) {
                  params.seed = static_cast<std::uint64_t>(io::as_integer(body["seed"], "seed"));
                }
                write(req, res, *s, [&](scene::Scene& next) {
                  const auto area = body.contains("area") ? area_from_json(body["area"])
                                                          : next.ground_area;
                  auto fresh = scene::random_scene(library_, params, area);
                  fresh.library_path = config_.library_path;
                  fresh.board = next.board;
                  next = std::move(fresh);
                });
              }));
  server.Post(R"(/api/sessions/([^/]+)/snap)", guarded([=, this](const auto& req, auto& res) {
                const auto s = session(req.matches[1].str());
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"instance", "stable_pose"}, "");
                const auto instance = io::as_integer(io::require(body, "instance", ""), "instance");
                const auto pose = io::as_integer(io::require(body, "stable_pose", ""), "stable_pose");
                if (instance < 0 || pose < 0) {
                  throw Error(ErrorCode::IndexOutOfRange, "instance and stable_pose must be >= 0");
                }
                write(req, res, *s, [&](scene::Scene& next) {
                  next = scene::snap_to_stable(std::move(next), static_cast<std::size_t>(instance),
                                               library_, static_cast<std::size_t>(pose));
                });
              }));
  server.Post(R"(/api/sessions/([^/]+)/printout)", guarded([this](const auto& req, auto& res) {
                const auto s = session(req.matches[1].str());
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"page", "dpi"}, "");
                const auto page = body.contains("page") ? page_from_json(body["page"])
                                                        : printout::PageSize{};
                const double dpi = body.contains("dpi") ? io::as_positive(body["dpi"], "dpi")
                                                        : printout::kDefaultDpi;
                scene::Scene copy;
                {
                  std::shared_lock read(s->data);
                  copy = s->scene;
                }
                const auto doc = printout::compose_printout(copy, library_, page, dpi);
                res.set_header("Content-Disposition", "attachment; filename=\"printout.pdf\"");
                if (!doc.warnings.empty()) res.set_header("X-Printout-Warnings", doc.warnings.front());
                res.set_content(doc.pdf, "application/pdf");
              }));
  server.Post(R"(/api/sessions/([^/]+)/save)", guarded([this](const auto& req, auto& res) {
                const auto s = session(req.matches[1].str());
                const Json body = body_json(req);
                io::expect_object(body, "");
                const fs::path rel = io::as_string(io::require(body, "path", ""), "path");
                const fs::path target = (config_.data_dir / rel).lexically_normal();
                const auto inside = target.lexically_relative(config_.data_dir.lexically_normal());
                if (rel.is_absolute() || inside.empty() || *inside.begin() == "..") {
                  throw HttpError{400, "SchemaViolation", "path: must stay inside the data directory"};
                }
                scene::Scene copy;
                {
                  std::shared_lock read(s->data);
                  copy = s->scene;
                }
                fs::create_directories(target.parent_path());
                scene::save_scene(copy, target);
                send_json(res, 200, Json{{"path", inside.generic_string()}});
              }));

  server.Post("/api/grasps/sample", guarded([this](const auto& req, auto& res) {
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"object_id", "params", "gripper"}, "");
                const auto& object =
                    library_.at(io::as_string(io::require(body, "object_id", ""), "object_id"));
                const auto params = body.contains("params")
                                        ? graspgen::sampling_params_from_json(body["params"], "params")
                                        : graspgen::SamplingParams{};
                const auto gripper = body.contains("gripper")
                                         ? graspgen::gripper_from_json(body["gripper"], "gripper")
                                         : graspgen::ParallelJawGripper{};
                send_json(res, 200,
                          graspgen::grasp_set_to_json(
                              graspgen::sample_antipodal_grasps(object, gripper, params)));
              }));
  server.Post("/api/grasps/evaluate", guarded([=, this](const auto& req, auto& res) {
                const Json body = body_json(req);
                io::expect_object(body, "");
                io::reject_unknown_keys(body, {"session_id", "scene", "scene_id", "instance",
                                               "grasps", "gripper", "config"},
                                        "");
                scene::Scene s;
                std::string scene_id;
                if (body.contains("session_id")) {
                  const auto sess = session(io::as_string(body["session_id"], "session_id"));
                  std::shared_lock read(sess->data);
                  s = sess->scene;
                  scene_id = sess->id;
                } else {
                  s = parse_scene(io::require(body, "scene", ""));
                }
                if (body.contains("scene_id")) scene_id = io::as_string(body["scene_id"], "scene_id");
                const auto instance = io::as_integer(io::require(body, "instance", ""), "instance");
                if (instance < 0 || static_cast<std::size_t>(instance) >= s.instances.size()) {
                  throw Error(ErrorCode::UnknownInstance,
                              "instance: no instance " + std::to_string(instance));
                }
                auto grasps = graspgen::grasp_set_from_json(io::require(body, "grasps", ""));
                const auto gripper = body.contains("gripper")
                                         ? graspgen::gripper_from_json(body["gripper"], "gripper")
                                         : graspgen::ParallelJawGripper{};
                const auto config = body.contains("config")
                                        ? graspeval::eval_config_from_json(body["config"], "config")
                                        : graspeval::EvalConfig{};
                const std::string id = jobs_.submit([=, this, grasps = std::move(grasps)] {
                  const auto records = graspeval::evaluate_batch(
                      scene_id, s, library_,
                      {graspeval::InstanceGrasps{static_cast<std::size_t>(instance), grasps}},
                      gripper, config);
                  return graspeval::records_to_json(records);
                });
                res.set_header("Location", "/api/jobs/" + id);
                send_json(res, 202, jobs_.status(id)->to_json());
              }));
  server.Get(R"(/api/jobs/([^/]+))", guarded([this](const auto& req, auto& res) {
               const auto status = jobs_.status(req.matches[1].str());
               if (!status) throw HttpError{404, "UnknownJob", "no job '" + req.matches[1].str() + "'"};
               send_json(res, 200, status->to_json());
             }));
}

int Service::bind() {
  server_ = std::make_unique<httplib::Server>();
  mount(*server_);
  if (config_.port == 0) return server_->bind_to_any_port(config_.host);
  return server_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
}

void Service::serve() {
  if (server_) server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace tabletop::service
