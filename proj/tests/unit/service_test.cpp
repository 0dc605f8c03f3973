#include <gtest/gtest.h>

#include <cstring>
#include <future>
#include <thread>

#include "support/fixtures.hpp"
#include "tabletop/error.hpp"
#include "tabletop/graspgen/grasp_io.hpp"
#include "tabletop/objectlib/library_io.hpp"
#include "tabletop/scene/scene_io.hpp"
#include "tabletop/service/config.hpp"
#include "tabletop/service/server.hpp"

// After Eigen: <resolv.h> defines a `_res` macro.
#include <httplib.h>

namespace tabletop::service {
namespace {

using io::Json;
using testing::TempDir;

constexpr const char* kOrigin = "http://localhost:5173";

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    auto lib = testing::standard_library(*dir_);
    objectlib::save_library(lib, *dir_ / "lib.yaml");
    std::filesystem::create_directories(*dir_ / "data");
    ServiceConfig config;
    config.port = 0;
    config.library_path = *dir_ / "lib.yaml";
    config.data_dir = *dir_ / "data";
    config.cors_origins = {kOrigin};
    service_ = new Service(config);
    port_ = service_->bind();
    ASSERT_GT(port_, 0);
    thread_ = new std::thread([] { service_->serve(); });
  }
  static void TearDownTestSuite() {
    service_->stop();
    thread_->join();
    delete thread_;
    delete service_;
    delete dir_;
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(60, 0);
    return c;
  }
  static Json body(const httplib::Result& r) { return Json::parse(r->body); }

  // Scene document with cubes at the given (x, y) positions.
  static Json cubes_doc(const std::vector<std::pair<double, double>>& xy) {
    const auto& cube = service_->library().at("cube_5cm");
    scene::Scene s;
    s.ground_area = scene::kAreaA3;
    s.library_path = *dir_ / "lib.yaml";
    for (auto [x, y] : xy) {
      s.instances.push_back({"cube_5cm", scene::place_pose(cube.stable_poses[0], x, y, 0.0)});
    }
    return scene::scene_to_json(s, dir_->path());
  }

  std::string new_session(const Json& request) const {
    auto c = client();
    const auto r = c.Post("/api/sessions", request.dump(), "application/json");
    EXPECT_EQ(r->status, 201);
    return body(r)["session_id"].get<std::string>();
  }

  static TempDir* dir_;
  static Service* service_;
  static std::thread* thread_;
  static int port_;
};

TempDir* ServiceTest::dir_ = nullptr;
Service* ServiceTest::service_ = nullptr;
std::thread* ServiceTest::thread_ = nullptr;
int ServiceTest::port_ = 0;

TEST_F(ServiceTest, LibraryAndMeshes) {
  auto c = client();
  const auto lib = c.Get("/api/library");
  ASSERT_EQ(lib->status, 200);
  const Json doc = body(lib);
  ASSERT_EQ(doc["objects"].size(), 5u);
  for (const auto& o : doc["objects"]) {
    EXPECT_TRUE(o.contains("mass"));
    EXPECT_FALSE(o["stable_poses"].empty());
  }

  const auto mesh = c.Get("/api/objects/cube_5cm/mesh");
  ASSERT_EQ(mesh->status, 200);
  EXPECT_EQ(mesh->get_header_value("Content-Type"), "model/stl");
  // Binary STL: 80-byte header, count, 50 bytes per triangle.
  const auto& stl = mesh->body;
  ASSERT_GE(stl.size(), 84u);
  std::uint32_t count = 0;
  std::memcpy(&count, stl.data() + 80, 4);
  EXPECT_EQ(count, service_->library().at("cube_5cm").mesh.triangles.size());
  EXPECT_EQ(stl.size(), 84u + 50u * count);

  const auto poses = c.Get("/api/objects/box_flat/stable_poses");
  ASSERT_EQ(poses->status, 200);
  double total = 0.0;
  for (const auto& p : body(poses)) total += p["probability"].get<double>();
  EXPECT_NEAR(total, 1.0, 1e-9);

  const auto missing = c.Get("/api/objects/teapot/mesh");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(body(missing)["error"], "UnknownObjectId");
}

TEST_F(ServiceTest, SessionLifecycle) {
  auto c = client();
  const std::string id = new_session(Json{{"area", "A4"}, {"board", true}});
  const auto scene = c.Get("/api/sessions/" + id + "/scene");
  ASSERT_EQ(scene->status, 200);
  EXPECT_EQ(scene->get_header_value("ETag"), "\"1\"");
  const Json doc = body(scene);
  EXPECT_EQ(doc["ground_area"], Json::array({0.297, 0.21}));
  EXPECT_TRUE(doc.contains("board"));
  EXPECT_TRUE(doc["objects"].empty());

  Json two = cubes_doc({{0.1, 0.1}, {0.2, 0.1}});
  two["ground_area"] = doc["ground_area"];
  two["board"] = doc["board"];
  const auto put = c.Put("/api/sessions/" + id + "/scene", two.dump(), "application/json");
  ASSERT_EQ(put->status, 200);
  EXPECT_EQ(body(put)["revision"], 2);
  EXPECT_EQ(put->get_header_value("ETag"), "\"2\"");

  const auto validated = c.Post("/api/sessions/" + id + "/validate", "", "application/json");
  ASSERT_EQ(validated->status, 200);
  EXPECT_EQ(body(validated), Json::array({"Ok", "Ok"}));
  const auto info = body(c.Get("/api/sessions/" + id));
  EXPECT_EQ(info["revision"], 2);
  EXPECT_EQ(info["last_validation"], Json::array({"Ok", "Ok"}));

  const auto snapped = c.Post("/api/sessions/" + id + "/snap",
                              Json{{"instance", 1}, {"stable_pose", 2}}.dump(), "application/json");
  ASSERT_EQ(snapped->status, 200);
  EXPECT_EQ(body(snapped)["revision"], 3);
  EXPECT_TRUE(body(c.Get("/api/sessions/" + id))["last_validation"].is_null());

  const auto random = c.Post("/api/sessions/" + id + "/random",
                             Json{{"n", 3}, {"seed", 7}}.dump(), "application/json");
  ASSERT_EQ(random->status, 200);
  const Json placed = body(random)["scene"];
  EXPECT_EQ(placed["objects"].size(), 3u);
  EXPECT_TRUE(placed.contains("board"));

  const auto saved = c.Post("/api/sessions/" + id + "/save",
                            Json{{"path", "scenes/a.yaml"}}.dump(), "application/json");
  ASSERT_EQ(saved->status, 200);
  const auto reloaded = scene::load_scene(*dir_ / "data/scenes/a.yaml");
  EXPECT_EQ(reloaded.instances.size(), 3u);
  const auto escape = c.Post("/api/sessions/" + id + "/save",
                             Json{{"path", "../x.yaml"}}.dump(), "application/json");
  EXPECT_EQ(escape->status, 400);
}

TEST_F(ServiceTest, CoincidentCubesCollide) {
  const std::string id = new_session(Json{{"scene", cubes_doc({{0.1, 0.1}, {0.1, 0.1}})}});
  auto c = client();
  const auto r = c.Post("/api/sessions/" + id + "/validate", "", "application/json");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body(r), Json::array({"Collision", "Collision"}));
}

TEST_F(ServiceTest, MalformedPoseNamesTheField) {
  const std::string id = new_session(Json::object());
  Json doc = cubes_doc({{0.1, 0.1}});
  doc["objects"][0]["pose"] = std::vector<double>(15, 0.0);
  auto c = client();
  const auto r = c.Put("/api/sessions/" + id + "/scene", doc.dump(), "application/json");
  ASSERT_EQ(r->status, 400);
  const Json err = body(r);
  EXPECT_EQ(err["error"], "SchemaViolation");
  EXPECT_NE(err["message"].get<std::string>().find("objects[0].pose"), std::string::npos);
  // The session is untouched.
  EXPECT_EQ(body(c.Get("/api/sessions/" + id))["revision"], 1);

  doc = cubes_doc({{0.1, 0.1}});
  doc["objects"][0]["object_type"] = "teapot";
  const auto unknown = c.Put("/api/sessions/" + id + "/scene", doc.dump(), "application/json");
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(body(unknown)["error"], "UnknownObjectId");

  const auto bad_json = c.Put("/api/sessions/" + id + "/scene", "{not json", "application/json");
  EXPECT_EQ(bad_json->status, 400);
}

TEST_F(ServiceTest, ConcurrentWritersOneConflicts) {
  for (int round = 0; round < 5; ++round) {
    const std::string id = new_session(Json::object());
    const std::string path = "/api/sessions/" + id + "/scene";
    const auto put = [&](double x) {
      auto c = client();
      const auto r = c.Put(path, httplib::Headers{{"If-Match", "\"1\""}},
                           cubes_doc({{x, 0.1}}).dump(), "application/json");
      return r->status;
    };
    auto a = std::async(std::launch::async, put, 0.1);
    auto b = std::async(std::launch::async, put, 0.2);
    std::vector<int> codes{a.get(), b.get()};
    std::sort(codes.begin(), codes.end());
    EXPECT_EQ(codes, (std::vector<int>{200, 409}));
    auto c = client();
    EXPECT_EQ(body(c.Get("/api/sessions/" + id))["revision"], 2);
  }
}

TEST_F(ServiceTest, PrintoutIsPdf) {
  const std::string id = new_session(Json{{"scene", cubes_doc({{0.1, 0.1}, {0.25, 0.15}})}});
  auto c = client();
  const auto r = c.Post("/api/sessions/" + id + "/printout",
                        Json{{"page", "A4"}, {"dpi", 50}}.dump(), "application/json");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/pdf");
  EXPECT_EQ(r->body.substr(0, 5), "%PDF-");
  EXPECT_NE(r->body.find("%%EOF"), std::string::npos);

  const std::string empty = new_session(Json::object());
  const auto e = c.Post("/api/sessions/" + empty + "/printout", "", "application/json");
  EXPECT_EQ(e->status, 422);
  EXPECT_EQ(body(e)["error"], "EmptyScene");
  const auto small = c.Post("/api/sessions/" + id + "/printout",
                            Json{{"page", {90, 90}}}.dump(), "application/json");
  EXPECT_EQ(small->status, 422);
  EXPECT_EQ(body(small)["error"], "PageTooSmall");
}

TEST_F(ServiceTest, SampleThenEvaluateJob) {
  auto c = client();
  const Json params{{"n_surface_samples", 150}, {"seed", 3}, {"max_grasps", 12}};
  const auto sampled = c.Post("/api/grasps/sample",
                              Json{{"object_id", "cube_4cm"}, {"params", params}}.dump(),
                              "application/json");
  ASSERT_EQ(sampled->status, 200);
  const Json grasps = body(sampled);
  ASSERT_EQ(grasps["grasps"].size(), 12u);
  // Same request, same grasps.
  EXPECT_EQ(c.Post("/api/grasps/sample",
                   Json{{"object_id", "cube_4cm"}, {"params", params}}.dump(), "application/json")
                ->body,
            sampled->body);

  const auto& cube = service_->library().at("cube_4cm");
  scene::Scene s;
  s.ground_area = scene::kAreaA3;
  s.library_path = *dir_ / "lib.yaml";
  s.instances.push_back({"cube_4cm", scene::place_pose(cube.stable_poses[0], 0.2, 0.15, 0.3)});
  const std::string id = new_session(Json{{"scene", scene::scene_to_json(s, dir_->path())}});

  const auto submitted = c.Post(
      "/api/grasps/evaluate",
      Json{{"session_id", id}, {"instance", 0}, {"grasps", grasps}}.dump(), "application/json");
  ASSERT_EQ(submitted->status, 202);
  const std::string job = body(submitted)["job_id"].get<std::string>();
  EXPECT_EQ(submitted->get_header_value("Location"), "/api/jobs/" + job);

  Json status;
  for (int i = 0; i < 600; ++i) {
    status = body(c.Get("/api/jobs/" + job));
    if (status["status"] == "done" || status["status"] == "failed") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  ASSERT_EQ(status["status"], "done") << status.dump();
  const Json records = status["result"]["records"];
  ASSERT_EQ(records.size(), 12u);
  for (const auto& r : records) {
    EXPECT_EQ(r["scene_id"], id);
    EXPECT_EQ(r["object_id"], "cube_4cm");
  }

  const auto bad = c.Post("/api/grasps/evaluate",
                          Json{{"session_id", id}, {"instance", 4}, {"grasps", grasps}}.dump(),
                          "application/json");
  EXPECT_EQ(bad->status, 404);
  EXPECT_EQ(body(bad)["error"], "UnknownInstance");
  EXPECT_EQ(c.Get("/api/jobs/job-999")->status, 404);
}

TEST_F(ServiceTest, CorsAndUnknownRoutes) {
  auto c = client();
  const auto pre = c.Options("/api/library", httplib::Headers{{"Origin", kOrigin}});
  EXPECT_EQ(pre->status, 204);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Origin"), kOrigin);
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("PUT"), std::string::npos);

  const auto lib = c.Get("/api/library", httplib::Headers{{"Origin", kOrigin}});
  EXPECT_EQ(lib->get_header_value("Access-Control-Allow-Origin"), kOrigin);
  const auto foreign = c.Get("/api/library", httplib::Headers{{"Origin", "http://evil.test"}});
  EXPECT_FALSE(foreign->has_header("Access-Control-Allow-Origin"));

  EXPECT_EQ(c.Get("/api/sessions/nope")->status, 404);
  EXPECT_EQ(body(c.Get("/api/sessions/nope"))["error"], "UnknownSession");
  EXPECT_EQ(c.Get("/api/nothing")->status, 404);
  const auto unknown_key =
      c.Post("/api/sessions", Json{{"colour", "red"}}.dump(), "application/json");
  EXPECT_EQ(unknown_key->status, 400);
}

TEST(ServiceConfig, ReadsYamlAndResolvesPaths) {
  TempDir dir;
  dir.write("lib.yaml", "name: x\nobjects: []\n");
  std::filesystem::create_directories(dir / "data");
  const auto path = dir.write("service.yaml",
                              "host: 0.0.0.0\nport: 9000\nlibrary: lib.yaml\ndata_dir: data\n"
                              "cors_origins: ['*']\n");
  const auto config = load_service_config(path);
  EXPECT_EQ(config.host, "0.0.0.0");
  EXPECT_EQ(config.port, 9000);
  EXPECT_EQ(config.library_path, dir / "lib.yaml");
  EXPECT_EQ(config.data_dir, dir / "data");
  EXPECT_EQ(config.cors_origins, std::vector<std::string>{"*"});

  const auto code = [&](const std::string& text) {
    try {
      load_service_config(dir.write("bad.yaml", text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code("port: 80\n"), ErrorCode::SchemaViolation);
  EXPECT_EQ(code("library: lib.yaml\nport: 70000\n"), ErrorCode::InvalidArgument);
  EXPECT_EQ(code("library: lib.yaml\nhost: h\nextra: 1\n"), ErrorCode::SchemaViolation);
  EXPECT_EQ(code("library: missing.yaml\n"), ErrorCode::FileNotFound);
}

}  // namespace
}  // namespace tabletop::service
