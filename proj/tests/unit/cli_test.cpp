#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "cli.hpp"
#include "support/fixtures.hpp"
#include "support/records.hpp"
#include "tabletop/graspeval/trial_io.hpp"
#include "tabletop/io/png.hpp"
#include "tabletop/objectlib/library_io.hpp"
#include "tabletop/scene/scene_io.hpp"
#include "tabletop/service/server.hpp"

#include <httplib.h>

namespace tabletop::cli {
namespace {

using io::Json;
using testing::TempDir;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "tabletop");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    auto lib = testing::standard_library(*dir_);
    lib_path_ = (*dir_ / "lib.yaml").string();
    objectlib::save_library(lib, lib_path_);
  }
  static void TearDownTestSuite() { delete dir_; }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static TempDir* dir_;
  static std::string lib_path_;
};

TempDir* CliTest::dir_ = nullptr;
std::string CliTest::lib_path_;

TEST_F(CliTest, RandomSceneValidatesClean) {
  const auto made = call({"scene", "random", "--library", lib_path_, "--n", "5", "--seed", "11",
                          "--area", "A3", "--out", path("r.yaml")});
  ASSERT_EQ(made.code, kExitOk) << made.err;
  const auto checked = call({"--json", "scene", "validate", path("r.yaml")});
  ASSERT_EQ(checked.code, kExitOk) << checked.err;
  const Json doc = Json::parse(checked.out);
  ASSERT_FALSE(doc["statuses"].empty());
  for (const auto& s : doc["statuses"]) EXPECT_EQ(s, "Ok");
  EXPECT_TRUE(doc["all_ok"].get<bool>());

  // Same seed, same file.
  ASSERT_EQ(call({"scene", "random", "--library", lib_path_, "--n", "5", "--seed", "11",
                  "--out", path("r2.yaml")})
                .code,
            kExitOk);
  EXPECT_EQ(io::read_file(path("r.yaml")), io::read_file(path("r2.yaml")));
}

TEST_F(CliTest, StrictValidationFailsOnCollision) {
  const auto& cube = objectlib::load_library(lib_path_).at("cube_5cm");
  scene::Scene s;
  s.ground_area = scene::kAreaA3;
  s.library_path = lib_path_;
  const auto pose = scene::place_pose(cube.stable_poses[0], 0.1, 0.1, 0.0);
  s.instances = {{"cube_5cm", pose}, {"cube_5cm", pose}};
  scene::save_scene(s, path("clash.yaml"));

  const auto loose = call({"scene", "validate", path("clash.yaml")});
  EXPECT_EQ(loose.code, kExitOk);
  EXPECT_NE(loose.out.find("0 cube_5cm Collision"), std::string::npos) << loose.out;
  EXPECT_EQ(call({"scene", "validate", path("clash.yaml"), "--strict"}).code, kExitDomainError);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const auto unknown = call({"scene", "validate", path("r.yaml"), "--bogus"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"scene", "random", "--library", lib_path_}).code, kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
  const auto help = call({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("scene"), std::string::npos);
}

TEST_F(CliTest, DomainErrorsExitOne) {
  const auto missing = call({"--json", "scene", "show", path("nope.yaml")});
  EXPECT_EQ(missing.code, kExitDomainError);
  EXPECT_EQ(Json::parse(missing.out)["error"], "FileNotFound");
  const auto area = call({"scene", "new", "--library", lib_path_, "--area", "A9", "--out",
                          path("x.yaml")});
  EXPECT_EQ(area.code, kExitDomainError);
  EXPECT_NE(area.err.find("--area"), std::string::npos);
}

TEST_F(CliTest, ReportPrintsPrecisionAndRecall) {
  graspeval::save_records(testing::figure6_records(), path("fig6.csv"));
  const auto r = call({"report", "--records", path("fig6.csv"), "--out", path("report")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("Precision: 70.00% Recall: 67.74%"), std::string::npos) << r.out;
  EXPECT_TRUE(std::filesystem::exists(path("report/report.json")));
  const auto j = call({"--json", "report", "--records", path("fig6.csv")});
  EXPECT_EQ(Json::parse(j.out)["text"], r.out);
}

TEST_F(CliTest, IngestShowAndScene) {
  const auto lib2 = path("lib2.yaml");
  const auto mesh = objectlib::load_library(lib_path_).at("box_flat").mesh_path.string();
  const auto r = call({"--json", "ingest", "--mesh", mesh, "--id", "flat", "--mass", "0.09",
                       "--library", lib2});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["stable_poses"], 6);
  const auto shown = call({"--json", "library", "show", lib2});
  ASSERT_EQ(shown.code, kExitOk) << shown.err;
  EXPECT_EQ(Json::parse(shown.out)["objects"][0]["identifier"], "flat");

  ASSERT_EQ(call({"scene", "new", "--library", lib2, "--area", "0.3x0.2", "--board", "--out",
                  path("empty.yaml")})
                .code,
            kExitOk);
  const auto s = scene::load_scene(path("empty.yaml"));
  EXPECT_EQ(s.ground_area.width, 0.3);
  EXPECT_TRUE(s.board.has_value());
}

TEST_F(CliTest, GraspChainWritesRecords) {
  const auto& cube = objectlib::load_library(lib_path_).at("cube_4cm");
  scene::Scene s;
  s.ground_area = scene::kAreaA3;
  s.library_path = lib_path_;
  s.instances = {{"cube_4cm", scene::place_pose(cube.stable_poses[0], 0.2, 0.15, 0.0)}};
  scene::save_scene(s, path("one.yaml"));

  ASSERT_EQ(call({"grasps", "sample", "--library", lib_path_, "--object", "cube_4cm", "--samples",
                  "150", "--max", "20", "--out", path("g.yaml")})
                .code,
            kExitOk);
  ASSERT_EQ(call({"grasps", "filter", "--scene", path("one.yaml"), "--instance", "0", "--grasps",
                  path("g.yaml"), "--out", path("gf.yaml")})
                .code,
            kExitOk);
  const auto eval = call({"--json", "grasps", "eval", "--scene", path("one.yaml"), "--grasps",
                          "0=" + path("gf.yaml"), "--out", path("rec.csv")});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  const auto records = graspeval::load_records(path("rec.csv"));
  EXPECT_EQ(records.size(), Json::parse(eval.out)["records"].get<std::size_t>());
  for (const auto& r : records) EXPECT_EQ(r.scene_id, "one");

  const auto wrong = call({"grasps", "eval", "--scene", path("one.yaml"), "--grasps",
                           "3=" + path("gf.yaml"), "--out", path("bad.csv")});
  EXPECT_EQ(wrong.code, kExitDomainError);
}

TEST_F(CliTest, PrintoutAndRenderFiles) {
  ASSERT_EQ(call({"scene", "random", "--library", lib_path_, "--n", "3", "--seed", "2", "--area",
                  "A4", "--out", path("p.yaml")})
                .code,
            kExitOk);
  const auto p = call({"--json", "printout", path("p.yaml"), "--page", "A4", "--dpi", "40",
                       "--out", path("print")});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  EXPECT_EQ(Json::parse(p.out)["pages"], 1);
  EXPECT_TRUE(std::filesystem::exists(path("print/printout.pdf")));
  EXPECT_TRUE(std::filesystem::exists(path("print/page_1.png")));

  const auto r = call({"render", path("p.yaml"), "--views", "2", "--width", "32", "--height",
                       "24", "--out", path("views")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* view : {"view_000", "view_001"}) {
    const auto depth = io::read_png(*dir_ / "views" / view / "depth.png");
    EXPECT_EQ(depth.width, 32);
    EXPECT_EQ(depth.bit_depth, 16);
    EXPECT_TRUE(std::filesystem::exists(*dir_ / "views" / view / "camera.yaml"));
  }
}

// The CLI and the service report the same statuses for the same scene.
TEST_F(CliTest, StatusParityWithService) {
  ASSERT_EQ(call({"scene", "random", "--library", lib_path_, "--n", "6", "--seed", "5", "--out",
                  path("parity.yaml")})
                .code,
            kExitOk);
  auto s = scene::load_scene(path("parity.yaml"));
  // Nudge one object onto another so the statuses are mixed.
  s.instances[1].pose.translation.head<2>() = s.instances[0].pose.translation.head<2>();
  s.instances[2].pose.translation.x() = -0.5;
  scene::save_scene(s, path("parity.yaml"));

  const auto cli = Json::parse(call({"--json", "scene", "validate", path("parity.yaml")}).out);

  std::filesystem::create_directories(*dir_ / "data");
  service::ServiceConfig config;
  config.port = 0;
  config.library_path = lib_path_;
  config.data_dir = *dir_ / "data";
  service::Service svc(config);
  const int port = svc.bind();
  ASSERT_GT(port, 0);
  std::thread serving([&] { svc.serve(); });
  httplib::Client client("127.0.0.1", port);
  const Json doc{{"scene", scene::scene_to_json(s, dir_->path())}};
  const auto created = client.Post("/api/sessions", doc.dump(), "application/json");
  ASSERT_EQ(created->status, 201);
  const auto id = Json::parse(created->body)["session_id"].get<std::string>();
  const auto validated = client.Post("/api/sessions/" + id + "/validate", "", "application/json");
  svc.stop();
  serving.join();
  ASSERT_EQ(validated->status, 200);
  EXPECT_EQ(Json::parse(validated->body), cli["statuses"]);
  EXPECT_NE(cli["statuses"].dump().find("Collision"), std::string::npos);
  EXPECT_NE(cli["statuses"].dump().find("OutOfBounds"), std::string::npos);
}

}  // namespace
}  // namespace tabletop::cli
