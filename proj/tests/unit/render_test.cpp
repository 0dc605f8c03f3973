#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/fixtures.hpp"
#include "tabletop/error.hpp"
#include "tabletop/geom/bvh.hpp"
#include "tabletop/geom/rng.hpp"
#include "tabletop/io/png.hpp"
#include "tabletop/render/renderer.hpp"

namespace tabletop::render {
namespace {

using objectlib::ObjectLibrary;
using scene::Scene;
using testing::TempDir;

class RenderTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    library_ = new ObjectLibrary(testing::standard_library(*dir_));
  }
  static void TearDownTestSuite() {
    delete library_;
    delete dir_;
  }

  static Scene three_objects() {
    Scene s;
    s.ground_area = scene::kAreaA4;
    const auto at = [](const std::string& id, double x, double y, double yaw, std::size_t pose) {
      return scene::ObjectInstance{
          id, scene::place_pose(library_->at(id).stable_poses.at(pose), x, y, yaw)};
    };
    s.instances = {at("cube_5cm", 0.10, 0.08, 0.3, 0), at("cylinder", 0.17, 0.12, 0.0, 0),
                   at("box_small", 0.21, 0.07, 1.1, 0)};
    return s;
  }

  static TempDir* dir_;
  static ObjectLibrary* library_;
};

TempDir* RenderTest::dir_ = nullptr;
ObjectLibrary* RenderTest::library_ = nullptr;

struct OracleHit {
  int index = kBackground;
  double t = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
};

// Every triangle of every posed mesh plus the ground plane, in the scene
// frame; lowest index wins ties.
OracleHit exhaustive(const Scene& s, const ObjectLibrary& lib, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir) {
  OracleHit best;
  best.t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    const auto mesh = scene::posed_mesh(lib.at(s.instances[i].object_id), s.instances[i].pose);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto c = mesh.corners(t);
      const auto hit = geom::intersect_triangle(origin, dir, c[0], c[1], c[2]);
      if (hit && *hit >= 0.0 && *hit < best.t) best = {static_cast<int>(i), *hit, {}};
    }
  }
  if (dir.z() != 0.0) {
    const double t = -origin.z() / dir.z();
    if (t > 0.0 && t < best.t) best = {static_cast<int>(s.instances.size()), t, {}};
  }
  if (best.index == kBackground) return {};
  best.point = origin + best.t * dir;
  return best;
}

TEST_F(RenderTest, DownwardCameraOverEmptyGround) {
  Scene s;
  s.ground_area = scene::kAreaA3;
  const auto cam = make_camera(64, 48, 60.0, look_at({0, 0, 1}, {0, 0, 0}));
  const auto out = render_scene(s, *library_, cam);
  EXPECT_EQ(out.ground_index, 0);
  for (std::size_t i = 0; i < out.depth.size(); ++i) {
    ASSERT_NEAR(out.depth[i], 1.0, 1e-12);
    ASSERT_EQ(out.segmentation[i], 0);
  }
  // The flat ground faces the light with the fixed ground colour.
  const double lambert = light_direction().z();
  EXPECT_EQ(out.color[0], std::lround(ground_color()[0] * lambert));
}

TEST_F(RenderTest, UpwardCameraSeesNothing) {
  const auto s = three_objects();
  const auto cam = make_camera(32, 32, 90.0, look_at({0.1, 0.1, 1.0}, {0.1, 0.1, 2.0}));
  const auto out = render_scene(s, *library_, cam);
  for (std::size_t i = 0; i < out.depth.size(); ++i) {
    ASSERT_EQ(out.depth[i], 0.0);
    ASSERT_EQ(out.segmentation[i], kBackground);
  }
}

TEST_F(RenderTest, MatchesExhaustiveOracleAt64) {
  const auto s = three_objects();
  const auto poses = sample_camera_poses(s, 4, {0.3, 0.6}, {25, 85}, 99);
  std::vector<geom::Pose> views = poses;
  views.push_back(look_at({0.15, 0.1, 0.5}, {0.15, 0.1, 0.0}));
  for (const auto& pose : views) {
    const auto cam = make_camera(64, 64, 50.0, pose);
    const auto out = render_scene(s, *library_, cam);
    int objects = 0;
    for (int v = 0; v < 64; ++v) {
      for (int u = 0; u < 64; ++u) {
        const Eigen::Vector3d d = pose.rotate(cam.ray(u + 0.5, v + 0.5).normalized());
        const auto want = exhaustive(s, *library_, pose.translation, d);
        const auto px = out.pixel(u, v);
        ASSERT_EQ(out.segmentation[px], want.index) << u << "," << v;
        ASSERT_EQ(out.depth[px] > 0.0, out.segmentation[px] >= 0);
        if (want.index == kBackground) continue;
        objects += want.index < out.ground_index;
        // z-depth is the hit's camera-frame z.
        const Eigen::Vector3d in_cam = pose.inverse() * want.point;
        ASSERT_NEAR(out.depth[px], in_cam.z(), 1e-9);
        ASSERT_LT((cam.unproject(u + 0.5, v + 0.5, out.depth[px]) - want.point).norm(), 1e-4);
      }
    }
    EXPECT_GT(objects, 0);
  }
}

TEST_F(RenderTest, DeterministicAndConsistent) {
  const auto s = three_objects();
  for (const auto& pose : sample_camera_poses(s, 3, {0.2, 0.8}, {-30, 90}, 5)) {
    const auto cam = make_camera(80, 60, 70.0, pose);
    const auto a = render_scene(s, *library_, cam);
    const auto b = render_scene(s, *library_, cam);
    EXPECT_EQ(a.depth, b.depth);
    EXPECT_EQ(a.segmentation, b.segmentation);
    EXPECT_EQ(a.color, b.color);
    for (std::size_t i = 0; i < a.depth.size(); ++i) {
      ASSERT_EQ(a.depth[i] > 0.0, a.segmentation[i] >= 0);
      if (a.segmentation[i] < 0) ASSERT_EQ(a.color[3 * i], 0);
    }
  }
}

TEST_F(RenderTest, CameraModel) {
  Rng rng(2);
  const auto cam = make_camera(640, 480, 65.0, look_at({0.3, -0.2, 0.5}, {0.1, 0.1, 0.0}));
  for (int i = 0; i < 200; ++i) {
    const double u = rng.uniform(0, 640), v = rng.uniform(0, 480), d = rng.uniform(0.1, 3);
    const auto back = cam.project(cam.unproject(u, v, d));
    ASSERT_TRUE(back);
    EXPECT_NEAR(back->x(), u, 1e-9);
    EXPECT_NEAR(back->y(), v, 1e-9);
  }
  // Image up is scene up for a tilted camera.
  const auto pose = look_at({0, -1, 0.5}, {0, 0, 0});
  EXPECT_LT(pose.rotate(Eigen::Vector3d::UnitY()).z(), 0.0);
  EXPECT_NEAR(pose.rotation_matrix().determinant(), 1.0, 1e-12);

  auto bad = cam;
  bad.cx = 640;
  EXPECT_THROW(bad.validate(), Error);
  bad = cam;
  bad.fy = 0;
  EXPECT_THROW(render_scene(Scene{}, *library_, bad), Error);

  const auto j = camera_to_json(cam);
  const auto again = camera_from_json(io::parse_yaml(io::emit_yaml(j)));
  EXPECT_NEAR(again.fx, cam.fx, 1e-8 * cam.fx);  // 9 significant digits
  EXPECT_EQ(again.width, 640);
  EXPECT_TRUE(again.pose.translation.isApprox(cam.pose.translation, 1e-9));
}

TEST_F(RenderTest, SampledPosesLookAtTheCentre) {
  const auto s = three_objects();
  EXPECT_TRUE(sample_camera_poses(s, 0, {0.3, 0.5}, {10, 80}, 1).empty());
  const auto poses = sample_camera_poses(s, 500, {0.3, 0.5}, {10, 80}, 1);
  const auto again = sample_camera_poses(s, 500, {0.3, 0.5}, {10, 80}, 1);
  const Eigen::Vector3d centre = scene_centre(s);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto& p = poses[i];
    EXPECT_EQ(p.translation, again[i].translation);
    EXPECT_EQ(p.rotation.coeffs(), again[i].rotation.coeffs());
    const Eigen::Vector3d z = p.rotate(Eigen::Vector3d::UnitZ());
    const Eigen::Vector3d to_centre = (centre - p.translation).normalized();
    EXPECT_LT(std::acos(std::min(1.0, z.dot(to_centre))), 1e-6);
    const Eigen::Vector3d off = p.translation - centre;
    EXPECT_GE(off.norm(), 0.3 - 1e-12);
    EXPECT_LE(off.norm(), 0.5 + 1e-12);
    const double elevation = std::asin(off.z() / off.norm()) * 180 / std::numbers::pi;
    EXPECT_GE(elevation, 10 - 1e-9);
    EXPECT_LE(elevation, 80 + 1e-9);
  }
  EXPECT_NE(sample_camera_poses(s, 1, {0.3, 0.5}, {10, 80}, 2)[0].translation,
            poses[0].translation);
  // Straight down is well defined.
  const auto top = sample_camera_poses(s, 3, {0.5, 0.5}, {90, 90}, 3);
  for (const auto& p : top) EXPECT_NEAR(p.rotate(Eigen::Vector3d::UnitZ()).z(), -1.0, 1e-12);
  EXPECT_THROW(sample_camera_poses(s, -1, {0.3, 0.5}, {10, 80}, 1), Error);
  EXPECT_THROW(sample_camera_poses(s, 1, {0.5, 0.3}, {10, 80}, 1), Error);
  EXPECT_THROW(sample_camera_poses(s, 1, {0.3, 0.5}, {10, 95}, 1), Error);
}

TEST_F(RenderTest, ViewFilesRoundTrip) {
  const auto s = three_objects();
  const auto cam = make_camera(40, 30, 60.0, look_at({0.15, -0.2, 0.4}, scene_centre(s)));
  const auto out = render_scene(s, *library_, cam);
  TempDir dir;
  write_view(out, cam, dir.path() / "view_000");
  const auto depth = io::read_png(dir.path() / "view_000" / "depth.png");
  const auto seg = io::read_png(dir.path() / "view_000" / "seg.png");
  const auto rgb = io::read_png(dir.path() / "view_000" / "rgb.png");
  EXPECT_EQ(depth.bit_depth, 16);
  EXPECT_EQ(rgb.channels, 3);
  for (std::size_t i = 0; i < out.depth.size(); ++i) {
    ASSERT_NEAR(depth.samples[i] * kDepthUnit, out.depth[i], kDepthUnit / 2 + 1e-12);
    ASSERT_EQ(static_cast<int>(seg.samples[i]) - 1, out.segmentation[i]);
    ASSERT_EQ(rgb.samples[3 * i + 1], out.color[3 * i + 1]);
  }
  const auto meta = io::load_yaml(dir.path() / "view_000" / "camera.yaml");
  EXPECT_EQ(meta["ground_label"], 4);
  EXPECT_NEAR(camera_from_json(meta).cy, 15.0, 1e-12);
}

}  // namespace
}  // namespace tabletop::render
