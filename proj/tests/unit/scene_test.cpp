#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support/fixtures.hpp"
#include "tabletop/error.hpp"
#include "tabletop/geom/primitives.hpp"
#include "tabletop/geom/rng.hpp"
#include "tabletop/objectlib/library_io.hpp"
#include "tabletop/scene/scene_io.hpp"

namespace tabletop::scene {
namespace {

using objectlib::ObjectLibrary;
using testing::TempDir;
using S = InstanceStatus;

class SceneTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    library_ = new ObjectLibrary(testing::standard_library(*dir_));
    library_->objects.emplace("big_box", testing::ingest_mesh(*dir_, "big_box",
                              geom::make_centered_box({0.2, 0.2, 0.2}), 1.0));
    objectlib::save_library(*library_, *dir_ / "object_library.yaml");
    library_->source = *dir_ / "object_library.yaml";
  }
  static void TearDownTestSuite() {
    delete library_;
    delete dir_;
  }

  static ObjectInstance cube_at(double x, double y, double yaw = 0.0) {
    const auto& cube = library_->at("cube_5cm");
    return {"cube_5cm", place_pose(cube.stable_poses[0], x, y, yaw)};
  }

  static Scene a3_scene(std::vector<ObjectInstance> instances) {
    Scene s;
    s.ground_area = kAreaA3;
    s.library_path = library_->source;
    s.instances = std::move(instances);
    return s;
  }

  static TempDir* dir_;
  static ObjectLibrary* library_;
};

TempDir* SceneTest::dir_ = nullptr;
ObjectLibrary* SceneTest::library_ = nullptr;

TEST_F(SceneTest, ValidateExamples) {
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.1, 0.1), cube_at(0.3, 0.2)}), *library_),
            (std::vector<S>{S::Ok, S::Ok}));
  // The area is only 0.297 m deep, so a cube centred at y = 0.3 pokes out.
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.1, 0.1), cube_at(0.3, 0.3)}), *library_),
            (std::vector<S>{S::Ok, S::OutOfBounds}));
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.1, 0.1), cube_at(0.1, 0.1)}), *library_),
            (std::vector<S>{S::Collision, S::Collision}));
  EXPECT_EQ(validate_scene(a3_scene({cube_at(-0.01, 0.1)}), *library_),
            (std::vector<S>{S::OutOfBounds}));
}

TEST_F(SceneTest, CollisionDominatesAndTouchingCollides) {
  // Both out of bounds and overlapping.
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.0, 0.1), cube_at(0.02, 0.1)}), *library_),
            (std::vector<S>{S::Collision, S::Collision}));
  // Face-to-face contact at exactly 5 cm spacing.
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.1, 0.1), cube_at(0.15, 0.1)}), *library_),
            (std::vector<S>{S::Collision, S::Collision}));
  EXPECT_EQ(validate_scene(a3_scene({cube_at(0.1, 0.1), cube_at(0.1501, 0.1)}), *library_),
            (std::vector<S>{S::Ok, S::Ok}));
}

TEST_F(SceneTest, ContainmentAndGroundPenetration) {
  const auto& big = library_->at("big_box");
  Scene s = a3_scene({{"big_box", place_pose(big.stable_poses[0], 0.2, 0.15, 0.0)},
                      {"cube_4cm", geom::Pose::from_translation({0.2, 0.15, 0.08})}});
  EXPECT_EQ(validate_scene(s, *library_), (std::vector<S>{S::Collision, S::Collision}));
  Scene sunk = a3_scene({cube_at(0.1, 0.1)});
  sunk.instances[0].pose.translation.z() -= 2e-5;
  EXPECT_EQ(validate_scene(sunk, *library_), (std::vector<S>{S::Collision}));
  sunk.instances[0].pose.translation.z() += 1.5e-5;
  EXPECT_EQ(validate_scene(sunk, *library_), (std::vector<S>{S::Ok}));
}

TEST_F(SceneTest, UnknownObjectId) {
  Scene s = a3_scene({{"nope", geom::Pose::identity()}});
  try {
    validate_scene(s, *library_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownObjectId);
  }
}

TEST_F(SceneTest, ValidationIsOrderIndependent) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ObjectInstance> instances;
    for (int i = 0; i < 6; ++i) {
      // Tight area so collisions and out-of-bounds both occur.
      instances.push_back(cube_at(rng.uniform(-0.02, 0.2), rng.uniform(-0.02, 0.2),
                                  rng.uniform(0, 6.28)));
    }
    const auto base = validate_scene(a3_scene(instances), *library_);
    std::vector<std::size_t> perm(instances.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(trial));
    std::vector<ObjectInstance> shuffled;
    for (auto p : perm) shuffled.push_back(instances[p]);
    const auto permuted = validate_scene(a3_scene(shuffled), *library_);
    for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(permuted[k], base[perm[k]]);
  }
}

bool decomposes(const Scene& s, const ObjectLibrary& lib) {
  for (const auto& inst : s.instances) {
    bool found = false;
    for (const auto& sp : lib.at(inst.object_id).stable_poses) {
      const Eigen::Matrix3d m = inst.pose.rotation_matrix() * sp.pose.rotation_matrix().transpose();
      const Eigen::Vector3d rest = inst.pose.translation - m * sp.pose.translation;
      if (std::abs(m(2, 2) - 1.0) < 1e-9 && std::abs(rest.z()) < 1e-9) found = true;
    }
    if (!found) return false;
  }
  return true;
}

TEST_F(SceneTest, RandomSceneBasics) {
  EXPECT_TRUE(random_scene(*library_, {0, 20, 1}, kAreaA3).instances.empty());
  const auto a = random_scene(*library_, {5, 20, 7}, kAreaA3);
  const auto b = random_scene(*library_, {5, 20, 7}, kAreaA3);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].object_id, b.instances[i].object_id);
    EXPECT_EQ(a.instances[i].pose.row_major(), b.instances[i].pose.row_major());
  }
  EXPECT_EQ(a.library_path, library_->source);
}

TEST_F(SceneTest, RandomScenesAlwaysValidate) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto s = random_scene(*library_, {8, 20, seed}, kAreaA4);
    const auto status = validate_scene(s, *library_);
    EXPECT_TRUE(std::all_of(status.begin(), status.end(), [](S x) { return x == S::Ok; }))
        << "seed " << seed;
    EXPECT_TRUE(decomposes(s, *library_));
  }
}

TEST_F(SceneTest, AreaExhaustion) {
  ObjectLibrary cubes;
  cubes.objects.emplace("cube_5cm", library_->at("cube_5cm"));
  const auto s = random_scene(cubes, {5, 10, 3}, {0.06, 0.06});
  EXPECT_LT(s.instances.size(), 5u);
  EXPECT_GE(s.instances.size(), 1u);
  for (auto st : validate_scene(s, cubes)) EXPECT_EQ(st, S::Ok);
}

TEST_F(SceneTest, SnapToStable) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Scene s = a3_scene({{"box_small",
                         geom::Pose(Eigen::Quaterniond(Eigen::AngleAxisd(rng.uniform(0, 6), rng.unit_vector())),
                                    Eigen::Vector3d(0.2, 0.15, 0.3))}});
    const auto& obj = library_->at("box_small");
    for (std::size_t k = 0; k < obj.stable_poses.size(); ++k) {
      const Scene snapped = snap_to_stable(s, 0, *library_, k);
      const auto world = posed_mesh(obj, snapped.instances[0].pose);
      EXPECT_LE(std::abs(world.bounds().min().z()), 1e-5);
      EXPECT_NEAR(snapped.instances[0].pose.translation.x(), 0.2, 1e-9);
      EXPECT_NEAR(snapped.instances[0].pose.translation.y(), 0.15, 1e-9);
      EXPECT_TRUE(objectlib::validate_stable_pose(obj, snapped.instances[0].pose));
      EXPECT_EQ(validate_scene(snapped, *library_), (std::vector<S>{S::Ok}));
    }
  }
}

TEST_F(SceneTest, SnapKeepsYawAndIsIdempotent) {
  Scene s = a3_scene({cube_at(0.2, 0.1, 0.7)});
  const Scene snapped = snap_to_stable(s, 0, *library_, 0);
  const auto a = s.instances[0].pose.row_major();
  const auto b = snapped.instances[0].pose.row_major();
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST_F(SceneTest, SnapIndexErrors) {
  Scene s = a3_scene({cube_at(0.2, 0.1)});
  const auto code = [&](std::size_t inst, std::size_t pose) {
    try {
      snap_to_stable(s, inst, *library_, pose);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code(0, 6), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code(1, 0), ErrorCode::IndexOutOfRange);
}

TEST_F(SceneTest, SaveLoadRoundTrip) {
  Scene s = random_scene(*library_, {6, 50, 11}, kAreaA2);
  ASSERT_EQ(s.instances.size(), 6u);
  s.board = BoardSpec{};
  TempDir out;
  std::filesystem::create_directories(out / "sub");
  save_scene(s, out / "sub/scene.yaml");
  const Scene loaded = load_scene(out / "sub/scene.yaml");
  EXPECT_EQ(loaded.ground_area, s.ground_area);
  EXPECT_EQ(loaded.library_path, s.library_path);
  ASSERT_TRUE(loaded.board.has_value());
  EXPECT_EQ(*loaded.board, *s.board);
  ASSERT_EQ(loaded.instances.size(), s.instances.size());
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    EXPECT_EQ(loaded.instances[i].object_id, s.instances[i].object_id);
    const auto a = s.instances[i].pose.row_major();
    const auto b = loaded.instances[i].pose.row_major();
    for (int e = 0; e < 16; ++e) EXPECT_NEAR(a[e], b[e], 1e-9);
  }
  EXPECT_EQ(validate_scene(loaded, *library_), validate_scene(s, *library_));
  // Relative library path resolves against the scene file's directory.
  const auto text = io::read_file(out / "sub/scene.yaml");
  EXPECT_NE(text.find("object_library: \""), std::string::npos);
  const auto lib = objectlib::load_library(loaded.library_path);
  EXPECT_EQ(lib.objects.size(), library_->objects.size());
}

TEST_F(SceneTest, JsonYamlParity) {
  Scene s = random_scene(*library_, {4, 20, 2}, kAreaA3);
  const auto json = scene_to_json(s, dir_->path());
  const auto via_json = scene_from_json(io::Json::parse(json.dump()), dir_->path());
  const auto via_yaml = scene_from_json(io::parse_yaml(io::emit_yaml(json)), dir_->path());
  EXPECT_EQ(validate_scene(via_json, *library_), validate_scene(via_yaml, *library_));
  ASSERT_EQ(via_json.instances.size(), via_yaml.instances.size());
  for (std::size_t i = 0; i < via_json.instances.size(); ++i) {
    const auto a = via_json.instances[i].pose.row_major();
    const auto b = via_yaml.instances[i].pose.row_major();
    for (int e = 0; e < 16; ++e) EXPECT_NEAR(a[e], b[e], 1e-9);
  }
}

TEST_F(SceneTest, SchemaErrors) {
  TempDir out;
  const auto check = [&](const std::string& text, const std::string& needle) {
    io::write_file(out / "s.yaml", text);
    try {
      load_scene(out / "s.yaml");
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  const std::string pose = "[1,0,0,0.1, 0,1,0,0.1, 0,0,1,0.025, 0,0,0,1]";
  check("version: 2\nobject_library: l.yaml\nground_area: [0.4, 0.3]\nobjects: []\n", "version");
  check("version: 1\nobject_library: l.yaml\nground_area: [0.4]\nobjects: []\n", "ground_area");
  check("version: 1\nobject_library: l.yaml\nground_area: [0.4, 0.3]\nobjects:\n  - object_type: c\n"
        "    pose: [1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0]\n",
        "objects[0].pose");
  check("version: 1\nobject_library: l.yaml\nground_area: [0.4, 0.3]\nobjects:\n  - object_type: c\n"
        "    pose: [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]\n",
        "objects[0].pose");
  check("version: 1\nobject_library: l.yaml\nground_area: [0.4, 0.3]\nobjects: []\nlights: 3\n",
        "lights");
  io::write_file(out / "ok.yaml", "version: 1\nobject_library: l.yaml\nground_area: [0.4, 0.3]\n"
                                  "objects:\n  - object_type: c\n    pose: " + pose + "\n");
  EXPECT_EQ(load_scene(out / "ok.yaml").instances.size(), 1u);
}

TEST(AreaPreset, Names) {
  EXPECT_EQ(area_preset("a2"), kAreaA2);
  EXPECT_EQ(area_preset("A4"), kAreaA4);
  EXPECT_FALSE(area_preset("B5").has_value());
}

}  // namespace
}  // namespace tabletop::scene
