#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "support/temp_dir.hpp"
#include "tabletop/error.hpp"
#include "tabletop/geom/bvh.hpp"
#include "tabletop/geom/mass.hpp"
#include "tabletop/geom/mesh_io.hpp"
#include "tabletop/geom/primitives.hpp"
#include "tabletop/geom/rng.hpp"
#include "tabletop/geom/sampling.hpp"

namespace tabletop::geom {
namespace {

using testing::TempDir;

const char* kCubeObj = R"(# unit cube
v 0 0 0
v 1 0 0
v 0 1 0
v 1 1 0
v 0 0 1
v 1 0 1
v 0 1 1
v 1 1 1
f 1 3 4 2
f 5 6 8 7
f 1 2 6 5
f 3 7 8 4
f 1 5 7 3
f 2 4 8 6
)";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(LoadMesh, UnitCubeObj) {
  TempDir dir;
  const auto path = dir.write("cube.obj", kCubeObj);
  const auto mesh = load_mesh(path, 1.0);
  EXPECT_EQ(mesh.vertices.size(), 8u);
  EXPECT_EQ(mesh.triangles.size(), 12u);
  EXPECT_TRUE(is_watertight(mesh));
}

TEST(LoadMesh, ScaleAppliesToCoordinates) {
  TempDir dir;
  const auto mesh = load_mesh(dir.write("cube.obj", kCubeObj), 0.05);
  const Eigen::Vector3d extents = mesh.bounds().sizes();
  EXPECT_NEAR(extents.x(), 0.05, 1e-15);
  EXPECT_NEAR(extents.y(), 0.05, 1e-15);
  EXPECT_NEAR(extents.z(), 0.05, 1e-15);
}

TEST(LoadMesh, OutOfRangeFaceIndexIsMalformed) {
  TempDir dir;
  std::string text = kCubeObj;
  text += "f 1 2 9\n";
  const auto path = dir.write("bad.obj", text);
  EXPECT_EQ(code_of([&] { load_mesh(path); }), ErrorCode::MalformedMesh);
}

TEST(LoadMesh, NonFiniteCoordinateIsMalformed) {
  TempDir dir;
  const auto path = dir.write("nan.obj", "v 0 0 nan\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  EXPECT_EQ(code_of([&] { load_mesh(path); }), ErrorCode::MalformedMesh);
}

TEST(LoadMesh, MissingAndUnsupportedFiles) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { load_mesh(dir / "nope.obj"); }), ErrorCode::FileNotFound);
  const auto ply = dir.write("mesh.ply", "ply\n");
  EXPECT_EQ(code_of([&] { load_mesh(ply); }), ErrorCode::UnsupportedFormat);
}

TEST(LoadMesh, NegativeIndicesAndSlashForms) {
  const auto mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf -4/1/1 -3/2/2 -2//3 -1\n");
  ASSERT_EQ(mesh.triangles.size(), 2u);
  EXPECT_EQ(mesh.triangles[1], (Triangle{0, 2, 3}));
}

TEST(LoadMesh, BinaryStlIsWelded) {
  TempDir dir;
  const auto cube = make_box({1.0, 2.0, 3.0});
  write_binary_stl(cube, dir / "box.stl");
  const auto loaded = load_mesh(dir / "box.stl");
  EXPECT_EQ(loaded.vertices.size(), 8u);
  EXPECT_EQ(loaded.triangles.size(), 12u);
  EXPECT_TRUE(is_watertight(loaded));
  EXPECT_NEAR(signed_volume(loaded), 6.0, 1e-9);
}

TEST(LoadMesh, AsciiStl) {
  const std::string text =
      "solid t\n facet normal 0 0 1\n  outer loop\n   vertex 0 0 0\n   vertex 1 0 0\n"
      "   vertex 0 1 0\n  endloop\n endfacet\nendsolid t\n";
  const auto mesh = parse_stl(text);
  EXPECT_EQ(mesh.vertices.size(), 3u);
  EXPECT_EQ(mesh.triangles.size(), 1u);
}

TEST(MassProperties, UnitCube) {
  const auto props = mass_properties(make_box({1, 1, 1}), 1.0);
  EXPECT_NEAR(props.volume, 1.0, 1e-12);
  EXPECT_TRUE(props.center_of_mass.isApprox(Eigen::Vector3d(0.5, 0.5, 0.5), 1e-12));
  // Closed-form solid box: I_xx = m (b^2 + c^2) / 12.
  const double expected = 1.0 * (1.0 + 1.0) / 12.0;
  EXPECT_NEAR(expected, 1.0 / 6.0, 1e-15);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(props.inertia(k, k), expected, 1e-12);
  EXPECT_NEAR(props.inertia(0, 1), 0.0, 1e-12);
}

TEST(MassProperties, BoxAndPyramidClosedForms) {
  const double m = 2.5;
  const auto box = mass_properties(make_centered_box({0.1, 0.2, 0.3}), m);
  EXPECT_NEAR(box.inertia(0, 0), m * (0.04 + 0.09) / 12.0, 1e-12);
  EXPECT_NEAR(box.inertia(1, 1), m * (0.01 + 0.09) / 12.0, 1e-12);
  EXPECT_NEAR(box.inertia(2, 2), m * (0.01 + 0.04) / 12.0, 1e-12);
  // Square pyramid: V = b^2 h / 3, COM at h / 4, I_zz = m b^2 / 10.
  const auto pyr = mass_properties(make_pyramid(1.0, 2.0), m);
  EXPECT_NEAR(pyr.volume, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pyr.center_of_mass.z(), 0.5, 1e-12);
  EXPECT_NEAR(pyr.inertia(2, 2), m / 10.0, 1e-12);
}

TEST(MassProperties, OpenSheetIsNotWatertight) {
  TriMesh sheet;
  sheet.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  sheet.triangles = {{0, 1, 2}, {0, 2, 3}};
  EXPECT_EQ(code_of([&] { mass_properties(sheet, 1.0); }), ErrorCode::NonWatertight);
  EXPECT_FALSE(is_watertight(sheet));
}

TEST(MassProperties, InvertedWindingIsRejected) {
  auto cube = make_box({1, 1, 1});
  for (auto& t : cube.triangles) std::swap(t[1], t[2]);
  EXPECT_EQ(code_of([&] { mass_properties(cube, 1.0); }), ErrorCode::NonWatertight);
}

TEST(MassProperties, TranslationEquivariance) {
  Rng rng(11);
  const std::vector<TriMesh> meshes{make_pyramid(0.3, 0.5), make_icosphere(0.2, 2),
                                    make_cylinder(0.04, 0.1, 24)};
  for (const auto& mesh : meshes) {
    const auto base = mass_properties(mesh, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Vector3d t(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
      const auto moved = mass_properties(mesh.transformed(Pose::from_translation(t)), 0.7);
      EXPECT_NEAR(moved.volume, base.volume, 1e-9);
      EXPECT_LE((moved.center_of_mass - base.center_of_mass - t).norm(), 1e-9);
      EXPECT_LE((moved.inertia - base.inertia).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(MassProperties, InertiaIsSymmetricPositiveDefinite) {
  const auto props = mass_properties(make_pyramid(0.2, 0.1), 0.3);
  EXPECT_TRUE(props.inertia.isApprox(props.inertia.transpose()));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(props.inertia);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Raycast, AxisAlignedHitAndMiss) {
  const Bvh bvh(make_box({1, 1, 1}));
  const auto hit = bvh.raycast({-1, 0.5, 0.5}, {1, 0, 0}, 0.0, 10.0);
  ASSERT_TRUE(hit.has_value());
  EXPECT_DOUBLE_EQ(hit->distance, 1.0);
  EXPECT_TRUE(hit->point.isApprox(Eigen::Vector3d(0, 0.5, 0.5)));
  EXPECT_TRUE(hit->normal.isApprox(Eigen::Vector3d(-1, 0, 0)));
  EXPECT_FALSE(bvh.raycast({-1, 2, 2}, {1, 0, 0}, 0.0, 10.0).has_value());
  EXPECT_FALSE(bvh.raycast({-1, 0.5, 0.5}, {1, 0, 0}, 0.0, 0.5).has_value());
}

TEST(Raycast, MatchesBruteForceOnRandomRays) {
  const auto mesh = make_icosphere(0.5, 3).transformed(
      Pose(Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d(1, 2, 3).normalized())),
           Eigen::Vector3d(0.1, -0.2, 0.05)));
  const Bvh bvh(mesh);
  Rng rng(5);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d origin(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Eigen::Vector3d dir = rng.unit_vector();
    const auto fast = bvh.raycast(origin, dir, 0.0, 5.0);
    const auto slow = raycast_brute_force(mesh, origin, dir, 0.0, 5.0);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "ray " << i;
    if (fast) {
      ++hits;
      EXPECT_EQ(fast->triangle, slow->triangle);
      EXPECT_LE(std::abs(fast->distance - slow->distance), 1e-9);
    }
  }
  EXPECT_GT(hits, 1000);
}

TEST(Raycast, AllHitsSorted) {
  const Bvh bvh(make_box({1, 1, 1}));
  const auto hits = bvh.raycast_all({-1, 0.3, 0.6}, {1, 0, 0}, 0.0, 10.0);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_DOUBLE_EQ(hits[0].distance, 1.0);
  EXPECT_DOUBLE_EQ(hits[1].distance, 2.0);
  EXPECT_GT(hits[1].normal.x(), 0.0);
}

TEST(Bvh, EveryTriangleInExactlyOneLeafAndBoxesNest) {
  const Bvh bvh(make_icosphere(1.0, 3));
  std::vector<int> seen(bvh.mesh().triangles.size(), 0);
  const auto& nodes = bvh.nodes();
  for (const auto& node : nodes) {
    if (node.is_leaf()) {
      for (auto t : bvh.leaf_triangles(node)) ++seen[t];
    } else {
      EXPECT_TRUE(node.box.contains(nodes[node.left].box));
      EXPECT_TRUE(node.box.contains(nodes[node.right].box));
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(SampleSurface, CountZeroAndDeterminism) {
  const auto cube = make_box({1, 1, 1});
  EXPECT_TRUE(sample_surface(cube, 0, 1).empty());
  const auto a = sample_surface(cube, 500, 42);
  const auto b = sample_surface(cube, 500, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].point, b[i].point);
    EXPECT_EQ(a[i].triangle, b[i].triangle);
  }
  EXPECT_THROW(sample_surface(TriMesh{}, 3, 1), Error);
}

TEST(SampleSurface, AreaWeightedFaceFractions) {
  const auto cube = make_box({1, 1, 1});
  const auto samples = sample_surface(cube, 100000, 7);
  std::array<int, 6> per_face{};
  for (const auto& s : samples) per_face[s.triangle / 2] += 1;
  for (int count : per_face) EXPECT_NEAR(count / 100000.0, 1.0 / 6.0, 0.01);
}

TEST(SampleSurface, PointsLieOnTheirTriangle) {
  const auto mesh = make_icosphere(0.3, 2);
  for (const auto& s : sample_surface(mesh, 2000, 3)) {
    const auto c = mesh.corners(s.triangle);
    const Eigen::Vector3d n = mesh.normal(s.triangle);
    EXPECT_LE(std::abs(n.dot(s.point - c[0])), 1e-9);
    // Barycentric coordinates within [0, 1].
    Eigen::Matrix<double, 3, 2> m;
    m << c[1] - c[0], c[2] - c[0];
    const Eigen::Vector2d uv = m.colPivHouseholderQr().solve(s.point - c[0]);
    EXPECT_GE(uv.minCoeff(), -1e-9);
    EXPECT_LE(uv.sum(), 1.0 + 1e-9);
  }
}

TEST(Primitives, AreWatertight) {
  EXPECT_TRUE(is_watertight(make_box({0.1, 0.2, 0.3})));
  EXPECT_TRUE(is_watertight(make_cylinder(0.05, 0.1, 32)));
  EXPECT_TRUE(is_watertight(make_pyramid(1, 2)));
  EXPECT_TRUE(is_watertight(make_icosphere(1, 2)));
  EXPECT_NEAR(signed_volume(make_icosphere(1, 4)), 4.0 / 3.0 * kPi, 0.02);
}

}  // namespace
}  // namespace tabletop::geom
