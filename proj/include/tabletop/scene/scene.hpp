#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabletop/geom/pose.hpp"
#include "tabletop/objectlib/object_type.hpp"

namespace tabletop::scene {

// Scene frame: origin at a ground-area corner, x along width, y along depth,
// z up.
struct GroundArea {
  double width = 0.0;  // m
  double depth = 0.0;  // m
  bool operator==(const GroundArea&) const = default;
};

inline constexpr GroundArea kAreaA2{0.594, 0.420};
inline constexpr GroundArea kAreaA3{0.420, 0.297};
inline constexpr GroundArea kAreaA4{0.297, 0.210};

// "A2" / "A3" / "A4" (case-insensitive).
std::optional<GroundArea> area_preset(std::string_view name);

// Printable marker board laid out as a perimeter band on the ground area.
struct BoardSpec {
  std::string dictionary = "aruco_4x4_50";
  double marker_size_mm = 30.0;
  double marker_spacing_mm = 6.0;
  int first_id = 0;
  bool operator==(const BoardSpec&) const = default;
};

struct ObjectInstance {
  std::string object_id;
  geom::Pose pose;
};

struct Scene {
  GroundArea ground_area;
  std::vector<ObjectInstance> instances;
  std::filesystem::path library_path;  // absolute
  std::optional<BoardSpec> board;
};

enum class InstanceStatus { Ok, Collision, OutOfBounds };
std::string_view to_string(InstanceStatus status);

struct RandomSceneParams {
  int n = 5;   // target object count
  int k = 20;  // placement attempts per object
  std::uint64_t seed = 0;
};

inline constexpr double kGroundPenetration = 1e-5;

// Collision dominates OutOfBounds. Throws UnknownObjectId.
std::vector<InstanceStatus> validate_scene(const Scene& scene,
                                           const objectlib::ObjectLibrary& library);

// Places up to params.n objects; objects without a free placement after
// params.k attempts are skipped. Deterministic per seed.
Scene random_scene(const objectlib::ObjectLibrary& library, const RandomSceneParams& params,
                   GroundArea area);

// Pose T(xy) * Rz(yaw) * stable_pose.
geom::Pose place_pose(const objectlib::StablePose& stable, double x, double y, double yaw);

// Replaces the instance's orientation by the chosen stable pose while
// keeping its heading (yaw) and xy translation. Throws IndexOutOfRange.
Scene snap_to_stable(Scene scene, std::size_t instance, const objectlib::ObjectLibrary& library,
                     std::size_t stable_pose_index);

geom::TriMesh posed_mesh(const objectlib::ObjectType& object, const geom::Pose& pose);

}  // namespace tabletop::scene
