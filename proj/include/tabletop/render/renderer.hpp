#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tabletop/objectlib/object_type.hpp"
#include "tabletop/render/camera.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::render {

inline constexpr double kDepthUnit = 1e-4;  // metres per depth.png count
inline constexpr int kBackground = -1;

struct RenderOutput {
  int width = 0;
  int height = 0;
  int ground_index = 0;             // = number of instances
  std::vector<double> depth;        // z-depth in metres, 0 = no hit
  std::vector<int> segmentation;    // instance index, ground_index, or -1
  std::vector<std::uint8_t> color;  // RGB, row-major

  std::size_t pixel(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
};

// Fixed directional light (unit vector towards the light).
Eigen::Vector3d light_direction();
std::array<std::uint8_t, 3> instance_color(int index);
std::array<std::uint8_t, 3> ground_color();

// One ray per pixel centre against every instance and the z = 0 plane;
// ties go to the lower index (instances before the ground).
// Throws InvalidArgument (bad camera), UnknownObjectId.
RenderOutput render_scene(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                          const PinholeCamera& camera);

// depth: 16-bit, kDepthUnit per count, clamped at 65535.
// seg: 8-bit, 0 = background, instance i -> i + 1, ground -> n + 1.
std::string encode_depth_png(const RenderOutput& out);
std::string encode_segmentation_png(const RenderOutput& out);
std::string encode_color_png(const RenderOutput& out);

// depth.png, seg.png, rgb.png and camera.yaml in `directory`. Throws IoError.
void write_view(const RenderOutput& out, const PinholeCamera& camera,
                const std::filesystem::path& directory);

}  // namespace tabletop::render
