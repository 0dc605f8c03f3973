#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tabletop/objectlib/object_type.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::printout {

inline constexpr double kDefaultDpi = 300.0;
inline constexpr std::uint8_t kBackground = 255;

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // mm
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Grayscale raster of a rectangular window of the scene's ground plane.
// Row 0 is the far edge (largest y), column 0 the smallest x, so the image
// reads like the table seen from above with the scene origin bottom-left.
struct HeightMapImage {
  int width = 0;
  int height = 0;
  double dpi = kDefaultDpi;
  double mm_per_pixel = 25.4 / kDefaultDpi;
  double x0_mm = 0.0;  // scene-frame x of the left image edge
  double y0_mm = 0.0;  // scene-frame y of the bottom image edge
  std::vector<std::uint8_t> gray;

  std::uint8_t& at(int col, int row) { return gray[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t at(int col, int row) const {
    return gray[static_cast<std::size_t>(row) * width + col];
  }
  // Scene-frame position (mm) of a pixel centre.
  Eigen::Vector2d pixel_centre_mm(int col, int row) const;
  // Continuous pixel coordinates (col, row) of the scene origin.
  Eigen::Vector2d origin_pixel() const;
};

// Blank (all background) raster covering [x0, x0 + w px) x [y0, y0 + h px).
HeightMapImage blank_raster(double dpi, double x0_mm, double y0_mm, int width_px, int height_px);

// Pixel count needed to cover `mm` at `dpi`.
int pixels_for(double mm, double dpi);

// Whole ground area. Throws EmptyScene, InvalidArgument (bad dpi, or an
// instance with vertices outside the ground area), UnknownObjectId.
HeightMapImage render_heightmap(const scene::Scene& scene,
                                const objectlib::ObjectLibrary& library,
                                double dpi = kDefaultDpi);

// Same mapping restricted to the raster's window; gray levels are still
// normalised by the whole scene's maximum height. Pixels whose centre lies
// outside `clip` are left untouched.
void rasterize_scene(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                     HeightMapImage& raster, const std::optional<Rect>& clip = std::nullopt);

// gray = round(255 h / h_max), clamped to [0, 255].
std::uint8_t gray_for_height(double height, double max_height);

}  // namespace tabletop::printout
