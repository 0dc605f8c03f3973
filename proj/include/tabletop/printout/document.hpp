#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "tabletop/printout/heightmap.hpp"
#include "tabletop/printout/marker_board.hpp"

namespace tabletop::printout {

inline constexpr double kMinPageMm = 100.0;
inline constexpr double kTileOverlapMm = 10.0;
inline constexpr double kCropMarkMm = 5.0;

struct PageSize {
  double width_mm = 210.0;
  double height_mm = 297.0;
};

std::optional<PageSize> page_preset(std::string_view name);  // A0..A5, Letter

struct Tiling {
  bool rotated = false;  // pages used in landscape
  double page_w_mm = 0.0, page_h_mm = 0.0;
  int columns = 1, rows = 1;
  double overlap_x_mm = 0.0, overlap_y_mm = 0.0;
};

// Fewest pages per axis; overlap is 10 mm where the slack allows it and
// otherwise the slack shared evenly between neighbouring pages.
Tiling plan_tiling(double board_w_mm, double board_h_mm, PageSize page);

struct Page {
  int index = 0;  // 1-based, row-major from the top-left tile
  int row = 0, column = 0;
  double offset_x_mm = 0.0;  // scene-frame x of the page's left edge
  double offset_y_mm = 0.0;  // scene-frame y of the page's bottom edge
  Rect content;              // board region on this page, scene frame
  HeightMapImage image;      // full page raster
  std::string png;

  // Scene-frame position (mm) of a page pixel centre.
  Eigen::Vector2d pixel_to_scene_mm(int col, int row) const;
};

struct PrintoutDocument {
  PageSize page_size;
  Tiling tiling;
  double dpi = kDefaultDpi;
  std::vector<Page> pages;
  std::optional<MarkerBoard> board;
  std::vector<std::string> warnings;
  std::string pdf;
};

// Throws PageTooSmall, EmptyScene, UnknownMarkerId, BoardOverflow.
PrintoutDocument compose_printout(const scene::Scene& scene,
                                  const objectlib::ObjectLibrary& library, PageSize page,
                                  double dpi = kDefaultDpi);

// printout.pdf and page_<n>.png. Throws IoError.
void write_printout(const PrintoutDocument& document, const std::filesystem::path& directory);

}  // namespace tabletop::printout
