#include "tabletop/printout/document.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "tabletop/error.hpp"
#include "tabletop/io/png.hpp"
#include "tabletop/io/tree.hpp"
#include "tabletop/printout/pdf_writer.hpp"

namespace tabletop::printout {

namespace {

struct Axis {
  int count;
  double overlap;
};

Axis tile_axis(double board, double page) {
  const int n = std::max(1, static_cast<int>(std::ceil(board / page - 1e-9)));
  if (n == 1) return {1, 0.0};
  return {n, std::min(kTileOverlapMm, (n * page - board) / (n - 1))};
}

std::vector<std::string> clipping_warnings(const scene::Scene& scene,
                                           const objectlib::ObjectLibrary& library,
                                           const Rect& area) {
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const auto& inst = scene.instances[i];
    const auto mesh = scene::posed_mesh(library.at(inst.object_id), inst.pose);
    const bool inside = std::all_of(mesh.vertices.begin(), mesh.vertices.end(), [&](auto& v) {
      return area.contains(v.x() * 1000.0, v.y() * 1000.0);
    });
    if (!inside) {
      warnings.push_back("instance " + std::to_string(i) + " (" + inst.object_id +
                         ") reaches into the marker band; its projection is clipped");
    }
  }
  return warnings;
}

}  // namespace

std::optional<PageSize> page_preset(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "A0") return PageSize{841, 1189};
  if (upper == "A1") return PageSize{594, 841};
  if (upper == "A2") return PageSize{420, 594};
  if (upper == "A3") return PageSize{297, 420};
  if (upper == "A4") return PageSize{210, 297};
  if (upper == "A5") return PageSize{148, 210};
  if (upper == "LETTER") return PageSize{215.9, 279.4};
  return std::nullopt;
}

Tiling plan_tiling(double board_w_mm, double board_h_mm, PageSize page) {
  Tiling best;
  for (bool rotated : {false, true}) {
    const double pw = rotated ? page.height_mm : page.width_mm;
    const double ph = rotated ? page.width_mm : page.height_mm;
    const Axis x = tile_axis(board_w_mm, pw);
    const Axis y = tile_axis(board_h_mm, ph);
    if (rotated && x.count * y.count >= best.columns * best.rows) continue;
    best = {rotated, pw, ph, x.count, y.count, x.overlap, y.overlap};
  }
  return best;
}

Eigen::Vector2d Page::pixel_to_scene_mm(int col, int row) const {
  return image.pixel_centre_mm(col, row);
}

PrintoutDocument compose_printout(const scene::Scene& scene,
                                  const objectlib::ObjectLibrary& library, PageSize page,
                                  double dpi) {
  if (!(page.width_mm >= kMinPageMm) || !(page.height_mm >= kMinPageMm)) {
    throw Error(ErrorCode::PageTooSmall, "page must be at least 100 x 100 mm");
  }
  if (scene.instances.empty()) throw Error(ErrorCode::EmptyScene, "scene has no objects");

  PrintoutDocument doc;
  doc.page_size = page;
  doc.dpi = dpi;
  const double bw = scene.ground_area.width * 1000.0;
  const double bh = scene.ground_area.depth * 1000.0;
  std::optional<MarkerDictionary> dictionary;
  std::optional<Rect> clip;
  if (scene.board) {
    dictionary = marker_dictionary_by_name(scene.board->dictionary);
    doc.board = make_marker_board(*scene.board, scene.ground_area, *dictionary);
    clip = doc.board->object_area;
    doc.warnings = clipping_warnings(scene, library, *clip);
  }
  doc.tiling = plan_tiling(bw, bh, page);
  const Tiling& t = doc.tiling;

  const double k = kPointsPerMm;
  std::vector<PdfPage> pdf_pages;
  const int total = t.columns * t.rows;
  for (int row = 0; row < t.rows; ++row) {
    for (int col = 0; col < t.columns; ++col) {
      Page p;
      p.index = static_cast<int>(doc.pages.size()) + 1;
      p.row = row;
      p.column = col;
      p.offset_x_mm = col * (t.page_w_mm - t.overlap_x_mm);
      p.offset_y_mm = bh - t.page_h_mm - row * (t.page_h_mm - t.overlap_y_mm);
      p.content = {std::max(0.0, p.offset_x_mm), std::max(0.0, p.offset_y_mm),
                   std::min(bw, p.offset_x_mm + t.page_w_mm),
                   std::min(bh, p.offset_y_mm + t.page_h_mm)};

      // The raster is anchored at the page's top-left corner; any fraction
      // of a pixel beyond the page edge falls outside the media box.
      const int w_px = pixels_for(t.page_w_mm, dpi);
      const int h_px = pixels_for(t.page_h_mm, dpi);
      const double top = p.offset_y_mm + t.page_h_mm;
      p.image = blank_raster(dpi, p.offset_x_mm, top - h_px * 25.4 / dpi, w_px, h_px);
      rasterize_scene(scene, library, p.image, clip ? clip : Rect{0.0, 0.0, bw, bh});
      if (doc.board) draw_markers(*doc.board, *dictionary, p.image);
      p.png = io::encode_png_gray8(w_px, h_px, p.image.gray);

      PdfPage pp;
      pp.width_pt = t.page_w_mm * k;
      pp.height_pt = t.page_h_mm * k;
      pp.image_width = w_px;
      pp.image_height = h_px;
      pp.image = p.image.gray;
      pp.image_w_pt = w_px * 72.0 / dpi;
      pp.image_h_pt = h_px * 72.0 / dpi;
      pp.image_x_pt = 0.0;
      pp.image_y_pt = pp.height_pt - pp.image_h_pt;
      const auto to_pt = [&](double x, double y) {
        return std::pair{(x - p.offset_x_mm) * k, (y - p.offset_y_mm) * k};
      };
      const double mark = kCropMarkMm * k;
      const Rect& c = p.content;
      for (const auto& [cx, cy, sx, sy] :
           {std::array{c.x0, c.y0, 1.0, 1.0}, std::array{c.x1, c.y0, -1.0, 1.0},
            std::array{c.x1, c.y1, -1.0, -1.0}, std::array{c.x0, c.y1, 1.0, -1.0}}) {
        const auto [x, y] = to_pt(cx, cy);
        pp.lines.push_back({x, y, x + sx * mark, y});
        pp.lines.push_back({x, y, x, y + sy * mark});
      }
      pp.texts.push_back({3.0 * k, 3.0 * k, 7.0,
                          "page " + std::to_string(p.index) + " of " + std::to_string(total) +
                              " (row " + std::to_string(row + 1) + ", column " +
                              std::to_string(col + 1) + ")"});
      pdf_pages.push_back(std::move(pp));
      doc.pages.push_back(std::move(p));
    }
  }
  doc.pdf = write_pdf(pdf_pages);
  return doc;
}

void write_printout(const PrintoutDocument& document, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string());
  io::write_file(directory / "printout.pdf", document.pdf);
  for (const auto& page : document.pages) {
    io::write_file(directory / ("page_" + std::to_string(page.index) + ".png"), page.png);
  }
}

}  // namespace tabletop::printout
