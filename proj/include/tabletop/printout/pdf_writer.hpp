#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tabletop::printout {

inline constexpr double kPointsPerMm = 72.0 / 25.4;

struct PdfLine {
  double x0, y0, x1, y1;  // points
};

struct PdfText {
  double x, y, size;  // points
  std::string text;   // printable ASCII
};

struct PdfPage {
  double width_pt = 0.0;
  double height_pt = 0.0;
  // 8-bit gray image drawn with its lower-left corner at (image_x, image_y).
  int image_width = 0;
  int image_height = 0;
  std::vector<std::uint8_t> image;
  double image_x_pt = 0.0;
  double image_y_pt = 0.0;
  double image_w_pt = 0.0;
  double image_h_pt = 0.0;
  std::vector<PdfLine> lines;
  std::vector<PdfText> texts;
};

// One Flate-compressed DeviceGray image per page, optional hairlines and
// Helvetica labels on top.
std::string write_pdf(const std::vector<PdfPage>& pages);

}  // namespace tabletop::printout
