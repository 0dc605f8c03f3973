#include "tabletop/printout/marker_board.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tabletop/error.hpp"
#include "tabletop/io/tree.hpp"

namespace tabletop::printout {

MarkerDictionary load_marker_dictionary(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  io::Json root;
  try {
    root = io::Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
  if (!root.is_object() || root.empty()) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": expected a non-empty object");
  }
  MarkerDictionary dict;
  dict.name = path.stem().string();
  for (const auto& [key, rows] : root.items()) {
    const std::string where = path.string() + ": " + key;
    int id = -1;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size() || id < 0) id = -1;
    } catch (const std::exception&) {
    }
    if (id < 0) throw Error(ErrorCode::SchemaViolation, where + " is not a marker id");
    if (!rows.is_array() || rows.empty()) {
      throw Error(ErrorCode::SchemaViolation, where + " must be a list of bit strings");
    }
    std::vector<std::string> pattern;
    for (const auto& row : rows) {
      if (!row.is_string()) throw Error(ErrorCode::SchemaViolation, where + " row is not a string");
      const auto s = row.get<std::string>();
      if (s.size() != rows.size() || s.find_first_not_of("01") != std::string::npos) {
        throw Error(ErrorCode::SchemaViolation, where + " must be a square matrix of 0/1");
      }
      pattern.push_back(s);
    }
    if (dict.bits == 0) dict.bits = static_cast<int>(pattern.size());
    if (static_cast<int>(pattern.size()) != dict.bits) {
      throw Error(ErrorCode::SchemaViolation, where + " has a different size than other markers");
    }
    dict.patterns[id] = std::move(pattern);
  }
  return dict;
}

std::filesystem::path marker_dictionary_dir() {
  if (const char* env = std::getenv("TABLETOP_MARKER_DIR")) return env;
  return TABLETOP_MARKER_DIR;
}

MarkerDictionary marker_dictionary_by_name(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos || name[0] == '.') {
    throw Error(ErrorCode::InvalidArgument, "bad dictionary name '" + name + "'");
  }
  return load_marker_dictionary(marker_dictionary_dir() / (name + ".json"));
}

int markers_per_edge(double side_mm, double marker_mm, double spacing_mm) {
  return static_cast<int>(std::floor((side_mm - spacing_mm) / (marker_mm + spacing_mm) + 1e-9));
}

MarkerBoard make_marker_board(const scene::BoardSpec& spec, const scene::GroundArea& area,
                              const MarkerDictionary& dictionary) {
  const double m = spec.marker_size_mm;
  const double s = spec.marker_spacing_mm;
  if (!(m > 0.0) || !(s >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "marker size must be positive, spacing non-negative");
  }
  MarkerBoard board;
  board.spec = spec;
  board.width_mm = area.width * 1000.0;
  board.depth_mm = area.depth * 1000.0;
  board.columns = markers_per_edge(board.width_mm, m, s);
  board.rows = markers_per_edge(board.depth_mm, m, s);
  if (board.columns < 2 || board.rows < 2) {
    throw Error(ErrorCode::BoardOverflow,
                "a perimeter of " + std::to_string(m) + " mm markers does not fit the board");
  }
  // The run along each edge is centred; the band's inner edge plus one
  // spacing bounds the object area.
  const double pitch = m + s;
  const double ox = (board.width_mm - s - board.columns * pitch) / 2.0;
  const double oy = (board.depth_mm - s - board.rows * pitch) / 2.0;
  const double inset_x = ox + 2.0 * s + m;
  const double inset_y = oy + 2.0 * s + m;
  board.object_area = {inset_x, inset_y, board.width_mm - inset_x, board.depth_mm - inset_y};
  if (!(board.object_area.x1 > board.object_area.x0) ||
      !(board.object_area.y1 > board.object_area.y0)) {
    throw Error(ErrorCode::BoardOverflow, "marker band leaves no object area");
  }

  const auto col_x = [&](int k) { return ox + s + k * pitch; };
  const auto row_y = [&](int k) { return oy + s + k * pitch; };
  const int nc = board.columns, nr = board.rows;
  std::vector<std::pair<double, double>> corners;
  for (int k = 0; k < nc; ++k) corners.emplace_back(col_x(k), row_y(0));
  for (int k = 1; k < nr; ++k) corners.emplace_back(col_x(nc - 1), row_y(k));
  for (int k = nc - 2; k >= 0; --k) corners.emplace_back(col_x(k), row_y(nr - 1));
  for (int k = nr - 2; k >= 1; --k) corners.emplace_back(col_x(0), row_y(k));

  std::vector<int> missing;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const int id = spec.first_id + static_cast<int>(i);
    if (!dictionary.patterns.contains(id)) missing.push_back(id);
    board.markers.push_back({id, corners[i].first, corners[i].second, m});
  }
  if (!missing.empty()) {
    std::string list;
    for (int id : missing) list += (list.empty() ? "" : ", ") + std::to_string(id);
    throw Error(ErrorCode::UnknownMarkerId, "dictionary '" + dictionary.name +
                                                "' has no marker for id(s) " + list);
  }
  return board;
}

std::vector<std::vector<bool>> marker_cells(const MarkerDictionary& dictionary, int id) {
  const auto it = dictionary.patterns.find(id);
  if (it == dictionary.patterns.end()) {
    throw Error(ErrorCode::UnknownMarkerId, "no marker " + std::to_string(id));
  }
  const int n = dictionary.bits + 2;
  std::vector<std::vector<bool>> cells(n, std::vector<bool>(n, true));
  for (int r = 0; r < dictionary.bits; ++r) {
    for (int c = 0; c < dictionary.bits; ++c) cells[r + 1][c + 1] = it->second[r][c] == '0';
  }
  return cells;
}

void draw_markers(const MarkerBoard& board, const MarkerDictionary& dictionary,
                  HeightMapImage& raster) {
  const double mmpp = raster.mm_per_pixel;
  // Half-open pixel-centre coverage so neighbouring cells never share a pixel.
  const auto col_range = [&](double x0, double x1) {
    return std::pair{std::max(0, static_cast<int>(std::ceil((x0 - raster.x0_mm) / mmpp - 0.5))),
                     std::min(raster.width,
                              static_cast<int>(std::ceil((x1 - raster.x0_mm) / mmpp - 0.5)))};
  };
  const auto row_range = [&](double y0, double y1) {
    // Row index grows downwards: centre y = y0_mm + (height - row - 0.5) mmpp.
    const double top = raster.y0_mm + raster.height * mmpp;
    return std::pair{std::max(0, static_cast<int>(std::floor((top - y1) / mmpp - 0.5)) + 1),
                     std::min(raster.height,
                              static_cast<int>(std::floor((top - y0) / mmpp - 0.5)) + 1)};
  };
  for (const auto& marker : board.markers) {
    const auto cells = marker_cells(dictionary, marker.id);
    const int n = static_cast<int>(cells.size());
    const double cell = marker.size_mm / n;
    for (int i = 0; i < n; ++i) {
      const double y1 = marker.y_mm + marker.size_mm - i * cell;
      const double y0 = y1 - cell;
      const auto [r0, r1] = row_range(y0, y1);
      for (int j = 0; j < n; ++j) {
        const double x0 = marker.x_mm + j * cell;
        const auto [c0, c1] = col_range(x0, x0 + cell);
        const std::uint8_t value = cells[i][j] ? 0 : 255;
        for (int r = r0; r < r1; ++r) {
          for (int c = c0; c < c1; ++c) raster.at(c, r) = value;
        }
      }
    }
  }
}

}  // namespace tabletop::printout
