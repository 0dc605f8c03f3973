#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tabletop/printout/heightmap.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::printout {

// Bit matrices keyed by marker id; '1' is a white cell, '0' a black one.
struct MarkerDictionary {
  std::string name;
  int bits = 0;
  std::map<int, std::vector<std::string>> patterns;
};

// JSON object {"<id>": ["0101", ...], ...}. Throws FileNotFound,
// SchemaViolation.
MarkerDictionary load_marker_dictionary(const std::filesystem::path& path);
// Resolves `name` to <marker dir>/<name>.json.
MarkerDictionary marker_dictionary_by_name(const std::string& name);
std::filesystem::path marker_dictionary_dir();

struct PlacedMarker {
  int id = 0;
  double x_mm = 0.0;  // lower-left corner, scene frame
  double y_mm = 0.0;
  double size_mm = 0.0;
};

struct MarkerBoard {
  scene::BoardSpec spec;
  double width_mm = 0.0;
  double depth_mm = 0.0;
  int columns = 0;  // markers along the bottom and top edges
  int rows = 0;     // markers along the left and right edges (corners included)
  std::vector<PlacedMarker> markers;
  Rect object_area;
};

// floor((side - spacing) / (marker + spacing)).
int markers_per_edge(double side_mm, double marker_mm, double spacing_mm);

// Perimeter band over the ground area: corner markers shared, ids
// first_id, first_id + 1, ... counter-clockwise from the bottom-left corner.
// Throws BoardOverflow, UnknownMarkerId.
MarkerBoard make_marker_board(const scene::BoardSpec& spec, const scene::GroundArea& area,
                              const MarkerDictionary& dictionary);

// (bits + 2)^2 cells, row 0 on top; true = black.
std::vector<std::vector<bool>> marker_cells(const MarkerDictionary& dictionary, int id);

// Paints every marker whose cells intersect the raster window.
void draw_markers(const MarkerBoard& board, const MarkerDictionary& dictionary,
                  HeightMapImage& raster);

}  // namespace tabletop::printout
