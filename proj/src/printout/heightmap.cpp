#include "tabletop/printout/heightmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tabletop/error.hpp"
#include "tabletop/geom/parallel.hpp"

namespace tabletop::printout {

namespace {

struct Flat {
  Eigen::Vector2d a, b, c;  // mm
  double y_min, y_max;
  std::uint8_t gray;
};

void check_dpi(double dpi) {
  if (!(dpi > 0.0) || !std::isfinite(dpi)) {
    throw Error(ErrorCode::InvalidArgument, "dpi must be positive, got " + std::to_string(dpi));
  }
}

std::vector<geom::TriMesh> posed_meshes(const scene::Scene& scene,
                                        const objectlib::ObjectLibrary& library) {
  if (scene.instances.empty()) throw Error(ErrorCode::EmptyScene, "scene has no objects");
  std::vector<geom::TriMesh> meshes;
  meshes.reserve(scene.instances.size());
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const auto& inst = scene.instances[i];
    meshes.push_back(scene::posed_mesh(library.at(inst.object_id), inst.pose));
    for (const auto& v : meshes.back().vertices) {
      if (v.x() < 0.0 || v.x() > scene.ground_area.width || v.y() < 0.0 ||
          v.y() > scene.ground_area.depth) {
        throw Error(ErrorCode::InvalidArgument,
                    "instance " + std::to_string(i) + " (" + inst.object_id +
                        ") lies outside the ground area");
      }
    }
  }
  return meshes;
}

std::vector<Flat> flatten(const std::vector<geom::TriMesh>& meshes) {
  double h_max = 0.0;
  for (const auto& m : meshes) {
    for (const auto& v : m.vertices) h_max = std::max(h_max, v.z());
  }
  std::vector<Flat> flats;
  for (const auto& m : meshes) {
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
      const auto p = m.corners(t);
      Flat f;
      f.a = p[0].head<2>() * 1000.0;
      f.b = p[1].head<2>() * 1000.0;
      f.c = p[2].head<2>() * 1000.0;
      // Walls seen edge-on cover no area.
      const double area2 = (f.b - f.a).x() * (f.c - f.a).y() - (f.b - f.a).y() * (f.c - f.a).x();
      if (std::abs(area2) < 1e-12) continue;
      f.y_min = std::min({f.a.y(), f.b.y(), f.c.y()});
      f.y_max = std::max({f.a.y(), f.b.y(), f.c.y()});
      f.gray = gray_for_height((p[0].z() + p[1].z() + p[2].z()) / 3.0, h_max);
      flats.push_back(f);
    }
  }
  std::sort(flats.begin(), flats.end(),
            [](const Flat& l, const Flat& r) { return l.y_min < r.y_min; });
  return flats;
}

// x-extent of the triangle along the horizontal line y = yc.
bool span_at(const Flat& f, double yc, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const Eigen::Vector2d* v[3] = {&f.a, &f.b, &f.c};
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d& p = *v[e];
    const Eigen::Vector2d& q = *v[(e + 1) % 3];
    if (p.y() == yc) {
      lo = std::min(lo, p.x());
      hi = std::max(hi, p.x());
    }
    if ((p.y() < yc && q.y() > yc) || (p.y() > yc && q.y() < yc)) {
      const double x = p.x() + (yc - p.y()) * (q.x() - p.x()) / (q.y() - p.y());
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return lo <= hi;
}

}  // namespace

Eigen::Vector2d HeightMapImage::pixel_centre_mm(int col, int row) const {
  return {x0_mm + (col + 0.5) * mm_per_pixel, y0_mm + (height - row - 0.5) * mm_per_pixel};
}

Eigen::Vector2d HeightMapImage::origin_pixel() const {
  return {-x0_mm / mm_per_pixel, height + y0_mm / mm_per_pixel};
}

HeightMapImage blank_raster(double dpi, double x0_mm, double y0_mm, int width_px, int height_px) {
  check_dpi(dpi);
  if (width_px <= 0 || height_px <= 0) {
    throw Error(ErrorCode::InvalidArgument, "raster size must be positive");
  }
  HeightMapImage img;
  img.width = width_px;
  img.height = height_px;
  img.dpi = dpi;
  img.mm_per_pixel = 25.4 / dpi;
  img.x0_mm = x0_mm;
  img.y0_mm = y0_mm;
  img.gray.assign(static_cast<std::size_t>(width_px) * height_px, kBackground);
  return img;
}

int pixels_for(double mm, double dpi) {
  return static_cast<int>(std::ceil(mm * dpi / 25.4 - 1e-9));
}

std::uint8_t gray_for_height(double height, double max_height) {
  if (!(max_height > 0.0)) return 0;
  const double g = std::round(255.0 * height / max_height);
  return static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
}

void rasterize_scene(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                     HeightMapImage& raster, const std::optional<Rect>& clip) {
  const auto flats = flatten(posed_meshes(scene, library));
  const double mmpp = raster.mm_per_pixel;
  parallel_for(static_cast<std::size_t>(raster.height), [&](std::size_t r) {
    const int row = static_cast<int>(r);
    const double yc = raster.y0_mm + (raster.height - row - 0.5) * mmpp;
    if (clip && (yc < clip->y0 || yc > clip->y1)) return;
    const auto end = std::upper_bound(flats.begin(), flats.end(), yc,
                                      [](double y, const Flat& f) { return y < f.y_min; });
    for (auto it = flats.begin(); it != end; ++it) {
      if (it->y_max < yc) continue;
      double lo, hi;
      if (!span_at(*it, yc, lo, hi)) continue;
      if (clip) {
        lo = std::max(lo, clip->x0);
        hi = std::min(hi, clip->x1);
      }
      const int c0 = std::max(0, static_cast<int>(std::ceil((lo - raster.x0_mm) / mmpp - 0.5)));
      const int c1 = std::min(raster.width - 1,
                              static_cast<int>(std::floor((hi - raster.x0_mm) / mmpp - 0.5)));
      for (int c = c0; c <= c1; ++c) {
        auto& px = raster.at(c, row);
        px = std::min(px, it->gray);
      }
    }
  });
}

HeightMapImage render_heightmap(const scene::Scene& scene,
                                const objectlib::ObjectLibrary& library, double dpi) {
  check_dpi(dpi);
  if (scene.instances.empty()) throw Error(ErrorCode::EmptyScene, "scene has no objects");
  auto raster = blank_raster(dpi, 0.0, 0.0, pixels_for(scene.ground_area.width * 1000.0, dpi),
                             pixels_for(scene.ground_area.depth * 1000.0, dpi));
  rasterize_scene(scene, library, raster);
  return raster;
}

}  // namespace tabletop::printout
