#include "tabletop/geom/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tabletop::geom {
namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

Polygon2 convex_hull_2d(std::span<const Eigen::Vector2d> points) {
  Polygon2 pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  Polygon2 hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const Polygon2& polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * twice;
}

double inside_margin(const Polygon2& polygon, const Eigen::Vector2d& p) {
  if (polygon.size() < 3) return -std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  bool inside = true;
  double outside = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Eigen::Vector2d a = polygon[i];
    const Eigen::Vector2d b = polygon[(i + 1) % polygon.size()];
    const Eigen::Vector2d e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    const double signed_dist = (e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x())) / len;
    if (signed_dist < 0) inside = false;
    margin = std::min(margin, signed_dist);
    const double t = std::clamp((p - a).dot(e) / (len * len), 0.0, 1.0);
    outside = std::min(outside, (a + t * e - p).norm());
  }
  return inside ? margin : -outside;
}

}  // namespace tabletop::geom
