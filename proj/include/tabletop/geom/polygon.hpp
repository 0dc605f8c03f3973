#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace tabletop::geom {

using Polygon2 = std::vector<Eigen::Vector2d>;

// Counter-clockwise convex hull (monotone chain); collinear points dropped.
Polygon2 convex_hull_2d(std::span<const Eigen::Vector2d> points);

double polygon_area(const Polygon2& polygon);

// Distance from p to the boundary of a counter-clockwise convex polygon,
// positive inside, negative outside. Polygons with fewer than 3 vertices
// return -infinity.
double inside_margin(const Polygon2& polygon, const Eigen::Vector2d& p);

}  // namespace tabletop::geom
