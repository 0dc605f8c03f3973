#include "tabletop/geom/convex_hull.hpp"

#include <map>

#include "tabletop/geom/quickhull.hpp"

namespace tabletop::geom {

TriMesh convex_hull(std::span<const Eigen::Vector3d> points) {
  double scale = 1.0;
  for (const auto& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const std::vector<Eigen::Vector3d> pts(points.begin(), points.end());
  const auto facets = Quickhull<3>::compute(pts, 1e-12 * scale);

  std::map<int, std::uint32_t> remap;
  for (const auto& f : facets) {
    for (int v : f.vertices) remap.emplace(v, 0u);
  }
  TriMesh mesh;
  for (auto& [src, dst] : remap) {
    dst = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(pts[static_cast<std::size_t>(src)]);
  }
  for (const auto& f : facets) {
    Triangle t{remap.at(f.vertices[0]), remap.at(f.vertices[1]), remap.at(f.vertices[2])};
    const auto& a = mesh.vertices[t[0]];
    const auto& b = mesh.vertices[t[1]];
    const auto& c = mesh.vertices[t[2]];
    if ((b - a).cross(c - a).dot(f.normal) < 0.0) std::swap(t[1], t[2]);
    mesh.triangles.push_back(t);
  }
  return mesh;
}

}  // namespace tabletop::geom
