#include "tabletop/geom/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tabletop/error.hpp"

namespace tabletop::geom {

void TriMesh::validate() const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].allFinite()) {
      throw Error(ErrorCode::MalformedMesh,
                  "vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  const auto n = vertices.size();
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (auto idx : tri) {
      if (idx >= n) {
        throw Error(ErrorCode::MalformedMesh,
                    "triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(idx) + " of " + std::to_string(n));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::MalformedMesh,
                  "triangle " + std::to_string(t) + " repeats a vertex index");
    }
  }
}

Eigen::AlignedBox3d TriMesh::bounds() const {
  Eigen::AlignedBox3d box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

std::array<Eigen::Vector3d, 3> TriMesh::corners(std::size_t tri) const {
  const auto& t = triangles[tri];
  return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
}

Eigen::Vector3d TriMesh::normal(std::size_t tri) const {
  const auto [a, b, c] = corners(tri);
  const Eigen::Vector3d n = (b - a).cross(c - a);
  const double len = n.norm();
  return len > 0.0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::Zero();
}

double TriMesh::area(std::size_t tri) const {
  const auto [a, b, c] = corners(tri);
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriMesh::surface_area() const {
  double total = 0.0;
  for (std::size_t i = 0; i < triangles.size(); ++i) total += area(i);
  return total;
}

TriMesh TriMesh::transformed(const Pose& pose) const {
  TriMesh out;
  out.triangles = triangles;
  out.vertices.reserve(vertices.size());
  const Eigen::Matrix3d r = pose.rotation_matrix();
  for (const auto& v : vertices) out.vertices.emplace_back(r * v + pose.translation);
  return out;
}

TriMesh TriMesh::scaled(double factor) const {
  TriMesh out = *this;
  for (auto& v : out.vertices) v *= factor;
  return out;
}

bool is_edge_manifold_closed(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_count;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      auto a = t[static_cast<std::size_t>(k)];
      auto b = t[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  return std::all_of(edge_count.begin(), edge_count.end(),
                     [](const auto& e) { return e.second == 2; });
}

double signed_volume(const TriMesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  // Reference point near the mesh keeps the sum well-conditioned.
  const Eigen::Vector3d ref = mesh.vertices.front();
  double six_v = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto [a, b, c] = mesh.corners(i);
    six_v += (a - ref).dot((b - ref).cross(c - ref));
  }
  return six_v / 6.0;
}

bool is_watertight(const TriMesh& mesh) {
  return is_edge_manifold_closed(mesh) && signed_volume(mesh) > kWatertightVolumeTolerance;
}

}  // namespace tabletop::geom
