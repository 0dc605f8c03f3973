#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tabletop/geom/trimesh.hpp"

namespace tabletop::geom {

struct RayHit {
  double distance = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  std::uint32_t triangle = 0;
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // outward (winding) normal
};

// Moller-Trumbore; returns the ray parameter when the ray meets the closed
// triangle (edges inclusive), regardless of facing.
std::optional<double> intersect_triangle(const Eigen::Vector3d& origin,
                                         const Eigen::Vector3d& direction,
                                         const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                         const Eigen::Vector3d& c);

// Axis-aligned bounding-box tree over the triangles of an owned mesh.
// Immutable after construction.
class Bvh {
 public:
  struct Node {
    Eigen::AlignedBox3d box;
    std::uint32_t left = 0;   // child index, or first slot in order_ for leaves
    std::uint32_t right = 0;  // child index, or 0 for leaves
    std::uint32_t count = 0;  // > 0 for leaves
    bool is_leaf() const { return count > 0; }
  };

  static constexpr std::uint32_t kLeafSize = 4;

  explicit Bvh(TriMesh mesh);

  const TriMesh& mesh() const { return mesh_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::span<const std::uint32_t> leaf_triangles(const Node& leaf) const {
    return {order_.data() + leaf.left, leaf.count};
  }
  const Eigen::AlignedBox3d& bounds() const { return nodes_.front().box; }

  // Nearest hit with t in [t_min, t_max]; ties broken by lowest triangle index.
  std::optional<RayHit> raycast(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction,
                                double t_min, double t_max) const;

  // Every hit in [t_min, t_max], sorted by (distance, triangle).
  std::vector<RayHit> raycast_all(const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& direction, double t_min,
                                  double t_max) const;

  // Indices of triangles whose (inflated) node boxes overlap `box`.
  void query_box(const Eigen::AlignedBox3d& box, std::vector<std::uint32_t>& out) const;

 private:
  std::uint32_t build(std::uint32_t begin, std::uint32_t end,
                      const std::vector<Eigen::Vector3d>& centroids);
  RayHit make_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction, double t,
                  std::uint32_t tri) const;

  TriMesh mesh_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

// Exhaustive reference used by tests and small meshes.
std::optional<RayHit> raycast_brute_force(const TriMesh& mesh, const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& direction, double t_min,
                                          double t_max);

}  // namespace tabletop::geom
