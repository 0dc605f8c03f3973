#include "tabletop/geom/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabletop/error.hpp"

namespace tabletop::geom {
namespace {

constexpr double kEdgeSlack = 1e-12;

// Slab test against a box; returns the entry parameter or nullopt.
std::optional<double> ray_box(const Eigen::AlignedBox3d& box, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& inv_dir, double t_min, double t_max) {
  double lo = t_min;
  double hi = t_max;
  for (int k = 0; k < 3; ++k) {
    if (std::isinf(inv_dir[k])) {
      if (origin[k] < box.min()[k] || origin[k] > box.max()[k]) return std::nullopt;
      continue;
    }
    double t0 = (box.min()[k] - origin[k]) * inv_dir[k];
    double t1 = (box.max()[k] - origin[k]) * inv_dir[k];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

Eigen::AlignedBox3d inflate(Eigen::AlignedBox3d box) {
  const double scale = std::max(1.0, box.max().cwiseAbs().maxCoeff());
  const Eigen::Vector3d pad = Eigen::Vector3d::Constant(1e-9 * scale);
  box.min() -= pad;
  box.max() += pad;
  return box;
}

}  // namespace

std::optional<double> intersect_triangle(const Eigen::Vector3d& origin,
                                         const Eigen::Vector3d& direction,
                                         const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                         const Eigen::Vector3d& c) {
  const Eigen::Vector3d e1 = b - a;
  const Eigen::Vector3d e2 = c - a;
  const Eigen::Vector3d p = direction.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) return std::nullopt;
  const double inv = 1.0 / det;
  const Eigen::Vector3d s = origin - a;
  const double u = s.dot(p) * inv;
  if (u < -kEdgeSlack || u > 1.0 + kEdgeSlack) return std::nullopt;
  const Eigen::Vector3d q = s.cross(e1);
  const double v = direction.dot(q) * inv;
  if (v < -kEdgeSlack || u + v > 1.0 + kEdgeSlack) return std::nullopt;
  return e2.dot(q) * inv;
}

Bvh::Bvh(TriMesh mesh) : mesh_(std::move(mesh)) {
  if (mesh_.triangles.empty()) throw Error(ErrorCode::EmptyMesh, "cannot build BVH of empty mesh");
  const auto n = static_cast<std::uint32_t>(mesh_.triangles.size());
  std::vector<Eigen::Vector3d> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto c = mesh_.corners(i);
    centroids[i] = (c[0] + c[1] + c[2]) / 3.0;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * n / kLeafSize + 2);
  build(0, n, centroids);
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end,
                         const std::vector<Eigen::Vector3d>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d centroid_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (const auto& v : mesh_.corners(order_[i])) box.extend(v);
    centroid_box.extend(centroids[order_[i]]);
  }
  nodes_[index].box = inflate(box);
  if (end - begin <= kLeafSize) {
    nodes_[index].left = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  int axis = 0;
  centroid_box.sizes().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     if (centroids[a][axis] != centroids[b][axis]) {
                       return centroids[a][axis] < centroids[b][axis];
                     }
                     return a < b;
                   });
  const std::uint32_t left = build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].left = left;
  nodes_[index].right = right;
  nodes_[index].count = 0;
  return index;
}

RayHit Bvh::make_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction, double t,
                     std::uint32_t tri) const {
  return {t, origin + t * direction, tri, mesh_.normal(tri)};
}

std::optional<RayHit> Bvh::raycast(const Eigen::Vector3d& origin,
                                   const Eigen::Vector3d& direction, double t_min,
                                   double t_max) const {
  const Eigen::Vector3d inv_dir = direction.cwiseInverse();
  double best_t = std::numeric_limits<double>::infinity();
  std::uint32_t best_tri = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> stack{0};
  stack.reserve(64);
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    const auto entry = ray_box(node.box, origin, inv_dir, t_min, std::min(t_max, best_t));
    if (!entry) continue;
    if (node.is_leaf()) {
      for (auto tri : leaf_triangles(node)) {
        const auto c = mesh_.corners(tri);
        const auto t = intersect_triangle(origin, direction, c[0], c[1], c[2]);
        if (!t || *t < t_min || *t > t_max) continue;
        if (*t < best_t || (*t == best_t && tri < best_tri)) {
          best_t = *t;
          best_tri = tri;
        }
      }
      continue;
    }
    // Visit the nearer child first.
    const auto tl = ray_box(nodes_[node.left].box, origin, inv_dir, t_min, t_max);
    const auto tr = ray_box(nodes_[node.right].box, origin, inv_dir, t_min, t_max);
    if (tl && tr) {
      if (*tl <= *tr) {
        stack.push_back(node.right);
        stack.push_back(node.left);
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    } else if (tl) {
      stack.push_back(node.left);
    } else if (tr) {
      stack.push_back(node.right);
    }
  }
  if (best_tri == std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
  return make_hit(origin, direction, best_t, best_tri);
}

std::vector<RayHit> Bvh::raycast_all(const Eigen::Vector3d& origin,
                                     const Eigen::Vector3d& direction, double t_min,
                                     double t_max) const {
  const Eigen::Vector3d inv_dir = direction.cwiseInverse();
  std::vector<RayHit> hits;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!ray_box(node.box, origin, inv_dir, t_min, t_max)) continue;
    if (node.is_leaf()) {
      for (auto tri : leaf_triangles(node)) {
        const auto c = mesh_.corners(tri);
        const auto t = intersect_triangle(origin, direction, c[0], c[1], c[2]);
        if (t && *t >= t_min && *t <= t_max) hits.push_back(make_hit(origin, direction, *t, tri));
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.triangle < b.triangle;
  });
  return hits;
}

void Bvh::query_box(const Eigen::AlignedBox3d& box, std::vector<std::uint32_t>& out) const {
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!node.box.intersects(box)) continue;
    if (node.is_leaf()) {
      for (auto tri : leaf_triangles(node)) out.push_back(tri);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
}

std::optional<RayHit> raycast_brute_force(const TriMesh& mesh, const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& direction, double t_min,
                                          double t_max) {
  std::optional<RayHit> best;
  for (std::uint32_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto c = mesh.corners(i);
    const auto t = intersect_triangle(origin, direction, c[0], c[1], c[2]);
    if (!t || *t < t_min || *t > t_max) continue;
    if (!best || *t < best->distance) {
      best = RayHit{*t, origin + *t * direction, i, mesh.normal(i)};
    }
  }
  return best;
}

}  // namespace tabletop::geom
