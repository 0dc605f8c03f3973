#include "tabletop/geom/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace tabletop::geom {
namespace {

bool aabbs_overlap(const Eigen::AlignedBox3d& a, const Eigen::AlignedBox3d& b, double tol) {
  for (int k = 0; k < 3; ++k) {
    if (a.min()[k] > b.max()[k] + tol || b.min()[k] > a.max()[k] + tol) return false;
  }
  return true;
}

Eigen::AlignedBox3d triangle_box(const TriangleCorners& t) {
  Eigen::AlignedBox3d box(t[0]);
  box.extend(t[1]);
  box.extend(t[2]);
  return box;
}

// Edge pq crosses the interior of triangle tri (strict sign change).
bool segment_pierces_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                              const TriangleCorners& tri) {
  const Eigen::Vector3d n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
  const double dp = n.dot(p - tri[0]);
  const double dq = n.dot(q - tri[0]);
  if (!((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0))) return false;
  const Eigen::Vector3d x = p + (q - p) * (dp / (dp - dq));
  for (int k = 0; k < 3; ++k) {
    const auto& a = tri[static_cast<std::size_t>(k)];
    const auto& b = tri[static_cast<std::size_t>((k + 1) % 3)];
    if (n.dot((b - a).cross(x - a)) < 0.0) return false;
  }
  return true;
}

}  // namespace

Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p, const TriangleCorners& tri) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const auto& a = tri[0];
  const auto& b = tri[1];
  const auto& c = tri[2];
  const Eigen::Vector3d ab = b - a;
  const Eigen::Vector3d ac = c - a;
  const Eigen::Vector3d ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_triangle_distance(const Eigen::Vector3d& p, const TriangleCorners& tri) {
  return (p - closest_point_on_triangle(p, tri)).norm();
}

double segment_segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
                                const Eigen::Vector3d& p2, const Eigen::Vector3d& q2) {
  // Ericson 5.1.9.
  const Eigen::Vector3d d1 = q1 - p1;
  const Eigen::Vector3d d2 = q2 - p2;
  const Eigen::Vector3d r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= 0.0 && e <= 0.0) return r.norm();
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

bool triangles_intersect(const TriangleCorners& a, const TriangleCorners& b, double tolerance) {
  if (!aabbs_overlap(triangle_box(a), triangle_box(b), tolerance)) return false;
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto j = static_cast<std::size_t>((k + 1) % 3);
    if (segment_pierces_triangle(a[i], a[j], b)) return true;
    if (segment_pierces_triangle(b[i], b[j], a)) return true;
  }
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (point_triangle_distance(a[i], b) <= tolerance) return true;
    if (point_triangle_distance(b[i], a) <= tolerance) return true;
  }
  for (int k = 0; k < 3; ++k) {
    for (int m = 0; m < 3; ++m) {
      const auto i0 = static_cast<std::size_t>(k);
      const auto i1 = static_cast<std::size_t>((k + 1) % 3);
      const auto j0 = static_cast<std::size_t>(m);
      const auto j1 = static_cast<std::size_t>((m + 1) % 3);
      // Both argument orders so the predicate is exactly symmetric.
      const double d = std::min(segment_segment_distance(a[i0], a[i1], b[j0], b[j1]),
                                segment_segment_distance(b[j0], b[j1], a[i0], a[i1]));
      if (d <= tolerance) return true;
    }
  }
  return false;
}

std::array<Eigen::Vector3d, 8> OrientedBox::corners() const {
  std::array<Eigen::Vector3d, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d local((i & 1) ? half_extents.x() : -half_extents.x(),
                                (i & 2) ? half_extents.y() : -half_extents.y(),
                                (i & 4) ? half_extents.z() : -half_extents.z());
    out[static_cast<std::size_t>(i)] = pose * local;
  }
  return out;
}

Eigen::AlignedBox3d OrientedBox::aabb() const {
  Eigen::AlignedBox3d box;
  for (const auto& c : corners()) box.extend(c);
  return box;
}

TriMesh OrientedBox::to_mesh() const {
  TriMesh mesh;
  const auto c = corners();
  mesh.vertices.assign(c.begin(), c.end());
  // Corner bit layout: bit0 = +x, bit1 = +y, bit2 = +z.
  mesh.triangles = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}, {0, 1, 5}, {0, 5, 4},
                    {2, 6, 7}, {2, 7, 3}, {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
  return mesh;
}

bool box_intersects_triangle(const OrientedBox& box, const TriangleCorners& tri,
                             double tolerance) {
  // Akenine-Moller box/triangle SAT in the box frame.
  const Eigen::Matrix3d rt = box.pose.rotation_matrix().transpose();
  const Eigen::Vector3d h = box.half_extents + Eigen::Vector3d::Constant(tolerance);
  const Eigen::Vector3d v0 = rt * (tri[0] - box.pose.translation);
  const Eigen::Vector3d v1 = rt * (tri[1] - box.pose.translation);
  const Eigen::Vector3d v2 = rt * (tri[2] - box.pose.translation);
  for (int k = 0; k < 3; ++k) {
    const double lo = std::min({v0[k], v1[k], v2[k]});
    const double hi = std::max({v0[k], v1[k], v2[k]});
    if (lo > h[k] || hi < -h[k]) return false;
  }
  const std::array<Eigen::Vector3d, 3> edges{v1 - v0, v2 - v1, v0 - v2};
  const Eigen::Vector3d normal = edges[0].cross(edges[1]);
  {
    const double r = h.dot(normal.cwiseAbs());
    const double s = normal.dot(v0);
    if (std::abs(s) > r) return false;
  }
  for (const auto& e : edges) {
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d axis = Eigen::Vector3d::Unit(k).cross(e);
      if (axis.squaredNorm() == 0.0) continue;
      const double p0 = axis.dot(v0);
      const double p1 = axis.dot(v1);
      const double p2 = axis.dot(v2);
      const double r = h.dot(axis.cwiseAbs());
      if (std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r) return false;
    }
  }
  return true;
}

bool bvhs_intersect(const Bvh& a, const Bvh& b, double tolerance) {
  const auto& na = a.nodes();
  const auto& nb = b.nodes();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0u, 0u}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const auto& x = na[ia];
    const auto& y = nb[ib];
    if (!aabbs_overlap(x.box, y.box, tolerance)) continue;
    if (x.is_leaf() && y.is_leaf()) {
      for (auto ta : a.leaf_triangles(x)) {
        const auto ca = a.mesh().corners(ta);
        for (auto tb : b.leaf_triangles(y)) {
          if (triangles_intersect(ca, b.mesh().corners(tb), tolerance)) return true;
        }
      }
      continue;
    }
    const bool split_a =
        !x.is_leaf() && (y.is_leaf() || x.box.volume() >= y.box.volume());
    if (split_a) {
      stack.emplace_back(x.left, ib);
      stack.emplace_back(x.right, ib);
    } else {
      stack.emplace_back(ia, y.left);
      stack.emplace_back(ia, y.right);
    }
  }
  return false;
}

bool point_in_mesh(const Bvh& mesh, const Eigen::Vector3d& point) {
  // Majority vote over three skew directions guards against edge grazes.
  static const std::array<Eigen::Vector3d, 3> kDirections{
      Eigen::Vector3d(1.0, 2.0, 3.0).normalized(),
      Eigen::Vector3d(-2.0, 0.7, 1.3).normalized(),
      Eigen::Vector3d(0.31, -1.7, -0.9).normalized()};
  int inside_votes = 0;
  for (const auto& dir : kDirections) {
    const auto hits = mesh.raycast_all(point, dir, 0.0, std::numeric_limits<double>::infinity());
    int crossings = 0;
    double last = -1.0;
    for (const auto& h : hits) {
      if (crossings > 0 && std::abs(h.distance - last) < 1e-12) continue;
      ++crossings;
      last = h.distance;
    }
    if (crossings % 2 == 1) ++inside_votes;
  }
  return inside_votes >= 2;
}

bool box_intersects_mesh(const OrientedBox& box, const Bvh& mesh, double tolerance) {
  Eigen::AlignedBox3d query = box.aabb();
  query.min().array() -= tolerance;
  query.max().array() += tolerance;
  if (!aabbs_overlap(query, mesh.bounds(), 0.0)) return false;
  std::vector<std::uint32_t> candidates;
  mesh.query_box(query, candidates);
  for (auto tri : candidates) {
    if (box_intersects_triangle(box, mesh.mesh().corners(tri), tolerance)) return true;
  }
  return mesh.bounds().contains(box.pose.translation) && point_in_mesh(mesh, box.pose.translation);
}

bool meshes_intersect(const TriMesh& mesh_a, const Pose& pose_a, const TriMesh& mesh_b,
                      const Pose& pose_b, double tolerance) {
  if (mesh_a.empty() || mesh_b.empty()) return false;
  const Bvh a(mesh_a.transformed(pose_a));
  const Bvh b(mesh_b.transformed(pose_b));
  return bvhs_intersect(a, b, tolerance);
}

}  // namespace tabletop::geom
