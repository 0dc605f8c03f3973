#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "tabletop/error.hpp"
#include "tabletop/geom/convex_hull.hpp"
#include "tabletop/geom/polygon.hpp"
#include "tabletop/objectlib/object_type.hpp"

namespace tabletop::objectlib {
namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct HullFace {
  Vector3d normal = Vector3d::Zero();  // outward
  double area = 0.0;
  std::vector<std::uint32_t> vertices;
};

// Merges coplanar hull triangles into polygonal faces.
std::vector<HullFace> hull_faces(const geom::TriMesh& hull) {
  const std::size_t n = hull.triangles.size();
  const double scale = std::max(hull.bounds().sizes().maxCoeff(), 1e-12);
  std::vector<Vector3d> normals(n);
  std::vector<double> offsets(n);
  for (std::size_t t = 0; t < n; ++t) {
    normals[t] = hull.normal(t);
    offsets[t] = normals[t].dot(hull.vertices[hull.triangles[t][0]]);
  }
  UnionFind groups(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (normals[i].dot(normals[j]) > 1.0 - 1e-10 &&
          std::abs(offsets[i] - offsets[j]) <= 1e-9 * scale) {
        groups.unite(i, j);
      }
    }
  }
  std::vector<HullFace> faces;
  std::vector<long> face_of(n, -1);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t root = groups.find(t);
    if (face_of[root] < 0) {
      face_of[root] = static_cast<long>(faces.size());
      faces.emplace_back();
    }
    HullFace& face = faces[face_of[root]];
    const double area = hull.area(t);
    face.normal += area * normals[t];
    face.area += area;
    for (auto v : hull.triangles[t]) face.vertices.push_back(v);
  }
  for (auto& face : faces) {
    face.normal.normalize();
    std::sort(face.vertices.begin(), face.vertices.end());
    face.vertices.erase(std::unique(face.vertices.begin(), face.vertices.end()),
                        face.vertices.end());
  }
  return faces;
}

// Margin of the COM projection inside the face polygon, measured in the plane.
double face_margin(const HullFace& face, const geom::TriMesh& hull, const Vector3d& com) {
  const Vector3d& n = face.normal;
  const Vector3d u = n.unitOrthogonal();
  const Vector3d v = n.cross(u);
  std::vector<Vector2d> pts;
  pts.reserve(face.vertices.size());
  for (auto i : face.vertices) pts.emplace_back(u.dot(hull.vertices[i]), v.dot(hull.vertices[i]));
  return geom::inside_margin(geom::convex_hull_2d(pts), Vector2d(u.dot(com), v.dot(com)));
}

geom::Pose resting_pose(const geom::TriMesh& mesh, const Vector3d& com, const Vector3d& down) {
  const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(down, -Vector3d::UnitZ());
  double min_z = std::numeric_limits<double>::infinity();
  for (const auto& p : mesh.vertices) min_z = std::min(min_z, (q * p).z());
  const Vector3d c = q * com;
  return geom::Pose(q.normalized(), Vector3d(-c.x(), -c.y(), -min_z));
}

geom::Polygon2 contact_polygon(const geom::TriMesh& mesh, const geom::Pose& pose,
                               double* min_z_out) {
  std::vector<Vector3d> posed(mesh.vertices.size());
  double min_z = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < posed.size(); ++i) {
    posed[i] = pose * mesh.vertices[i];
    min_z = std::min(min_z, posed[i].z());
  }
  if (min_z_out) *min_z_out = min_z;
  std::vector<Vector2d> contact;
  for (const auto& p : posed) {
    if (p.z() <= min_z + kRestingTolerance) contact.push_back(p.head<2>());
  }
  return geom::convex_hull_2d(contact);
}

}  // namespace

double support_area(const geom::TriMesh& mesh, const geom::Pose& pose) {
  return geom::polygon_area(contact_polygon(mesh, pose, nullptr));
}

bool validate_stable_pose(const geom::TriMesh& mesh, const Vector3d& com, const geom::Pose& pose) {
  if (mesh.vertices.empty()) return false;
  double min_z = 0.0;
  const auto polygon = contact_polygon(mesh, pose, &min_z);
  if (std::abs(min_z) > kRestingTolerance) return false;
  const Vector3d c = pose * com;
  return geom::inside_margin(polygon, c.head<2>()) >= kStabilityMargin - 1e-9;
}

bool validate_stable_pose(const ObjectType& object, const geom::Pose& pose) {
  return validate_stable_pose(object.mesh, object.mass_properties.center_of_mass, pose);
}

std::vector<StablePose> compute_stable_poses(const geom::TriMesh& mesh, const Vector3d& com) {
  if (!geom::is_watertight(mesh)) {
    throw Error(ErrorCode::NonWatertight, "stable poses need a closed mesh");
  }
  const geom::TriMesh hull = geom::convex_hull(mesh.vertices);
  const auto faces = hull_faces(hull);

  std::vector<std::size_t> qualifying;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (face_margin(faces[f], hull, com) >= kStabilityMargin) qualifying.push_back(f);
  }
  if (qualifying.empty()) throw Error(ErrorCode::NoStablePose, "no hull face supports the COM");

  const double cos_merge = std::cos(kPoseMergeAngle);
  UnionFind merged(qualifying.size());
  for (std::size_t i = 0; i < qualifying.size(); ++i) {
    for (std::size_t j = i + 1; j < qualifying.size(); ++j) {
      if (faces[qualifying[i]].normal.dot(faces[qualifying[j]].normal) > cos_merge) {
        merged.unite(i, j);
      }
    }
  }

  double total_area = 0.0;
  for (auto f : qualifying) total_area += faces[f].area;

  struct Group {
    std::size_t representative;
    double area = 0.0;
  };
  std::map<std::size_t, Group> by_root;
  for (std::size_t i = 0; i < qualifying.size(); ++i) {
    const std::size_t root = merged.find(i);
    auto [it, inserted] = by_root.try_emplace(root, Group{i, 0.0});
    Group& g = it->second;
    g.area += faces[qualifying[i]].area;
    if (faces[qualifying[i]].area > faces[qualifying[g.representative]].area) g.representative = i;
  }

  std::vector<StablePose> poses;
  for (const auto& [root, group] : by_root) {
    StablePose sp;
    sp.pose = resting_pose(mesh, com, faces[qualifying[group.representative]].normal);
    sp.probability = group.area / total_area;
    sp.support_area = support_area(mesh, sp.pose);
    sp.validated = validate_stable_pose(mesh, com, sp.pose);
    poses.push_back(sp);
  }
  std::stable_sort(poses.begin(), poses.end(), [](const StablePose& a, const StablePose& b) {
    return a.probability > b.probability;
  });
  return poses;
}

}  // namespace tabletop::objectlib
