#include "tabletop/geom/mass.hpp"

#include <cmath>

#include "tabletop/error.hpp"

namespace tabletop::geom {

MassProperties mass_properties(const TriMesh& mesh, double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  }
  if (!is_edge_manifold_closed(mesh)) {
    throw Error(ErrorCode::NonWatertight, "mesh has open or non-manifold edges");
  }
  // Integrate about the vertex centroid, then shift back; keeps the result
  // insensitive to where the mesh sits in space.
  Eigen::Vector3d ref = Eigen::Vector3d::Zero();
  for (const auto& v : mesh.vertices) ref += v;
  ref /= static_cast<double>(mesh.vertices.size());

  // Canonical tetrahedron integrals (Tonon 2004 / Eberly) for tets with one
  // vertex at the reference point.
  double vol6 = 0.0;
  Eigen::Vector3d first = Eigen::Vector3d::Zero();  // integral of x, y, z times 24
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero(); // integral of x_i x_j times 120
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto c = mesh.corners(t);
    const Eigen::Vector3d a = c[0] - ref;
    const Eigen::Vector3d b = c[1] - ref;
    const Eigen::Vector3d d = c[2] - ref;
    const double det = a.dot(b.cross(d));
    vol6 += det;
    first += det * (a + b + d);
    const Eigen::Vector3d s = a + b + d;
    // sum over i<=j pairs of vertices: int x_i x_j = det/120 (sum_k u_k v_k + s_u s_v)
    Eigen::Matrix3d m = a * a.transpose() + b * b.transpose() + d * d.transpose() +
                        s * s.transpose();
    second += det * m;
  }
  const double volume = vol6 / 6.0;
  if (!(volume > kWatertightVolumeTolerance)) {
    throw Error(ErrorCode::NonWatertight, "enclosed volume is not positive");
  }
  const Eigen::Vector3d com_rel = first / (24.0 * volume);
  const Eigen::Matrix3d cov = second / 120.0;  // integral of r r^T about ref
  const double density = mass / volume;
  // Shift the second moment to the COM.
  const Eigen::Matrix3d cov_com = cov - volume * com_rel * com_rel.transpose();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Identity() * cov_com.trace() - cov_com;
  inertia *= density;
  inertia = 0.5 * (inertia + inertia.transpose()).eval();

  MassProperties out;
  out.volume = volume;
  out.center_of_mass = com_rel + ref;
  out.inertia = inertia;
  return out;
}

}  // namespace tabletop::geom
