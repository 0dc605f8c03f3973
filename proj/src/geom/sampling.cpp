#include "tabletop/geom/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "tabletop/error.hpp"
#include "tabletop/geom/rng.hpp"

namespace tabletop::geom {

std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, std::size_t count,
                                          std::uint64_t seed) {
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    total += mesh.area(i);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error(ErrorCode::EmptyMesh, "mesh has no surface area");

  Rng rng(seed);
  std::vector<SurfaceSample> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    const auto tri = static_cast<std::uint32_t>(it - cumulative.begin());
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const auto c = mesh.corners(tri);
    const Eigen::Vector3d p = (1.0 - r1) * c[0] + r1 * (1.0 - r2) * c[1] + r1 * r2 * c[2];
    out.push_back({p, mesh.normal(tri), tri});
  }
  return out;
}

}  // namespace tabletop::geom
