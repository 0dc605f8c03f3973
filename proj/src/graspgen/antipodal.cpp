#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabletop/error.hpp"
#include "tabletop/geom/parallel.hpp"
#include "tabletop/geom/rng.hpp"
#include "tabletop/geom/sampling.hpp"
#include "tabletop/graspgen/grasp.hpp"

namespace tabletop::graspgen {

using Eigen::Vector3d;

Grasp Grasp::transformed(const geom::Pose& t) const {
  Grasp g = *this;
  g.pose = t * pose;
  for (auto& c : g.contacts) {
    c.point = t * c.point;
    c.inward_normal = t.rotate(c.inward_normal);
  }
  return g;
}

void SamplingParams::validate() const {
  if (n_surface_samples < 1 || rays_per_cone < 1 || n_approach_angles < 1) {
    throw Error(ErrorCode::InvalidArgument, "sampling counts must be at least 1");
  }
}

namespace {

double angle_between(const Vector3d& a, const Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Uniform direction on the spherical cap of half-angle `half` around `axis`.
Vector3d sample_cap(const Vector3d& axis, double half, Rng& rng) {
  const double cos_t = 1.0 - rng.uniform() * (1.0 - std::cos(half));
  const double phi = rng.uniform(0.0, 2.0 * geom::kPi);
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const Vector3d u = axis.unitOrthogonal();
  const Vector3d v = axis.cross(u);
  return (cos_t * axis + sin_t * (std::cos(phi) * u + std::sin(phi) * v)).normalized();
}

}  // namespace

bool check_antipodal(const Contact& c1, const Contact& c2, double mu) {
  const Vector3d delta = c2.point - c1.point;
  if (delta.norm() == 0.0) return false;
  const Vector3d d = delta.normalized();
  const double limit = std::atan(mu);
  return angle_between(c1.inward_normal, d) <= limit && angle_between(c2.inward_normal, -d) <= limit;
}

geom::Pose grasp_frame(const Vector3d& p1, const Vector3d& p2, double angle) {
  const Vector3d x = (p2 - p1).normalized();
  const Vector3d z0 = x.unitOrthogonal();
  const Vector3d z = Eigen::AngleAxisd(angle, x) * z0;
  const Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return geom::Pose(Eigen::Quaterniond(r).normalized(), 0.5 * (p1 + p2));
}

bool collides_with_target(const ParallelJawGripper& gripper, const geom::Pose& grasp_pose,
                          double width, const geom::Bvh& object) {
  for (const auto& part : gripper_boxes(gripper, width, true)) {
    geom::OrientedBox box = part.box;
    box.pose = grasp_pose * box.pose;
    if (geom::box_intersects_mesh(box, object)) return true;
  }
  return false;
}

GraspSet sample_antipodal_grasps(const objectlib::ObjectType& object,
                                 const ParallelJawGripper& gripper, const SamplingParams& params) {
  params.validate();
  gripper.validate();
  if (!geom::is_watertight(object.mesh)) {
    throw Error(ErrorCode::NonWatertight, object.identifier + ": grasp sampling needs a closed mesh");
  }
  std::shared_ptr<const geom::Bvh> bvh = object.bvh;
  if (!bvh) bvh = std::make_shared<const geom::Bvh>(object.mesh);
  const double mu = object.friction;
  const double half_angle = std::atan(mu);
  const auto samples =
      geom::sample_surface(object.mesh, static_cast<std::size_t>(params.n_surface_samples), params.seed);

  std::vector<std::vector<Grasp>> per_sample(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    Rng rng(derive_seed(params.seed, i));
    const Contact c1{samples[i].point, -samples[i].normal};
    for (int r = 0; r < params.rays_per_cone; ++r) {
      const Vector3d dir = sample_cap(c1.inward_normal, half_angle, rng);
      const auto hits = bvh->raycast_all(c1.point, dir, kMinContactDistance,
                                         std::numeric_limits<double>::infinity());
      if (hits.empty()) continue;
      const auto& far = hits.back();
      const Contact c2{far.point, -far.normal};
      const double width = (c2.point - c1.point).norm();
      if (width < kMinContactDistance || width > gripper.max_opening) continue;
      if (!check_antipodal(c1, c2, mu)) continue;
      for (int k = 0; k < params.n_approach_angles; ++k) {
        const double angle = 2.0 * geom::kPi * k / params.n_approach_angles;
        const geom::Pose pose = grasp_frame(c1.point, c2.point, angle);
        if (collides_with_target(gripper, pose, width, *bvh)) continue;
        per_sample[i].push_back(Grasp{pose, width, {c1, c2}, object.identifier});
      }
    }
  });

  GraspSet set;
  set.object_id = object.identifier;
  set.params = params;
  for (auto& g : per_sample) {
    std::move(g.begin(), g.end(), std::back_inserter(set.grasps));
  }
  if (params.max_grasps && set.grasps.size() > *params.max_grasps) {
    std::vector<std::size_t> order(set.grasps.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(params.seed, 0xC0FFEEULL));
    for (std::size_t i = 0; i < *params.max_grasps; ++i) {
      std::swap(order[i], order[i + rng.index(order.size() - i)]);
    }
    order.resize(*params.max_grasps);
    std::sort(order.begin(), order.end());
    std::vector<Grasp> kept;
    kept.reserve(order.size());
    for (auto idx : order) kept.push_back(std::move(set.grasps[idx]));
    set.grasps = std::move(kept);
  }
  return set;
}

namespace {

bool hits_ground(const geom::OrientedBox& box) {
  for (const auto& c : box.corners()) {
    if (c.z() < geom::kContactTolerance) return true;
  }
  return false;
}

}  // namespace

SceneCollider::SceneCollider(const scene::Scene& scene, const objectlib::ObjectLibrary& library) {
  instances_.reserve(scene.instances.size());
  for (const auto& inst : scene.instances) {
    const auto& object = library.at(inst.object_id);
    Eigen::AlignedBox3d box;
    for (const auto& v : object.mesh.vertices) box.extend(inst.pose * v);
    const Eigen::Vector3d pad = Eigen::Vector3d::Constant(geom::kContactTolerance);
    instances_.push_back({&object, inst.pose.inverse(), Eigen::AlignedBox3d(box.min() - pad, box.max() + pad)});
  }
}

bool SceneCollider::gripper_collides(std::size_t target, const ParallelJawGripper& gripper,
                                     const geom::Pose& grasp_in_scene, double width,
                                     bool exempt_target) const {
  const auto full = gripper_boxes(gripper, width, false);
  const auto exempt = gripper_boxes(gripper, width, exempt_target);
  for (std::size_t part = 0; part < full.size(); ++part) {
    geom::OrientedBox world = full[part].box;
    world.pose = grasp_in_scene * world.pose;
    if (hits_ground(world)) return true;
    const Eigen::AlignedBox3d world_box = world.aabb();
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (!world_box.intersects(instances_[i].box)) continue;
      geom::OrientedBox local = (i == target ? exempt : full)[part].box;
      local.pose = instances_[i].inverse * grasp_in_scene * local.pose;
      if (geom::box_intersects_mesh(local, *instances_[i].object->bvh)) return true;
    }
  }
  return false;
}

bool SceneCollider::gripper_overlaps_coarse(std::size_t target, const ParallelJawGripper& gripper,
                                            const geom::Pose& grasp_in_scene, double width) const {
  for (const auto& part : gripper_boxes(gripper, width, false)) {
    geom::OrientedBox world = part.box;
    world.pose = grasp_in_scene * world.pose;
    if (hits_ground(world)) return true;
    const Eigen::AlignedBox3d world_box = world.aabb();
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (i != target && world_box.intersects(instances_[i].box)) return true;
    }
  }
  return false;
}

namespace {

template <class Reject>
GraspSet keep_unless(const GraspSet& grasps, const scene::Scene& scene, std::size_t target,
                     Reject reject) {
  if (target >= scene.instances.size()) {
    throw Error(ErrorCode::UnknownInstance, "instance " + std::to_string(target));
  }
  const geom::Pose instance_pose = scene.instances[target].pose;
  std::vector<char> keep(grasps.grasps.size(), 0);
  parallel_for(grasps.grasps.size(), [&](std::size_t i) {
    const Grasp& g = grasps.grasps[i];
    keep[i] = !reject(instance_pose * g.pose, g.width);
  });
  GraspSet out;
  out.object_id = grasps.object_id;
  out.params = grasps.params;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.grasps.push_back(grasps.grasps[i]);
  }
  return out;
}

}  // namespace

GraspSet coarse_collision_filter(const GraspSet& grasps, const scene::Scene& scene,
                                 const objectlib::ObjectLibrary& library, std::size_t target,
                                 const ParallelJawGripper& gripper) {
  const SceneCollider collider(scene, library);
  return keep_unless(grasps, scene, target, [&](const geom::Pose& pose, double width) {
    return collider.gripper_overlaps_coarse(target, gripper, pose, width);
  });
}

GraspSet filter_gripper_collisions(const GraspSet& grasps, const scene::Scene& scene,
                                   const objectlib::ObjectLibrary& library, std::size_t target,
                                   const ParallelJawGripper& gripper) {
  const SceneCollider collider(scene, library);
  return keep_unless(grasps, scene, target, [&](const geom::Pose& pose, double width) {
    return collider.gripper_collides(target, gripper, pose, width, true);
  });
}

}  // namespace tabletop::graspgen
