#include "tabletop/render/camera.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tabletop/error.hpp"
#include "tabletop/geom/rng.hpp"

namespace tabletop::render {

void PinholeCamera::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "camera: " + what);
  };
  if (width <= 0 || height <= 0) fail("image size must be positive");
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    fail("focal lengths must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    fail("principal point must lie inside the image");
  }
  if (!pose.is_normalized(1e-6) || !pose.translation.allFinite()) fail("pose is not rigid");
}

Eigen::Vector3d PinholeCamera::ray(double u, double v) const {
  return {(u - cx) / fx, (v - cy) / fy, 1.0};
}

Eigen::Vector3d PinholeCamera::unproject(double u, double v, double depth) const {
  return pose * (ray(u, v) * depth);
}

std::optional<Eigen::Vector2d> PinholeCamera::project(const Eigen::Vector3d& point) const {
  const Eigen::Vector3d p = pose.inverse() * point;
  if (p.z() <= 0.0) return std::nullopt;
  return Eigen::Vector2d(fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy);
}

PinholeCamera make_camera(int width, int height, double horizontal_fov_deg,
                          const geom::Pose& pose) {
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0)) {
    throw Error(ErrorCode::InvalidArgument, "field of view must be in (0, 180) degrees");
  }
  PinholeCamera cam;
  cam.width = width;
  cam.height = height;
  cam.fx = cam.fy = 0.5 * width / std::tan(horizontal_fov_deg * std::numbers::pi / 360.0);
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.pose = pose;
  cam.validate();
  return cam;
}

geom::Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target) {
  const Eigen::Vector3d z = (target - eye).normalized();
  if (!z.allFinite()) throw Error(ErrorCode::InvalidArgument, "look_at: eye equals target");
  Eigen::Vector3d x = z.cross(Eigen::Vector3d::UnitZ());
  if (x.norm() < 1e-9) x = z.cross(Eigen::Vector3d::UnitY());
  x.normalize();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r << x, y, z;
  auto pose = geom::Pose::from_rotation(r);
  pose.translation = eye;
  return pose;
}

Eigen::Vector3d scene_centre(const scene::Scene& scene) {
  return {scene.ground_area.width / 2.0, scene.ground_area.depth / 2.0, 0.0};
}

std::vector<geom::Pose> sample_camera_poses(const scene::Scene& scene, int count, Range radius_m,
                                            Range elevation_deg, std::uint64_t seed) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "camera count must be >= 0");
  if (!(radius_m.min > 0.0) || !(radius_m.max >= radius_m.min)) {
    throw Error(ErrorCode::InvalidArgument, "radius range must satisfy 0 < min <= max");
  }
  if (!(elevation_deg.min >= -90.0) || !(elevation_deg.max <= 90.0) ||
      !(elevation_deg.max >= elevation_deg.min)) {
    throw Error(ErrorCode::InvalidArgument,
                "elevation range must satisfy -90 <= min <= max <= 90");
  }
  constexpr double deg = std::numbers::pi / 180.0;
  const Eigen::Vector3d centre = scene_centre(scene);
  const double r3_lo = std::pow(radius_m.min, 3), r3_hi = std::pow(radius_m.max, 3);
  const double s_lo = std::sin(elevation_deg.min * deg), s_hi = std::sin(elevation_deg.max * deg);
  Rng rng(seed);
  std::vector<geom::Pose> poses;
  poses.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Volume-uniform: cube-root radius, uniform sine of elevation.
    const double r = std::cbrt(rng.uniform(r3_lo, r3_hi));
    const double s = rng.uniform(s_lo, s_hi);
    const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    const Eigen::Vector3d eye =
        centre + r * Eigen::Vector3d(c * std::cos(azimuth), c * std::sin(azimuth), s);
    poses.push_back(look_at(eye, centre));
  }
  return poses;
}

io::Json camera_to_json(const PinholeCamera& camera) {
  io::Json j;
  j["width"] = camera.width;
  j["height"] = camera.height;
  j["fx"] = camera.fx;
  j["fy"] = camera.fy;
  j["cx"] = camera.cx;
  j["cy"] = camera.cy;
  j["pose"] = io::pose_to_json(camera.pose);
  j["depth_convention"] = "z";
  j["axes"] = "x right, y down, z forward";
  return j;
}

PinholeCamera camera_from_json(const io::Json& value, const std::string& path) {
  io::expect_object(value, path);
  io::reject_unknown_keys(value, {"width", "height", "fx", "fy", "cx", "cy", "pose",
                                  "depth_convention", "axes", "depth_unit_m", "ground_label"},
                          path);
  PinholeCamera cam;
  cam.width = static_cast<int>(io::as_integer(io::require(value, "width", path),
                                              io::join_path(path, "width")));
  cam.height = static_cast<int>(io::as_integer(io::require(value, "height", path),
                                               io::join_path(path, "height")));
  cam.fx = io::as_positive(io::require(value, "fx", path), io::join_path(path, "fx"));
  cam.fy = io::as_positive(io::require(value, "fy", path), io::join_path(path, "fy"));
  cam.cx = io::as_number(io::require(value, "cx", path), io::join_path(path, "cx"));
  cam.cy = io::as_number(io::require(value, "cy", path), io::join_path(path, "cy"));
  if (value.contains("pose")) cam.pose = io::as_pose(value["pose"], io::join_path(path, "pose"));
  try {
    cam.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, (path.empty() ? "camera" : path) + ": " + e.what());
  }
  return cam;
}

}  // namespace tabletop::render
