#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tabletop/geom/pose.hpp"
#include "tabletop/io/tree.hpp"
#include "tabletop/scene/scene.hpp"

namespace tabletop::render {

// Pinhole model with image x to the right, y down and the optical axis along
// +z of the camera frame. `pose` maps camera coordinates to the scene frame.
struct PinholeCamera {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;  // pixels
  int width = 0, height = 0;
  geom::Pose pose;

  // Throws InvalidArgument.
  void validate() const;
  // Camera-frame direction through pixel position (u, v), scaled to z = 1.
  Eigen::Vector3d ray(double u, double v) const;
  // Scene-frame point at z-depth `depth` behind pixel position (u, v).
  Eigen::Vector3d unproject(double u, double v, double depth) const;
  // Pixel position of a scene point in front of the camera.
  std::optional<Eigen::Vector2d> project(const Eigen::Vector3d& point) const;
};

// Square pixels, principal point at the image centre.
PinholeCamera make_camera(int width, int height, double horizontal_fov_deg,
                          const geom::Pose& pose = {});

// Camera at `eye` with +z towards `target` and image up as close to scene
// +z as possible (scene +y when looking straight up or down).
geom::Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target);

struct Range {
  double min = 0.0, max = 0.0;
};

// Look-at poses towards the ground-area centre, positions uniform in volume
// over the spherical sector (radius, elevation above the ground plane, any
// azimuth). Throws InvalidArgument on negative count or empty ranges.
std::vector<geom::Pose> sample_camera_poses(const scene::Scene& scene, int count, Range radius_m,
                                            Range elevation_deg, std::uint64_t seed);

Eigen::Vector3d scene_centre(const scene::Scene& scene);

io::Json camera_to_json(const PinholeCamera& camera);
PinholeCamera camera_from_json(const io::Json& value, const std::string& path = "");

}  // namespace tabletop::render
