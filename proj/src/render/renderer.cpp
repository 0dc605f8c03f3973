#include "tabletop/render/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tabletop/error.hpp"
#include "tabletop/geom/bvh.hpp"
#include "tabletop/geom/parallel.hpp"
#include "tabletop/io/png.hpp"

namespace tabletop::render {

namespace {

struct Placed {
  const geom::Bvh* bvh;
  geom::Pose to_object;
  Eigen::Matrix3d rotation;  // object -> scene
};

std::uint8_t shade(std::uint8_t base, double lambert) {
  return static_cast<std::uint8_t>(std::lround(base * lambert));
}

}  // namespace

Eigen::Vector3d light_direction() { return Eigen::Vector3d(0.3, -0.4, 1.0).normalized(); }

std::array<std::uint8_t, 3> instance_color(int index) {
  static constexpr std::array<std::array<std::uint8_t, 3>, 10> palette{{
      {31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40}, {148, 103, 189},
      {140, 86, 75}, {227, 119, 194}, {188, 189, 34}, {23, 190, 207}, {250, 250, 110},
  }};
  return palette[static_cast<std::size_t>(index) % palette.size()];
}

std::array<std::uint8_t, 3> ground_color() { return {170, 170, 170}; }

RenderOutput render_scene(const scene::Scene& scene, const objectlib::ObjectLibrary& library,
                          const PinholeCamera& camera) {
  camera.validate();
  std::vector<Placed> placed;
  for (const auto& inst : scene.instances) {
    const auto& object = library.at(inst.object_id);
    if (!object.bvh) {
      throw Error(ErrorCode::InvalidArgument, "object '" + inst.object_id + "' has no BVH");
    }
    placed.push_back({object.bvh.get(), inst.pose.inverse(), inst.pose.rotation_matrix()});
  }

  RenderOutput out;
  out.width = camera.width;
  out.height = camera.height;
  out.ground_index = static_cast<int>(placed.size());
  const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
  out.depth.assign(n, 0.0);
  out.segmentation.assign(n, kBackground);
  out.color.assign(3 * n, 0);

  const Eigen::Vector3d origin = camera.pose.translation;
  const Eigen::Vector3d light = light_direction();
  parallel_for(static_cast<std::size_t>(out.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < out.width; ++u) {
      const Eigen::Vector3d cam_dir = camera.ray(u + 0.5, v + 0.5);
      const double scale = cam_dir.norm();  // ray length per unit z-depth
      const Eigen::Vector3d dir = camera.pose.rotate(cam_dir / scale);

      double best = std::numeric_limits<double>::infinity();
      int index = kBackground;
      Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
      for (std::size_t i = 0; i < placed.size(); ++i) {
        const auto& p = placed[i];
        const auto hit = p.bvh->raycast(p.to_object * origin, p.to_object.rotate(dir), 0.0, best);
        if (hit && hit->distance < best) {
          best = hit->distance;
          index = static_cast<int>(i);
          normal = p.rotation * hit->normal;
        }
      }
      if (dir.z() != 0.0) {
        const double t = -origin.z() / dir.z();
        if (t > 0.0 && t < best) {
          best = t;
          index = out.ground_index;
          normal = Eigen::Vector3d::UnitZ();
        }
      }
      if (index == kBackground) continue;

      const std::size_t px = out.pixel(u, v);
      out.depth[px] = best / scale;
      out.segmentation[px] = index;
      const auto base = index == out.ground_index ? ground_color() : instance_color(index);
      const double lambert = std::max(0.0, normal.dot(light));
      for (int c = 0; c < 3; ++c) out.color[3 * px + c] = shade(base[c], lambert);
    }
  });
  return out;
}

std::string encode_depth_png(const RenderOutput& out) {
  std::vector<std::uint16_t> counts(out.depth.size());
  std::transform(out.depth.begin(), out.depth.end(), counts.begin(), [](double d) {
    return static_cast<std::uint16_t>(std::min(65535.0, std::round(d / kDepthUnit)));
  });
  return io::encode_png_gray16(out.width, out.height, counts);
}

std::string encode_segmentation_png(const RenderOutput& out) {
  if (out.ground_index + 1 > 255) {
    throw Error(ErrorCode::InvalidArgument, "8-bit segmentation holds at most 254 instances");
  }
  std::vector<std::uint8_t> labels(out.segmentation.size());
  std::transform(out.segmentation.begin(), out.segmentation.end(), labels.begin(),
                 [](int s) { return static_cast<std::uint8_t>(s + 1); });
  return io::encode_png_gray8(out.width, out.height, labels);
}

std::string encode_color_png(const RenderOutput& out) {
  return io::encode_png_rgb8(out.width, out.height, out.color);
}

void write_view(const RenderOutput& out, const PinholeCamera& camera,
                const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string());
  io::write_file(directory / "depth.png", encode_depth_png(out));
  io::write_file(directory / "seg.png", encode_segmentation_png(out));
  io::write_file(directory / "rgb.png", encode_color_png(out));
  auto meta = camera_to_json(camera);
  meta["depth_unit_m"] = kDepthUnit;
  meta["ground_label"] = out.ground_index + 1;
  io::write_file(directory / "camera.yaml", io::emit_yaml(meta));
}

}  // namespace tabletop::render
