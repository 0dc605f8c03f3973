#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tabletop/geom/bvh.hpp"
#include "tabletop/geom/mass.hpp"
#include "tabletop/geom/pose.hpp"
#include "tabletop/geom/trimesh.hpp"

namespace tabletop::objectlib {

inline constexpr double kDefaultFriction = 0.24;
// COM projection must lie this far inside the support polygon.
inline constexpr double kStabilityMargin = 0.005;
// Resting contract: posed minimum z within this band around the ground.
inline constexpr double kRestingTolerance = 1e-5;
// Poses whose body-frame down directions differ by less than this merge.
inline constexpr double kPoseMergeAngle = 2.0 * geom::kPi / 180.0;

struct StablePose {
  geom::Pose pose;
  double probability = 0.0;
  double support_area = 0.0;  // m^2
  bool validated = false;
};

struct ObjectType {
  std::string identifier;
  std::filesystem::path mesh_path;  // absolute source mesh
  geom::TriMesh mesh;               // scaled, object frame, metres
  double mass = 0.0;
  double friction = kDefaultFriction;
  double scale = 1.0;
  std::vector<StablePose> stable_poses;
  geom::MassProperties mass_properties;
  std::shared_ptr<const geom::Bvh> bvh;  // over `mesh`
};

struct ObjectSpec {
  std::string identifier;
  std::filesystem::path mesh_path;
  double mass = 0.0;
  std::optional<double> friction;
  std::optional<double> scale;
};

struct ObjectLibrary {
  std::string name;
  std::map<std::string, ObjectType> objects;
  std::filesystem::path source;  // file it was loaded from or saved to, if any

  // Throws UnknownObjectId.
  const ObjectType& at(const std::string& identifier) const;
  bool contains(const std::string& identifier) const { return objects.count(identifier) > 0; }
};

// Posed-on-ground support computation shared by pose generation and checks.
std::vector<StablePose> compute_stable_poses(const geom::TriMesh& mesh,
                                             const Eigen::Vector3d& center_of_mass);

bool validate_stable_pose(const geom::TriMesh& mesh, const Eigen::Vector3d& center_of_mass,
                          const geom::Pose& pose);
bool validate_stable_pose(const ObjectType& object, const geom::Pose& pose);

// Area of the convex hull of posed vertices within kRestingTolerance of the
// posed minimum z.
double support_area(const geom::TriMesh& mesh, const geom::Pose& pose);

// Loads, scales and analyses the mesh; computes and validates stable poses.
// Writes <id>.urdf and <id>_hull.stl beside the source mesh.
ObjectType ingest_object(const ObjectSpec& spec);

// Fills mass properties and BVH for an object whose mesh and mass are set.
void finalize_object(ObjectType& object);

}  // namespace tabletop::objectlib
