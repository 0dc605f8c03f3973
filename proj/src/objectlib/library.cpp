#include <cmath>
#include <regex>

#include "tabletop/error.hpp"
#include "tabletop/geom/convex_hull.hpp"
#include "tabletop/geom/mesh_io.hpp"
#include "tabletop/objectlib/library_io.hpp"

namespace tabletop::objectlib {
namespace fs = std::filesystem;

const ObjectType& ObjectLibrary::at(const std::string& identifier) const {
  const auto it = objects.find(identifier);
  if (it == objects.end()) throw Error(ErrorCode::UnknownObjectId, identifier);
  return it->second;
}

void finalize_object(ObjectType& object) {
  object.mass_properties = geom::mass_properties(object.mesh, object.mass);
  object.bvh = std::make_shared<const geom::Bvh>(object.mesh);
}

namespace {

void check_identifier(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, pattern)) {
    throw Error(ErrorCode::InvalidArgument,
                "identifier must be non-empty and use letters, digits, '_', '.', '-': '" + id + "'");
  }
}

void check_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
  }
}

}  // namespace

ObjectType ingest_object(const ObjectSpec& spec) {
  check_identifier(spec.identifier);
  check_positive(spec.mass, "mass");
  const double friction = spec.friction.value_or(kDefaultFriction);
  const double scale = spec.scale.value_or(1.0);
  check_positive(friction, "friction");
  check_positive(scale, "scale");

  ObjectType object;
  object.identifier = spec.identifier;
  object.mesh_path = fs::absolute(spec.mesh_path).lexically_normal();
  object.mesh = geom::load_mesh(object.mesh_path, scale);
  object.mass = spec.mass;
  object.friction = friction;
  object.scale = scale;
  finalize_object(object);
  object.stable_poses =
      compute_stable_poses(object.mesh, object.mass_properties.center_of_mass);

  const fs::path dir = object.mesh_path.parent_path();
  const std::string hull_name = object.identifier + "_hull.stl";
  geom::write_binary_stl(geom::convex_hull(object.mesh.vertices), dir / hull_name);
  io::write_file(dir / (object.identifier + ".urdf"),
                 make_urdf(object, object.mesh_path.filename().string(), hull_name));
  return object;
}

io::Json library_to_json(const ObjectLibrary& library, const fs::path& base_dir) {
  io::Json doc = io::Json::object();
  doc["version"] = kLibraryVersion;
  doc["name"] = library.name;
  io::Json objects = io::Json::array();
  const fs::path base = fs::absolute(base_dir).lexically_normal();
  for (const auto& [id, object] : library.objects) {
    io::Json entry = io::Json::object();
    entry["identifier"] = id;
    entry["mesh"] = object.mesh_path.lexically_relative(base).generic_string();
    entry["mass"] = object.mass;
    entry["friction"] = object.friction;
    entry["scale"] = object.scale;
    io::Json poses = io::Json::array();
    for (const auto& sp : object.stable_poses) {
      io::Json p = io::Json::object();
      p["probability"] = sp.probability;
      p["pose"] = io::pose_to_json(sp.pose);
      poses.push_back(p);
    }
    entry["stable_poses"] = poses;
    objects.push_back(entry);
  }
  doc["objects"] = objects;
  return doc;
}

ObjectLibrary library_from_json(const io::Json& doc, const fs::path& base_dir) {
  using namespace io;
  reject_unknown_keys(doc, {"version", "name", "objects"}, "");
  const auto version = as_integer(require(doc, "version", ""), "version");
  if (version != kLibraryVersion) {
    throw Error(ErrorCode::SchemaViolation,
                "version: unsupported value " + std::to_string(version));
  }
  ObjectLibrary library;
  library.name = doc.contains("name") ? as_string(doc["name"], "name") : std::string();
  const Json& objects = as_array(require(doc, "objects", ""), "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = index_path("objects", i);
    const Json& entry = objects[i];
    reject_unknown_keys(entry, {"identifier", "mesh", "mass", "friction", "scale", "stable_poses"},
                        path);
    ObjectType object;
    object.identifier = as_string(require(entry, "identifier", path), join_path(path, "identifier"));
    try {
      check_identifier(object.identifier);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaViolation, join_path(path, "identifier") + ": invalid");
    }
    if (library.objects.count(object.identifier)) {
      throw Error(ErrorCode::SchemaViolation,
                  join_path(path, "identifier") + ": duplicate '" + object.identifier + "'");
    }
    const std::string mesh_rel = as_string(require(entry, "mesh", path), join_path(path, "mesh"));
    object.mass = as_positive(require(entry, "mass", path), join_path(path, "mass"));
    object.friction = entry.contains("friction")
                          ? as_positive(entry["friction"], join_path(path, "friction"))
                          : kDefaultFriction;
    object.scale =
        entry.contains("scale") ? as_positive(entry["scale"], join_path(path, "scale")) : 1.0;

    std::vector<StablePose> poses;
    bool have_poses = entry.contains("stable_poses");
    if (have_poses) {
      const std::string ppath = join_path(path, "stable_poses");
      const Json& list = as_array(entry["stable_poses"], ppath);
      double total = 0.0;
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string kpath = index_path(ppath, k);
        reject_unknown_keys(list[k], {"probability", "pose"}, kpath);
        StablePose sp;
        sp.probability = as_number(require(list[k], "probability", kpath),
                                   join_path(kpath, "probability"));
        if (!(sp.probability > 0.0 && sp.probability <= 1.0 + 1e-9)) {
          throw Error(ErrorCode::SchemaViolation,
                      join_path(kpath, "probability") + ": must lie in (0, 1]");
        }
        sp.pose = as_pose(require(list[k], "pose", kpath), join_path(kpath, "pose"));
        total += sp.probability;
        poses.push_back(sp);
      }
      if (!poses.empty() && std::abs(total - 1.0) > 1e-6) {
        throw Error(ErrorCode::SchemaViolation, ppath + ": probabilities must sum to 1");
      }
    }

    object.mesh_path = (fs::absolute(base_dir) / mesh_rel).lexically_normal();
    if (!fs::exists(object.mesh_path)) {
      throw Error(ErrorCode::MissingMeshFile,
                  join_path(path, "mesh") + ": " + object.mesh_path.string());
    }
    object.mesh = geom::load_mesh(object.mesh_path, object.scale);
    finalize_object(object);
    if (have_poses && !poses.empty()) {
      for (auto& sp : poses) {
        sp.support_area = support_area(object.mesh, sp.pose);
        sp.validated = validate_stable_pose(object, sp.pose);
      }
      object.stable_poses = std::move(poses);
    } else {
      object.stable_poses =
          compute_stable_poses(object.mesh, object.mass_properties.center_of_mass);
    }
    library.objects.emplace(object.identifier, std::move(object));
  }
  return library;
}

void save_library(const ObjectLibrary& library, const fs::path& path) {
  io::write_file(path, io::emit_yaml(library_to_json(library, fs::absolute(path).parent_path())));
}

ObjectLibrary load_library(const fs::path& path) {
  auto library = library_from_json(io::load_yaml(path), fs::absolute(path).parent_path());
  library.source = fs::absolute(path).lexically_normal();
  return library;
}

}  // namespace tabletop::objectlib
