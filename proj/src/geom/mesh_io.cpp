#include "tabletop/geom/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "tabletop/error.hpp"

namespace tabletop::geom {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

double parse_coord(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedMesh,
                "line " + std::to_string(line_no) + ": bad coordinate '" + token + "'");
  }
}

class VertexWelder {
 public:
  std::uint32_t add(const Eigen::Vector3d& v) {
    const auto key = std::make_tuple(v.x(), v.y(), v.z());
    auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(vertices_.size()));
    if (inserted) vertices_.push_back(v);
    return it->second;
  }
  std::vector<Eigen::Vector3d> take() { return std::move(vertices_); }

 private:
  std::map<std::tuple<double, double, double>, std::uint32_t> index_;
  std::vector<Eigen::Vector3d> vertices_;
};

TriMesh parse_ascii_stl(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  VertexWelder welder;
  TriMesh mesh;
  std::vector<std::uint32_t> facet;
  std::size_t count = 0;
  while (in >> token) {
    if (token == "vertex") {
      std::string xs, ys, zs;
      if (!(in >> xs >> ys >> zs)) throw Error(ErrorCode::MalformedMesh, "truncated STL vertex");
      const Eigen::Vector3d v(parse_coord(xs, count), parse_coord(ys, count),
                              parse_coord(zs, count));
      if (!v.allFinite()) throw Error(ErrorCode::MalformedMesh, "non-finite STL vertex");
      facet.push_back(welder.add(v));
      ++count;
    } else if (token == "endfacet") {
      if (facet.size() != 3) throw Error(ErrorCode::MalformedMesh, "STL facet without 3 vertices");
      mesh.triangles.push_back({facet[0], facet[1], facet[2]});
      facet.clear();
    }
  }
  mesh.vertices = welder.take();
  return mesh;
}

TriMesh parse_binary_stl(const std::string& bytes) {
  std::uint32_t n = 0;
  std::memcpy(&n, bytes.data() + 80, 4);
  VertexWelder welder;
  TriMesh mesh;
  mesh.triangles.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const char* rec = bytes.data() + 84 + 50 * static_cast<std::size_t>(i);
    std::array<std::uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      float xyz[3];
      std::memcpy(xyz, rec + 12 + 12 * k, 12);
      const Eigen::Vector3d v(xyz[0], xyz[1], xyz[2]);
      if (!v.allFinite()) throw Error(ErrorCode::MalformedMesh, "non-finite STL vertex");
      tri[static_cast<std::size_t>(k)] = welder.add(v);
    }
    mesh.triangles.push_back(tri);
  }
  mesh.vertices = welder.take();
  return mesh;
}

}  // namespace

TriMesh parse_obj(const std::string& text) {
  TriMesh mesh;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      std::string xs, ys, zs;
      if (!(ls >> xs >> ys >> zs)) {
        throw Error(ErrorCode::MalformedMesh, "line " + std::to_string(line_no) + ": short vertex");
      }
      mesh.vertices.emplace_back(parse_coord(xs, line_no), parse_coord(ys, line_no),
                                 parse_coord(zs, line_no));
    } else if (tag == "f") {
      std::vector<long long> idx;
      std::string item;
      while (ls >> item) {
        const auto slash = item.find('/');
        const std::string head = item.substr(0, slash);
        long long value = 0;
        try {
          std::size_t used = 0;
          value = std::stoll(head, &used);
          if (used != head.size()) throw std::invalid_argument(head);
        } catch (const std::exception&) {
          throw Error(ErrorCode::MalformedMesh,
                      "line " + std::to_string(line_no) + ": bad face index '" + item + "'");
        }
        // OBJ indices are 1-based; negatives count back from the latest vertex.
        const long long resolved =
            value < 0 ? static_cast<long long>(mesh.vertices.size()) + value : value - 1;
        if (value == 0 || resolved < 0 ||
            resolved >= static_cast<long long>(mesh.vertices.size())) {
          throw Error(ErrorCode::MalformedMesh,
                      "line " + std::to_string(line_no) + ": face index " + head +
                          " out of range for " + std::to_string(mesh.vertices.size()) +
                          " vertices");
        }
        idx.push_back(resolved);
      }
      if (idx.size() < 3) {
        throw Error(ErrorCode::MalformedMesh,
                    "line " + std::to_string(line_no) + ": face with fewer than 3 vertices");
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        mesh.triangles.push_back({static_cast<std::uint32_t>(idx[0]),
                                  static_cast<std::uint32_t>(idx[k]),
                                  static_cast<std::uint32_t>(idx[k + 1])});
      }
    }
  }
  mesh.validate();
  return mesh;
}

TriMesh parse_stl(const std::string& bytes) {
  if (bytes.size() >= 84) {
    std::uint32_t n = 0;
    std::memcpy(&n, bytes.data() + 80, 4);
    if (bytes.size() == 84 + 50 * static_cast<std::size_t>(n)) {
      auto mesh = parse_binary_stl(bytes);
      mesh.validate();
      return mesh;
    }
  }
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || bytes.compare(first, 5, "solid") != 0) {
    throw Error(ErrorCode::MalformedMesh, "neither binary nor ASCII STL");
  }
  auto mesh = parse_ascii_stl(bytes);
  mesh.validate();
  return mesh;
}

TriMesh load_mesh(const std::filesystem::path& path, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  }
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  const std::string ext = lower_extension(path);
  TriMesh mesh;
  if (ext == ".obj") {
    mesh = parse_obj(read_file(path));
  } else if (ext == ".stl") {
    mesh = parse_stl(read_file(path));
  } else {
    throw Error(ErrorCode::UnsupportedFormat, path.string());
  }
  if (scale != 1.0) mesh = mesh.scaled(scale);
  return mesh;
}

std::string to_binary_stl(const TriMesh& mesh, const std::string& header) {
  std::string out(84 + 50 * mesh.triangles.size(), '\0');
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  const auto n = static_cast<std::uint32_t>(mesh.triangles.size());
  std::memcpy(out.data() + 80, &n, 4);
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    char* rec = out.data() + 84 + 50 * i;
    const Eigen::Vector3f normal = mesh.normal(i).cast<float>();
    std::memcpy(rec, normal.data(), 12);
    const auto c = mesh.corners(i);
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3f v = c[static_cast<std::size_t>(k)].cast<float>();
      std::memcpy(rec + 12 + 12 * k, v.data(), 12);
    }
  }
  return out;
}

void write_binary_stl(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  const std::string bytes = to_binary_stl(mesh);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

}  // namespace tabletop::geom
