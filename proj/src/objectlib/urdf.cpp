#include <sstream>

#include "tabletop/io/tree.hpp"
#include "tabletop/objectlib/library_io.hpp"

namespace tabletop::objectlib {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string make_urdf(const ObjectType& object, const std::string& visual_filename,
                      const std::string& collision_filename) {
  using io::format_number;
  const auto& mp = object.mass_properties;
  const auto& c = mp.center_of_mass;
  const auto& I = mp.inertia;
  const std::string id = xml_escape(object.identifier);
  const std::string s = format_number(object.scale);
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n"
      << "<robot name=\"" << id << "\">\n"
      << "  <!-- friction: " << format_number(object.friction) << " -->\n"
      << "  <link name=\"" << id << "\">\n"
      << "    <contact>\n"
      << "      <lateral_friction value=\"" << format_number(object.friction) << "\"/>\n"
      << "    </contact>\n"
      << "    <inertial>\n"
      << "      <origin xyz=\"" << format_number(c.x()) << " " << format_number(c.y()) << " "
      << format_number(c.z()) << "\" rpy=\"0 0 0\"/>\n"
      << "      <mass value=\"" << format_number(object.mass) << "\"/>\n"
      << "      <inertia ixx=\"" << format_number(I(0, 0)) << "\" ixy=\"" << format_number(I(0, 1))
      << "\" ixz=\"" << format_number(I(0, 2)) << "\" iyy=\"" << format_number(I(1, 1))
      << "\" iyz=\"" << format_number(I(1, 2)) << "\" izz=\"" << format_number(I(2, 2))
      << "\"/>\n"
      << "    </inertial>\n"
      << "    <visual>\n"
      << "      <geometry>\n"
      << "        <mesh filename=\"" << xml_escape(visual_filename) << "\" scale=\"" << s << " "
      << s << " " << s << "\"/>\n"
      << "      </geometry>\n"
      << "    </visual>\n"
      << "    <collision>\n"
      << "      <geometry>\n"
      << "        <mesh filename=\"" << xml_escape(collision_filename) << "\"/>\n"
      << "      </geometry>\n"
      << "    </collision>\n"
      << "  </link>\n"
      << "</robot>\n";
  return out.str();
}

}  // namespace tabletop::objectlib
