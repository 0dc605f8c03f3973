#include "tabletop/graspgen/gripper.hpp"

#include "tabletop/error.hpp"

namespace tabletop::graspgen {

using Eigen::Vector3d;

void ParallelJawGripper::validate() const {
  const bool positive = max_opening > 0 && pad_height > 0 && pad_width > 0 && pad_thickness > 0 &&
                        palm_size.minCoeff() > 0 && palm_offset > 0;
  if (!positive) throw Error(ErrorCode::InvalidArgument, "gripper dimensions must be positive");
  if (palm_offset - palm_size.z() / 2 < pad_height / 2) {
    throw Error(ErrorCode::InvalidArgument, "palm overlaps the finger pads");
  }
  if (stem_recess < 0 || stem_recess >= pad_thickness || contact_allowance < 0 ||
      contact_allowance >= pad_thickness) {
    throw Error(ErrorCode::InvalidArgument, "recess and allowance must be within the pad thickness");
  }
}

namespace {

geom::OrientedBox slab(double x0, double x1, double y_half, double z0, double z1) {
  return {geom::Pose::from_translation({(x0 + x1) / 2, 0.0, (z0 + z1) / 2}),
          Vector3d((x1 - x0) / 2, y_half, (z1 - z0) / 2)};
}

}  // namespace

std::vector<GripperBox> gripper_boxes(const ParallelJawGripper& g, double width,
                                      bool exempt_contact) {
  const double inner = width / 2;
  const double skip = exempt_contact ? g.contact_allowance : 0.0;
  const double pad_top = g.pad_height / 2;
  const double palm_front = -(g.palm_offset - g.palm_size.z() / 2);
  std::vector<GripperBox> boxes;
  for (int sign : {-1, 1}) {
    const double a = inner + skip, b = inner + g.pad_thickness;
    const double s0 = inner + g.stem_recess;
    const auto side = [&](double lo, double hi, double y_half, double z0, double z1) {
      return sign > 0 ? slab(lo, hi, y_half, z0, z1) : slab(-hi, -lo, y_half, z0, z1);
    };
    boxes.push_back({sign < 0 ? GripperPart::LeftPad : GripperPart::RightPad,
                     side(a, b, g.pad_width / 2, -pad_top, pad_top)});
    if (palm_front < -pad_top) {
      boxes.push_back({sign < 0 ? GripperPart::LeftStem : GripperPart::RightStem,
                       side(s0, b, g.pad_width / 2, palm_front, -pad_top)});
    }
  }
  boxes.push_back({GripperPart::Palm,
                   {geom::Pose::from_translation({0.0, 0.0, -g.palm_offset}), g.palm_size / 2}});
  return boxes;
}

geom::OrientedBox pad_face(const ParallelJawGripper& g, double width, int sign) {
  return {geom::Pose::from_translation({sign * width / 2, 0.0, 0.0}),
          Vector3d(0.0, g.pad_width / 2, g.pad_height / 2)};
}

}  // namespace tabletop::graspgen
