#pragma once

#include <vector>

#include "tabletop/geom/collision.hpp"
#include "tabletop/geom/pose.hpp"

namespace tabletop::graspgen {

// Simplified parallel-jaw hand in the grasp frame: closing axis x, approach
// +z, origin midway between the pad inner faces. Pads are centred at z = 0;
// finger stems run back from the pads to the palm, which sits behind them.
struct ParallelJawGripper {
  double max_opening = 0.08;
  double pad_height = 0.018;     // along z
  double pad_width = 0.022;      // along y
  double pad_thickness = 0.010;  // along x
  Eigen::Vector3d palm_size{0.063, 0.028, 0.035};
  double palm_offset = 0.0625;  // palm centre at z = -palm_offset
  // Stems sit this far behind the pad inner faces.
  double stem_recess = 0.004;
  // Slab next to each pad inner face ignored when testing against the target.
  double contact_allowance = 0.0035;

  // Throws InvalidArgument when a dimension is not positive or the palm
  // overlaps the pads.
  void validate() const;
};

enum class GripperPart { LeftPad, RightPad, LeftStem, RightStem, Palm };

struct GripperBox {
  GripperPart part;
  geom::OrientedBox box;  // in the grasp frame
};

// Boxes of the hand opened to `width`. With `exempt_contact`, each pad loses
// the contact_allowance slab at its inner face.
std::vector<GripperBox> gripper_boxes(const ParallelJawGripper& gripper, double width,
                                      bool exempt_contact);

// Pad inner face for finger sign s (-1 left, +1 right) as an oriented box of
// zero thickness, in the grasp frame.
geom::OrientedBox pad_face(const ParallelJawGripper& gripper, double width, int sign);

}  // namespace tabletop::graspgen
