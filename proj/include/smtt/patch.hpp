#pragma once

#include <Eigen/Dense>

#include "smtt/image.hpp"

namespace smtt {

// Center-parameterized box in continuous pixel coordinates.
struct TargetBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 1.0;
  double h = 1.0;

  double left() const { return cx - 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double right() const { return cx + 0.5 * w; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }

  bool valid() const;

  static TargetBox from_corner(double x, double y, double w, double h) {
    return {x + 0.5 * w, y + 0.5 * h, w, h};
  }

  friend bool operator==(const TargetBox&, const TargetBox&) = default;
};

// Whole box lies within [0, width] x [0, height].
bool box_inside(const TargetBox& box, int width, int height);

// Box and frame share a region of positive area.
bool box_intersects(const TargetBox& box, int width, int height);

// Samples a patch_h x patch_w grid over the box (one bilinear sample at the
// center of each grid cell) and flattens it row-major. No normalization.
Eigen::VectorXd extract_patch(const Image& frame, const TargetBox& box, int patch_h, int patch_w);

// Scales to unit l2 norm; a zero vector stays zero.
Eigen::VectorXd normalized(Eigen::VectorXd v);

}  // namespace smtt
