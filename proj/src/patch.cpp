#include "smtt/patch.hpp"

#include <cmath>

#include "smtt/errors.hpp"

namespace smtt {

bool TargetBox::valid() const {
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

bool box_inside(const TargetBox& box, int width, int height) {
  return box.left() >= 0.0 && box.top() >= 0.0 && box.right() <= width && box.bottom() <= height;
}

bool box_intersects(const TargetBox& box, int width, int height) {
  return box.right() > 0.0 && box.bottom() > 0.0 && box.left() < width && box.top() < height;
}

Eigen::VectorXd extract_patch(const Image& frame, const TargetBox& box, int patch_h, int patch_w) {
  if (patch_h <= 0 || patch_w <= 0) {
    throw ParameterError("patch size must be positive");
  }
  if (!box.valid()) {
    throw GeometryError("invalid box");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(patch_h) * patch_w);
  const double sx = box.w / patch_w;
  const double sy = box.h / patch_h;
  const double x0 = box.left();
  const double y0 = box.top();
  Eigen::Index k = 0;
  for (int r = 0; r < patch_h; ++r) {
    const double v = y0 + (r + 0.5) * sy;
    for (int c = 0; c < patch_w; ++c) {
      out(k++) = frame.sample(x0 + (c + 0.5) * sx, v);
    }
  }
  return out;
}

Eigen::VectorXd normalized(Eigen::VectorXd v) {
  const double norm = v.norm();
  if (norm > 0.0) {
    v /= norm;
  }
  return v;
}

}  // namespace smtt
