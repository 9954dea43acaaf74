#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smtt/image.hpp"
#include "smtt/patch.hpp"

namespace smtt {

struct OcclusionEvent {
  int start_frame = 0;  // inclusive
  int end_frame = 0;    // inclusive
  double fraction = 0.3;
  double intensity = 0.5;
};

struct JumpEvent {
  int frame = 0;
  double dx = 0.0;
  double dy = 0.0;
};

// Axis-aligned rectangle in continuous pixel coordinates, half-open.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(double u, double v) const { return u >= x0 && u < x1 && v >= y0 && v < y1; }
};

struct ScenarioSpec {
  int frame_w = 128;
  int frame_h = 128;
  int num_frames = 100;
  TargetBox target{32.0, 64.0, 24.0, 24.0};
  double vx = 0.0;  // px per frame
  double vy = 0.0;
  double target_intensity = 0.8;
  double background_intensity = 0.2;
  double noise_sigma = 0.0;
  std::optional<OcclusionEvent> occlusion;
  std::optional<JumpEvent> jump;
  // Reverse the velocity component that would carry the box within 1 px of
  // the frame edge. Off by default: leaving the frame is then an error.
  bool bounce = false;
  std::uint64_t seed = 0;

  // Throws ParameterError for bad values and GeometryError if any truth box
  // comes closer than 1 px to the frame border.
  void validate() const;
};

struct Scenario {
  std::vector<Image> frames;
  std::vector<TargetBox> truth;
  std::vector<std::optional<Rect>> occluders;  // per frame, when active
};

// Ground-truth boxes only (no rendering).
std::vector<TargetBox> trajectory(const ScenarioSpec& spec);

// The occluder over `truth`: the leftmost `fraction` of the box, full height.
Rect occluder_rect(const TargetBox& truth, double fraction);

// Noise-free rendering of one frame.
Image render_clean(const ScenarioSpec& spec, const TargetBox& truth, const std::optional<Rect>& occluder);

Scenario generate(const ScenarioSpec& spec);

// Flat key=value text (one pair per line, '#' comments).
ScenarioSpec parse_scenario(std::string_view text);
std::string to_text(const ScenarioSpec& spec);

}  // namespace smtt
