#include "smtt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "smtt/config.hpp"
#include "smtt/errors.hpp"

namespace smtt {

namespace {

constexpr double kMargin = 1.0;  // truth boxes keep this distance from the border

bool within_margin(const TargetBox& b, int w, int h) {
  return b.left() >= kMargin && b.top() >= kMargin && b.right() <= w - kMargin &&
         b.bottom() <= h - kMargin;
}

// Linear ramp of width 2 px centered on the box edge.
double edge_profile(double distance_from_center, double half_extent) {
  return std::clamp((half_extent + 1.0 - std::abs(distance_from_center)) / 2.0, 0.0, 1.0);
}

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

void ScenarioSpec::validate() const {
  if (frame_w < 3 || frame_h < 3) {
    throw ParameterError("frames must be at least 3x3 pixels");
  }
  if (num_frames < 1) {
    throw ParameterError("scenario needs at least one frame");
  }
  if (!target.valid()) {
    throw ParameterError("target box must have positive size");
  }
  if (!std::isfinite(vx) || !std::isfinite(vy)) {
    throw ParameterError("velocity must be finite");
  }
  for (double v : {target_intensity, background_intensity}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError("intensities must lie in [0, 1]");
    }
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ParameterError("noise_sigma must be nonnegative");
  }
  if (occlusion) {
    if (occlusion->end_frame < occlusion->start_frame) {
      throw ParameterError("occlusion ends before it starts");
    }
    if (!(occlusion->fraction > 0.0 && occlusion->fraction < 1.0)) {
      throw ParameterError("occlusion fraction must lie in (0, 1)");
    }
    if (!(occlusion->intensity >= 0.0 && occlusion->intensity <= 1.0)) {
      throw ParameterError("occluder intensity must lie in [0, 1]");
    }
  }
  if (bounce && (target.w > frame_w - 2 * kMargin || target.h > frame_h - 2 * kMargin)) {
    throw GeometryError("target does not fit inside the frame margin");
  }
  const auto truth = trajectory(*this);
  for (std::size_t f = 0; f < truth.size(); ++f) {
    if (!within_margin(truth[f], frame_w, frame_h)) {
      throw GeometryError("target leaves the frame at frame " + std::to_string(f));
    }
  }
}

std::vector<TargetBox> trajectory(const ScenarioSpec& spec) {
  std::vector<TargetBox> out;
  out.reserve(static_cast<std::size_t>(std::max(spec.num_frames, 0)));
  TargetBox box = spec.target;
  double vx = spec.vx;
  double vy = spec.vy;
  for (int f = 0; f < spec.num_frames; ++f) {
    if (f > 0) {
      box.cx += vx;
      box.cy += vy;
      if (spec.bounce) {
        const double lo_x = kMargin + 0.5 * box.w;
        const double hi_x = spec.frame_w - kMargin - 0.5 * box.w;
        const double lo_y = kMargin + 0.5 * box.h;
        const double hi_y = spec.frame_h - kMargin - 0.5 * box.h;
        if (box.cx < lo_x) { box.cx = 2.0 * lo_x - box.cx; vx = -vx; }
        if (box.cx > hi_x) { box.cx = 2.0 * hi_x - box.cx; vx = -vx; }
        if (box.cy < lo_y) { box.cy = 2.0 * lo_y - box.cy; vy = -vy; }
        if (box.cy > hi_y) { box.cy = 2.0 * hi_y - box.cy; vy = -vy; }
      }
    }
    if (spec.jump && spec.jump->frame == f) {
      box.cx += spec.jump->dx;
      box.cy += spec.jump->dy;
    }
    out.push_back(box);
  }
  return out;
}

Rect occluder_rect(const TargetBox& truth, double fraction) {
  return {truth.left(), truth.top(), truth.left() + fraction * truth.w, truth.bottom()};
}

Image render_clean(const ScenarioSpec& spec, const TargetBox& truth, const std::optional<Rect>& occluder) {
  Image img(spec.frame_w, spec.frame_h, spec.background_intensity);
  const double contrast = spec.target_intensity - spec.background_intensity;
  const double occluder_value = spec.occlusion ? spec.occlusion->intensity : spec.background_intensity;
  for (int y = 0; y < spec.frame_h; ++y) {
    const double py = y + 0.5;
    const double ay = edge_profile(py - truth.cy, 0.5 * truth.h);
    for (int x = 0; x < spec.frame_w; ++x) {
      const double px = x + 0.5;
      double v = spec.background_intensity + contrast * ay * edge_profile(px - truth.cx, 0.5 * truth.w);
      if (occluder) {
        // Area-weighted coverage of this pixel by the occluder.
        const double cover = overlap_1d(x, x + 1.0, occluder->x0, occluder->x1) *
                             overlap_1d(y, y + 1.0, occluder->y0, occluder->y1);
        v = (1.0 - cover) * v + cover * occluder_value;
      }
      img.at(x, y) = v;
    }
  }
  return img;
}

Scenario generate(const ScenarioSpec& spec) {
  spec.validate();
  Scenario out;
  out.truth = trajectory(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int f = 0; f < spec.num_frames; ++f) {
    std::optional<Rect> occluder;
    if (spec.occlusion && f >= spec.occlusion->start_frame && f <= spec.occlusion->end_frame) {
      occluder = occluder_rect(out.truth[static_cast<std::size_t>(f)], spec.occlusion->fraction);
    }
    Image img = render_clean(spec, out.truth[static_cast<std::size_t>(f)], occluder);
    if (spec.noise_sigma > 0.0) {
      for (double& v : img.pixels()) {
        v = std::clamp(v + spec.noise_sigma * gauss(rng), 0.0, 1.0);
      }
    }
    out.frames.push_back(std::move(img));
    out.occluders.push_back(occluder);
  }
  return out;
}

ScenarioSpec parse_scenario(std::string_view text) {
  const KeyValues kv = parse_key_values(text);
  ScenarioSpec spec;
  auto has = [&kv](std::string_view key) { return kv.find(key) != kv.end(); };
  for (const auto& [key, value] : kv) {
    static constexpr std::string_view kKnown[] = {
        "frame_w", "frame_h", "num_frames", "target_cx", "target_cy", "target_w", "target_h",
        "vx", "vy", "target_intensity", "background_intensity", "noise_sigma",
        "occlusion_start", "occlusion_end", "occlusion_fraction", "occluder_intensity",
        "jump_frame", "jump_dx", "jump_dy", "bounce", "seed"};
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw InputError("unknown scenario key '" + key + "'");
    }
  }
  if (has("frame_w")) spec.frame_w = static_cast<int>(to_integer(kv, "frame_w"));
  if (has("frame_h")) spec.frame_h = static_cast<int>(to_integer(kv, "frame_h"));
  if (has("num_frames")) spec.num_frames = static_cast<int>(to_integer(kv, "num_frames"));
  if (has("target_cx")) spec.target.cx = to_double(kv, "target_cx");
  if (has("target_cy")) spec.target.cy = to_double(kv, "target_cy");
  if (has("target_w")) spec.target.w = to_double(kv, "target_w");
  if (has("target_h")) spec.target.h = to_double(kv, "target_h");
  if (has("vx")) spec.vx = to_double(kv, "vx");
  if (has("vy")) spec.vy = to_double(kv, "vy");
  if (has("target_intensity")) spec.target_intensity = to_double(kv, "target_intensity");
  if (has("background_intensity")) spec.background_intensity = to_double(kv, "background_intensity");
  if (has("noise_sigma")) spec.noise_sigma = to_double(kv, "noise_sigma");
  if (has("occlusion_start") || has("occlusion_end") || has("occlusion_fraction")) {
    OcclusionEvent occ;
    occ.start_frame = static_cast<int>(to_integer(kv, "occlusion_start"));
    occ.end_frame = static_cast<int>(to_integer(kv, "occlusion_end"));
    occ.fraction = to_double(kv, "occlusion_fraction");
    if (has("occluder_intensity")) occ.intensity = to_double(kv, "occluder_intensity");
    spec.occlusion = occ;
  }
  if (has("jump_frame")) {
    JumpEvent jump;
    jump.frame = static_cast<int>(to_integer(kv, "jump_frame"));
    if (has("jump_dx")) jump.dx = to_double(kv, "jump_dx");
    if (has("jump_dy")) jump.dy = to_double(kv, "jump_dy");
    spec.jump = jump;
  }
  if (has("bounce")) spec.bounce = to_integer(kv, "bounce") != 0;
  if (has("seed")) spec.seed = static_cast<std::uint64_t>(to_integer(kv, "seed"));
  spec.validate();
  return spec;
}

std::string to_text(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "frame_w=" << spec.frame_w << '\n'
      << "frame_h=" << spec.frame_h << '\n'
      << "num_frames=" << spec.num_frames << '\n'
      << "target_cx=" << format_number(spec.target.cx) << '\n'
      << "target_cy=" << format_number(spec.target.cy) << '\n'
      << "target_w=" << format_number(spec.target.w) << '\n'
      << "target_h=" << format_number(spec.target.h) << '\n'
      << "vx=" << format_number(spec.vx) << '\n'
      << "vy=" << format_number(spec.vy) << '\n'
      << "target_intensity=" << format_number(spec.target_intensity) << '\n'
      << "background_intensity=" << format_number(spec.background_intensity) << '\n'
      << "noise_sigma=" << format_number(spec.noise_sigma) << '\n';
  if (spec.occlusion) {
    out << "occlusion_start=" << spec.occlusion->start_frame << '\n'
        << "occlusion_end=" << spec.occlusion->end_frame << '\n'
        << "occlusion_fraction=" << format_number(spec.occlusion->fraction) << '\n'
        << "occluder_intensity=" << format_number(spec.occlusion->intensity) << '\n';
  }
  if (spec.jump) {
    out << "jump_frame=" << spec.jump->frame << '\n'
        << "jump_dx=" << format_number(spec.jump->dx) << '\n'
        << "jump_dy=" << format_number(spec.jump->dy) << '\n';
  }
  out << "bounce=" << (spec.bounce ? 1 : 0) << '\n' << "seed=" << spec.seed << '\n';
  return out.str();
}

}  // namespace smtt
