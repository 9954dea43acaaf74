#include "smtt/commands.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "smtt/errors.hpp"
#include "smtt/evaluation.hpp"
#include "smtt/sequence_io.hpp"
#include "smtt/synth.hpp"

namespace smtt {

namespace fs = std::filesystem;

TrackerConfig resolve_config(const std::optional<fs::path>& config_file, const KeyValues& overrides) {
  TrackerConfig cfg;
  if (config_file) {
    apply_tracker_keys(cfg, read_key_values(*config_file));
  }
  apply_tracker_keys(cfg, overrides);
  cfg.validate();
  return cfg;
}

int cmd_track(const TrackOptions& opts, std::ostream& log) {
  try {
    const TrackerConfig cfg = resolve_config(opts.config_file, opts.overrides);
    const auto frames = list_frames(opts.sequence_dir);
    if (frames.empty()) {
      log << "error: no frames (.pgm/.png) in " << opts.sequence_dir.string() << '\n';
      return kExitError;
    }
    const fs::path truth_path = opts.sequence_dir / "groundtruth.txt";
    if (!fs::exists(truth_path)) {
      log << "error: missing " << truth_path.string() << " (its first line is the initial box)\n";
      return kExitError;
    }
    const auto truth = read_boxes(truth_path);
    if (truth.empty()) {
      log << "error: " << truth_path.string() << " has no initial box on line 1\n";
      return kExitError;
    }

    const fs::path out_dir = opts.output.has_parent_path() ? opts.output.parent_path() : fs::path(".");
    fs::create_directories(out_dir);
    write_text(out_dir / "effective_config.txt", to_text(cfg));
    if (opts.overlay_dir) {
      fs::create_directories(*opts.overlay_dir);
    }

    std::vector<TargetBox> boxes;
    boxes.reserve(frames.size());
    Image first = read_image(frames.front());
    TrackerState state = init(first, truth.front(), cfg);
    boxes.push_back(truth.front());
    std::size_t non_converged = 0;

    auto emit_overlay = [&opts](const Image& frame, const TargetBox& box, std::size_t index) {
      if (!opts.overlay_dir) {
        return;
      }
      Image canvas = frame;
      draw_box(canvas, box, 1.0);
      write_pgm(*opts.overlay_dir / frame_filename(static_cast<int>(index + 1)), canvas);
    };
    emit_overlay(first, boxes.back(), 0);

    for (std::size_t f = 1; f < frames.size(); ++f) {
      const Image frame = read_image(frames[f]);
      boxes.push_back(track_frame(state, frame));
      if (!state.last_report.converged) {
        ++non_converged;
      }
      emit_overlay(frame, boxes.back(), f);
    }
    write_text(opts.output, format_boxes(boxes));

    const std::size_t tracked = frames.size() - 1;
    log << "frames=" << frames.size() << " failed=" << state.failed_frames
        << " template_updates=" << state.template_updates << " non_converged_fraction="
        << (tracked == 0 ? 0.0 : static_cast<double>(non_converged) / static_cast<double>(tracked))
        << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& log) {
  try {
    const auto results = read_boxes(opts.result);
    const auto truth = read_boxes(opts.truth);
    if (results.size() != truth.size()) {
      const std::size_t line = std::min(results.size(), truth.size()) + 1;
      log << "error: line " << line << ": " << (results.size() < truth.size() ? "result" : "truth")
          << " file ends early (" << results.size() << " result vs " << truth.size()
          << " truth lines)\n";
      return kExitError;
    }
    const EvalReport report = evaluate(results, truth);
    const std::string text = summary_text(report);
    out << text;
    if (opts.report) {
      write_text(*opts.report, text);
    }
    if (opts.curves_csv) {
      write_text(*opts.curves_csv, curves_csv(report));
    }
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir, std::ostream& log) {
  try {
    const ScenarioSpec spec = parse_scenario(read_text(spec_path));
    const Scenario scenario = generate(spec);
    fs::create_directories(out_dir);
    for (std::size_t f = 0; f < scenario.frames.size(); ++f) {
      write_pgm(out_dir / frame_filename(static_cast<int>(f + 1)), scenario.frames[f]);
    }
    write_text(out_dir / "groundtruth.txt", format_boxes(scenario.truth));
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << spec_path.string() << ": " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace smtt
