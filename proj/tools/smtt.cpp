// Command-line front end: track, eval, synth.

#include <iostream>
#include <optional>
#include <string>
#include <type_traits>

#include <CLI11.hpp>

#include "smtt/commands.hpp"
#include "smtt/config.hpp"

namespace {

// Copies a flag into the override map under the matching config key.
template <class T>
void put(smtt::KeyValues& kv, const char* key, const std::optional<T>& value) {
  if (!value) {
    return;
  }
  if constexpr (std::is_same_v<T, std::string>) {
    kv[key] = *value;
  } else if constexpr (std::is_floating_point_v<T>) {
    kv[key] = smtt::format_number(*value);
  } else {
    kv[key] = std::to_string(*value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-regularized multi-task sparse tracker"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<long long> seed;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<int> particles;
  std::optional<int> templates;
  std::optional<std::string> patch;
  std::optional<std::string> solver;
  std::string overlay;
  std::string curves;
  std::string report;

  smtt::TrackOptions track;
  auto* track_cmd = app.add_subcommand("track", "Track a target through a frame directory");
  track_cmd->add_option("sequence", track.sequence_dir, "Directory of frames plus groundtruth.txt")->required();
  track_cmd->add_option("output", track.output, "Result file, one x,y,w,h line per frame")->required();
  track_cmd->add_option("--config", config_path, "key=value tracker configuration");
  track_cmd->add_option("--seed", seed, "Random seed");
  track_cmd->add_option("--lambda1", lambda1, "Mixed-norm sparsity weight");
  track_cmd->add_option("--lambda2", lambda2, "Graph smoothness weight");
  track_cmd->add_option("--particles", particles, "Particles per frame");
  track_cmd->add_option("--templates", templates, "Appearance templates");
  track_cmd->add_option("--patch", patch, "Patch size HxW");
  track_cmd->add_option("--solver", solver, "apg, alt or subgrad")
      ->check(CLI::IsMember({"apg", "alt", "subgrad"}));
  track_cmd->add_option("--overlay", overlay, "Write frames with the predicted box drawn");

  smtt::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a result file against ground truth");
  eval_cmd->add_option("result", eval.result, "Result file")->required();
  eval_cmd->add_option("truth", eval.truth, "Ground-truth file")->required();
  eval_cmd->add_option("--curves", curves, "CSV output for precision and success curves");
  eval_cmd->add_option("--report", report, "Also write the summary to this file");

  std::string spec_path;
  std::string synth_dir;
  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic sequence from a scenario file");
  synth_cmd->add_option("spec", spec_path, "Scenario key=value file")->required();
  synth_cmd->add_option("out_dir", synth_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? smtt::kExitOk : smtt::kExitError;
  }

  if (*track_cmd) {
    if (!config_path.empty()) {
      track.config_file = config_path;
    }
    if (!overlay.empty()) {
      track.overlay_dir = overlay;
    }
    put(track.overrides, "seed", seed);
    put(track.overrides, "lambda1", lambda1);
    put(track.overrides, "lambda2", lambda2);
    put(track.overrides, "particles", particles);
    put(track.overrides, "templates", templates);
    put(track.overrides, "patch", patch);
    put(track.overrides, "solver", solver);
    return smtt::cmd_track(track, std::cerr);
  }
  if (*eval_cmd) {
    if (!curves.empty()) {
      eval.curves_csv = curves;
    }
    if (!report.empty()) {
      eval.report = report;
    }
    return smtt::cmd_eval(eval, std::cout, std::cerr);
  }
  return smtt::cmd_synth(spec_path, synth_dir, std::cerr);
}
