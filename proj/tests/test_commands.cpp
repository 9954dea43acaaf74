#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "scenarios.hpp"
#include "smtt/commands.hpp"
#include "smtt/evaluation.hpp"
#include "smtt/sequence_io.hpp"

using namespace smtt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("smtt_test_cmd_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

KeyValues fast_overrides() {
  return {{"particles", "40"}, {"templates", "5"}, {"patch", "12x12"}, {"seed", "7"}};
}

}  // namespace

TEST_CASE("synth writes frames and ground truth") {
  const fs::path dir = scratch_dir("synth");
  ScenarioSpec spec = scenarios::linear_motion(3);
  spec.num_frames = 10;
  write_text(dir / "spec.txt", to_text(spec));
  std::ostringstream log;
  REQUIRE(cmd_synth(dir / "spec.txt", dir / "seq", log) == kExitOk);
  CHECK(list_frames(dir / "seq").size() == 10);
  CHECK(read_boxes(dir / "seq" / "groundtruth.txt").size() == 10);
  CHECK(cmd_synth(dir / "spec.txt", dir / "seq2", log) == kExitOk);
  for (int i = 1; i <= 10; ++i) {
    CHECK(read_text(dir / "seq" / frame_filename(i)) == read_text(dir / "seq2" / frame_filename(i)));
  }
}

TEST_CASE("synth reports bad specs") {
  const fs::path dir = scratch_dir("badspec");
  write_text(dir / "spec.txt", "frame_w=-4\n");
  std::ostringstream log;
  CHECK(cmd_synth(dir / "spec.txt", dir / "seq", log) == kExitError);
  CHECK(log.str().find("error") != std::string::npos);
  CHECK(cmd_synth(dir / "absent.txt", dir / "seq", log) == kExitError);
}

TEST_CASE("track on a one-frame sequence echoes the initial box") {
  const fs::path dir = scratch_dir("one");
  ScenarioSpec spec = scenarios::linear_motion(2);
  spec.num_frames = 1;
  const Scenario sc = generate(spec);
  write_pgm(dir / frame_filename(1), sc.frames[0]);
  write_text(dir / "groundtruth.txt", "20,52,24,24\n");
  TrackOptions opts;
  opts.sequence_dir = dir;
  opts.output = dir / "out" / "result.txt";
  opts.overrides = fast_overrides();
  std::ostringstream log;
  REQUIRE(cmd_track(opts, log) == kExitOk);
  CHECK(read_text(opts.output) == "20,52,24,24\n");
  CHECK(fs::exists(dir / "out" / "effective_config.txt"));
  CHECK(read_text(dir / "out" / "effective_config.txt").find("particles=40\n") != std::string::npos);
}

TEST_CASE("track reports missing inputs") {
  const fs::path dir = scratch_dir("missing");
  TrackOptions opts;
  opts.sequence_dir = dir;
  opts.output = dir / "result.txt";
  std::ostringstream log;
  CHECK(cmd_track(opts, log) == kExitError);
  CHECK(log.str().find("no frames") != std::string::npos);

  write_pgm(dir / frame_filename(1), Image(8, 8, 0.5));
  std::ostringstream log2;
  CHECK(cmd_track(opts, log2) == kExitError);
  CHECK(log2.str().find("groundtruth.txt") != std::string::npos);

  opts.overrides = {{"lambda9", "1"}};
  std::ostringstream log3;
  CHECK(cmd_track(opts, log3) == kExitError);
  CHECK(log3.str().find("lambda9") != std::string::npos);
}

TEST_CASE("synth, track and eval pipeline") {
  const fs::path dir = scratch_dir("pipeline");
  ScenarioSpec spec = scenarios::linear_motion(9);
  spec.num_frames = 30;
  write_text(dir / "spec.txt", to_text(spec));
  std::ostringstream log;
  REQUIRE(cmd_synth(dir / "spec.txt", dir / "seq", log) == kExitOk);

  TrackOptions opts;
  opts.sequence_dir = dir / "seq";
  opts.output = dir / "result.txt";
  opts.overrides = fast_overrides();
  opts.overlay_dir = dir / "overlay";
  REQUIRE(cmd_track(opts, log) == kExitOk);
  CHECK(list_frames(dir / "overlay").size() == 30);

  const auto results = read_boxes(dir / "result.txt");
  const auto truth = read_boxes(dir / "seq" / "groundtruth.txt");
  REQUIRE(results.size() == 30);
  CHECK(precision_at(results, truth, 5.0) >= 0.95);

  EvalOptions eval;
  eval.result = dir / "result.txt";
  eval.truth = dir / "seq" / "groundtruth.txt";
  eval.curves_csv = dir / "curves.csv";
  eval.report = dir / "report.txt";
  std::ostringstream out;
  REQUIRE(cmd_eval(eval, out, log) == kExitOk);
  CHECK(out.str() == read_text(dir / "report.txt"));
  CHECK(read_text(dir / "curves.csv").find("threshold_px,precision\n") != std::string::npos);
}

TEST_CASE("eval rejects mismatched files") {
  const fs::path dir = scratch_dir("eval");
  write_text(dir / "r.txt", "1,1,4,4\n2,2,4,4\n");
  write_text(dir / "t.txt", "1,1,4,4\n2,2,4,4\n3,3,4,4\n");
  EvalOptions eval;
  eval.result = dir / "r.txt";
  eval.truth = dir / "t.txt";
  std::ostringstream out;
  std::ostringstream log;
  CHECK(cmd_eval(eval, out, log) == kExitError);
  CHECK(log.str().find("line 3") != std::string::npos);
  CHECK(out.str().empty());

  eval.truth = dir / "absent.txt";
  CHECK(cmd_eval(eval, out, log) == kExitError);
}

TEST_CASE("config file then overrides") {
  const fs::path dir = scratch_dir("config");
  write_text(dir / "c.txt", "lambda1=0.3\nparticles=20\n");
  const TrackerConfig cfg = resolve_config(dir / "c.txt", {{"particles", "50"}});
  CHECK(cfg.solver.lambda1 == 0.3);
  CHECK(cfg.n_particles == 50);
  CHECK_THROWS(resolve_config(std::nullopt, {{"particles", "0"}}));
}
