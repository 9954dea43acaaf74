#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "smtt/dictionary.hpp"
#include "smtt/image.hpp"
#include "smtt/particles.hpp"
#include "smtt/solver.hpp"

namespace smtt {

enum class SolverMethod { kApg, kAlternating, kSubgradient };

struct TrackerConfig {
  SolverConfig solver;
  SolverMethod method = SolverMethod::kApg;
  int n_particles = 100;
  MotionNoise stds;
  double alpha = 20.0;
  DictionaryConfig dictionary;
  std::optional<double> sigma_override;  // graph bandwidth; median heuristic when empty
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrackerState {
  TrackerConfig config;
  TargetBox current;
  TemplateDictionary dict;
  int frame_index = 0;
  std::mt19937_64 rng;
  SolveReport last_report;
  int frame_w = 0;
  int frame_h = 0;
  int failed_frames = 0;
  int template_updates = 0;
};

// Everything the tracker computed for one frame, for inspection and tests.
struct FrameDiagnostics {
  ParticleSet particles;
  ObservationMatrix observations;
  CoefficientMatrix coefficients;
  Eigen::Index map_particle = 0;
  double objective_at_zero = 0.0;  // 1/2 ||X||_F^2
  double objective_final = 0.0;
  bool failed = false;
};

TrackerState init(const Image& frame, const TargetBox& init_box, const TrackerConfig& cfg);

// One step: sample, observe, build the particle graph, solve for the joint
// representation, weigh, take the MAP particle and update the dictionary.
// A solver failure keeps the previous box and counts the frame as failed.
TargetBox track_frame(TrackerState& state, const Image& frame, FrameDiagnostics* diagnostics = nullptr);

struct SequenceResult {
  std::vector<TargetBox> boxes;       // one per frame, boxes[0] == init box
  std::vector<SolveReport> reports;   // one per frame, reports[0] is empty
  int failed_frames = 0;
  int template_updates = 0;

  // Fraction of tracked frames (excluding frame 0) whose solve hit max_iter.
  double non_converged_fraction() const;
};

using FrameObserver = std::function<void(int frame, const FrameDiagnostics&)>;

SequenceResult track_sequence(const std::vector<Image>& frames, const TargetBox& init_box,
                              const TrackerConfig& cfg, const FrameObserver& observer = {});

}  // namespace smtt
