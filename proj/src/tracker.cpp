#include "smtt/tracker.hpp"

#include <cmath>
#include <iostream>

#include "smtt/errors.hpp"
#include "smtt/graph.hpp"

namespace smtt {

void TrackerConfig::validate() const {
  solver.validate();
  dictionary.validate();
  if (n_particles < 1) {
    throw ParameterError("particle count must be at least 1");
  }
  if (!(stds.x >= 0.0) || !(stds.y >= 0.0) || !(stds.scale >= 0.0)) {
    throw ParameterError("motion noise standard deviations must be nonnegative");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("alpha must be positive");
  }
  if (sigma_override && !(*sigma_override > 0.0)) {
    throw ParameterError("sigma override must be positive");
  }
}

TrackerState init(const Image& frame, const TargetBox& init_box, const TrackerConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  TemplateDictionary dict = init_from_frame(frame, init_box, cfg.dictionary, rng);
  return TrackerState{cfg, init_box, std::move(dict), 0, rng, {}, frame.width(), frame.height(), 0, 0};
}

namespace {

SolveResult run_solver(SolverMethod method, const Eigen::MatrixXd& x, const DesignMatrix& a,
                       const GraphLaplacian& l, const SolverConfig& cfg) {
  switch (method) {
    case SolverMethod::kAlternating:
      return alternating_solve(x, a, l, cfg);
    case SolverMethod::kSubgradient:
      return subgradient_solve(x, a, l, cfg);
    case SolverMethod::kApg:
      break;
  }
  return apg_solve(x, a, l, cfg);
}

}  // namespace

TargetBox track_frame(TrackerState& state, const Image& frame, FrameDiagnostics* diagnostics) {
  if (frame.width() != state.frame_w || frame.height() != state.frame_h) {
    throw ShapeError("frame size differs from the sequence's first frame");
  }
  const TrackerConfig& cfg = state.config;
  const int patch_h = cfg.dictionary.patch_h;
  const int patch_w = cfg.dictionary.patch_w;
  ++state.frame_index;

  ParticleSet particles = sample(state.current, cfg.stds, cfg.n_particles, state.rng);
  ObservationMatrix obs = observe(frame, particles, patch_h, patch_w);

  const double sigma = cfg.sigma_override ? *cfg.sigma_override : median_bandwidth(obs.x);
  const GraphLaplacian lap = laplacian(build_similarity(obs.x, sigma));
  const DesignMatrix a = design_matrix(state.dict);

  SolveResult solved;
  try {
    solved = run_solver(cfg.method, obs.x, a, lap, cfg.solver);
  } catch (const NumericalError& e) {
    std::cerr << "frame " << state.frame_index << ": " << e.what() << "; keeping previous box\n";
    ++state.failed_frames;
    state.last_report = {};
    if (diagnostics != nullptr) {
      diagnostics->particles = std::move(particles);
      diagnostics->observations = std::move(obs);
      diagnostics->failed = true;
    }
    return state.current;
  }

  particles.weights = likelihoods(obs, state.dict, solved.coefficients, cfg.alpha);
  const Eigen::Index best = map_index(particles);
  state.current = particles.boxes[static_cast<std::size_t>(best)];

  if (!obs.degenerate[static_cast<std::size_t>(best)]) {
    const Eigen::VectorXd code = solved.coefficients.appearance().col(best);
    if (state.dict.maybe_update(obs.x.col(best), code)) {
      ++state.template_updates;
    }
  }

  state.last_report = solved.report;
  if (diagnostics != nullptr) {
    diagnostics->objective_at_zero = 0.5 * obs.x.squaredNorm();
    diagnostics->objective_final =
        solved.report.objective_history.empty() ? diagnostics->objective_at_zero
                                                : solved.report.objective_history.back();
    diagnostics->particles = std::move(particles);
    diagnostics->observations = std::move(obs);
    diagnostics->coefficients = std::move(solved.coefficients);
    diagnostics->map_particle = best;
    diagnostics->failed = false;
  }
  return state.current;
}

double SequenceResult::non_converged_fraction() const {
  if (reports.size() <= 1) {
    return 0.0;
  }
  std::size_t misses = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!reports[i].converged) {
      ++misses;
    }
  }
  return static_cast<double>(misses) / static_cast<double>(reports.size() - 1);
}

SequenceResult track_sequence(const std::vector<Image>& frames, const TargetBox& init_box,
                              const TrackerConfig& cfg, const FrameObserver& observer) {
  if (frames.empty()) {
    throw InputError("cannot track an empty sequence");
  }
  SequenceResult out;
  TrackerState state = init(frames.front(), init_box, cfg);
  out.boxes.reserve(frames.size());
  out.reports.reserve(frames.size());
  out.boxes.push_back(init_box);
  out.reports.emplace_back();
  FrameDiagnostics diag;
  for (std::size_t f = 1; f < frames.size(); ++f) {
    out.boxes.push_back(track_frame(state, frames[f], observer ? &diag : nullptr));
    out.reports.push_back(state.last_report);
    if (observer) {
      observer(static_cast<int>(f), diag);
    }
  }
  out.failed_frames = state.failed_frames;
  out.template_updates = state.template_updates;
  return out;
}

}  // namespace smtt
