#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "smtt/dictionary.hpp"
#include "smtt/image.hpp"
#include "smtt/patch.hpp"
#include "smtt/solver.hpp"

namespace smtt {

// Standard deviations of the Gaussian random walk: pixels for the center,
// natural-log units for the (aspect-preserving) scale.
struct MotionNoise {
  double x = 4.0;
  double y = 4.0;
  double scale = 0.01;
};

struct ParticleSet {
  std::vector<TargetBox> boxes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return static_cast<Eigen::Index>(boxes.size()); }
};

// X with one unit-norm patch per particle. Particles whose box misses the
// frame entirely get a zero column and are flagged degenerate.
struct ObservationMatrix {
  Eigen::MatrixXd x;
  std::vector<bool> degenerate;
};

// Particle 0 is `state` itself; the others perturb the center by N(0, sx^2),
// N(0, sy^2) and the size by exp(N(0, ss^2)). Weights start uniform.
ParticleSet sample(const TargetBox& state, const MotionNoise& noise, int n, std::mt19937_64& rng);

ObservationMatrix observe(const Image& frame, const ParticleSet& particles, int patch_h, int patch_w);

// weight_i proportional to exp(-alpha ||x_i - D_a z_i||^2) on the appearance
// code only; degenerate particles get zero weight. Falls back to uniform
// weights (with a warning on stderr) when nothing usable remains.
Eigen::VectorXd likelihoods(const ObservationMatrix& obs, const TemplateDictionary& dict,
                            const CoefficientMatrix& coeffs, double alpha);

// Index of the maximum-weight particle, lowest index on ties.
Eigen::Index map_index(const ParticleSet& particles);

// Box of the maximum-weight particle.
TargetBox estimate(const ParticleSet& particles);

}  // namespace smtt
