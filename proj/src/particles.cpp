#include "smtt/particles.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "smtt/errors.hpp"

namespace smtt {

ParticleSet sample(const TargetBox& state, const MotionNoise& noise, int n, std::mt19937_64& rng) {
  if (n < 1) {
    throw ParameterError("particle count must be at least 1");
  }
  if (!(noise.x >= 0.0) || !(noise.y >= 0.0) || !(noise.scale >= 0.0)) {
    throw ParameterError("motion noise standard deviations must be nonnegative");
  }
  if (!state.valid()) {
    throw GeometryError("cannot sample around an invalid box");
  }
  ParticleSet out;
  out.boxes.reserve(static_cast<std::size_t>(n));
  out.boxes.push_back(state);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 1; i < n; ++i) {
    TargetBox b = state;
    b.cx += noise.x * gauss(rng);
    b.cy += noise.y * gauss(rng);
    const double s = std::exp(noise.scale * gauss(rng));
    b.w *= s;
    b.h *= s;
    out.boxes.push_back(b);
  }
  out.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  return out;
}

ObservationMatrix observe(const Image& frame, const ParticleSet& particles, int patch_h, int patch_w) {
  const Eigen::Index d = static_cast<Eigen::Index>(patch_h) * patch_w;
  ObservationMatrix out;
  out.x.resize(d, particles.size());
  out.degenerate.assign(particles.boxes.size(), false);
  for (std::size_t i = 0; i < particles.boxes.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const TargetBox& b = particles.boxes[i];
    if (!b.valid() || !box_intersects(b, frame.width(), frame.height())) {
      out.x.col(col).setZero();
      out.degenerate[i] = true;
      continue;
    }
    out.x.col(col) = normalized(extract_patch(frame, b, patch_h, patch_w));
  }
  return out;
}

Eigen::VectorXd likelihoods(const ObservationMatrix& obs, const TemplateDictionary& dict,
                            const CoefficientMatrix& coeffs, double alpha) {
  const Eigen::Index n = obs.x.cols();
  if (!(alpha > 0.0)) {
    throw ParameterError("likelihood sharpness alpha must be positive");
  }
  if (obs.x.rows() != dict.d() || coeffs.m() != dict.m() || coeffs.cols() != n ||
      static_cast<Eigen::Index>(obs.degenerate.size()) != n) {
    throw ShapeError("observation, dictionary and coefficient shapes disagree");
  }
  const Eigen::MatrixXd residual = obs.x - dict.templates() * coeffs.appearance();
  Eigen::VectorXd energy = residual.colwise().squaredNorm().transpose() * alpha;

  double lowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!obs.degenerate[static_cast<std::size_t>(i)] && std::isfinite(energy(i))) {
      lowest = std::min(lowest, energy(i));
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (std::isfinite(lowest)) {
    // Shift by the smallest energy before exponentiating; normalization
    // cancels the common factor.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!obs.degenerate[static_cast<std::size_t>(i)] && std::isfinite(energy(i))) {
        w(i) = std::exp(lowest - energy(i));
      }
    }
  }
  const double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    std::cerr << "warning: all particle weights vanished; using uniform weights\n";
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
  return w / total;
}

Eigen::Index map_index(const ParticleSet& particles) {
  if (particles.size() == 0 || particles.weights.size() != particles.size()) {
    throw ShapeError("particle set has no weights to estimate from");
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < particles.weights.size(); ++i) {
    if (particles.weights(i) > particles.weights(best)) {
      best = i;
    }
  }
  return best;
}

TargetBox estimate(const ParticleSet& particles) {
  return particles.boxes[static_cast<std::size_t>(map_index(particles))];
}

}  // namespace smtt
