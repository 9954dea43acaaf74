#include "smtt/dictionary.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "smtt/errors.hpp"

namespace smtt {

void DictionaryConfig::validate() const {
  if (templates < 1) {
    throw ParameterError("template count must be at least 1");
  }
  if (patch_h < 1 || patch_w < 1) {
    throw ParameterError("patch size must be positive");
  }
  if (update_period < 1) {
    throw ParameterError("update period must be at least 1 frame");
  }
  if (!(jitter_px >= 0.0) || !std::isfinite(jitter_px)) {
    throw ParameterError("template jitter must be nonnegative");
  }
}

TemplateDictionary::TemplateDictionary(Eigen::MatrixXd templates, int patch_h, int patch_w,
                                       int update_period)
    : templates_(std::move(templates)),
      patch_h_(patch_h),
      patch_w_(patch_w),
      update_period_(update_period) {
  if (templates_.cols() < 1) {
    throw ParameterError("dictionary needs at least one template");
  }
  if (templates_.rows() != static_cast<Eigen::Index>(patch_h) * patch_w) {
    throw ShapeError("template length " + std::to_string(templates_.rows()) +
                     " does not match patch " + std::to_string(patch_h) + "x" +
                     std::to_string(patch_w));
  }
  if (update_period < 1) {
    throw ParameterError("update period must be at least 1 frame");
  }
  for (Eigen::Index j = 0; j < templates_.cols(); ++j) {
    if (std::abs(templates_.col(j).norm() - 1.0) > 1e-9) {
      throw InputError("template " + std::to_string(j) + " is not unit-norm");
    }
  }
}

bool TemplateDictionary::maybe_update(const Eigen::VectorXd& best_patch,
                                      const Eigen::VectorXd& best_coeffs) {
  if (best_patch.size() != d() || best_coeffs.size() != m()) {
    throw ShapeError("update patch or coefficient length does not match the dictionary");
  }
  if (++frames_since_update_ < update_period_) {
    return false;
  }
  frames_since_update_ = 0;
  const double norm = best_patch.norm();
  if (m() < 2 || !(norm > 0.0) || !best_patch.allFinite()) {
    return false;
  }
  Eigen::Index victim = 1;
  for (Eigen::Index j = 2; j < m(); ++j) {
    if (std::abs(best_coeffs(j)) < std::abs(best_coeffs(victim))) {
      victim = j;
    }
  }
  templates_.col(victim) = best_patch / norm;
  return true;
}

TemplateDictionary init_from_frame(const Image& frame, const TargetBox& box,
                                   const DictionaryConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (!box.valid() || !box_inside(box, frame.width(), frame.height())) {
    throw GeometryError("initial box lies outside the frame");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(cfg.patch_h) * cfg.patch_w;
  Eigen::MatrixXd templates(d, cfg.templates);
  std::uniform_real_distribution<double> jitter(-cfg.jitter_px, cfg.jitter_px);
  for (int j = 0; j < cfg.templates; ++j) {
    TargetBox at = box;
    if (j > 0 && cfg.jitter_px > 0.0) {
      at.cx += jitter(rng);
      at.cy += jitter(rng);
    }
    Eigen::VectorXd patch = extract_patch(frame, at, cfg.patch_h, cfg.patch_w);
    const double mean = patch.mean();
    if ((patch.array() - mean).square().sum() <= 1e-12 * static_cast<double>(d)) {
      throw DegenerateInputError("template patch " + std::to_string(j) + " has zero variance");
    }
    templates.col(j) = normalized(std::move(patch));
  }
  return TemplateDictionary(std::move(templates), cfg.patch_h, cfg.patch_w, cfg.update_period);
}

Eigen::MatrixXd combined(const TemplateDictionary& dict) {
  Eigen::MatrixXd out(dict.d(), dict.m() + dict.d());
  out << dict.templates(), Eigen::MatrixXd::Identity(dict.d(), dict.d());
  return out;
}

DesignMatrix design_matrix(const TemplateDictionary& dict) {
  return DesignMatrix::with_identity_block(dict.templates());
}

}  // namespace smtt
