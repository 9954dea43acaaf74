#pragma once

#include <random>

#include <Eigen/Dense>

#include "smtt/image.hpp"
#include "smtt/patch.hpp"
#include "smtt/solver.hpp"

namespace smtt {

struct DictionaryConfig {
  int templates = 10;
  int patch_h = 16;
  int patch_w = 16;
  int update_period = 5;
  double jitter_px = 1.5;

  void validate() const;
};

// Appearance templates D_a (one unit-norm patch per column). The occlusion
// block I_d is implicit; see combined() and design_matrix().
class TemplateDictionary {
 public:
  TemplateDictionary(Eigen::MatrixXd templates, int patch_h, int patch_w, int update_period);

  const Eigen::MatrixXd& templates() const { return templates_; }
  Eigen::Index m() const { return templates_.cols(); }
  Eigen::Index d() const { return templates_.rows(); }
  int patch_h() const { return patch_h_; }
  int patch_w() const { return patch_w_; }
  int update_period() const { return update_period_; }
  int frames_since_update() const { return frames_since_update_; }

  // Counts one frame. On every update_period-th call, the template with the
  // smallest |best_coeffs| entry is replaced by best_patch; column 0 is never
  // replaced. Returns whether a column changed.
  bool maybe_update(const Eigen::VectorXd& best_patch, const Eigen::VectorXd& best_coeffs);

 private:
  Eigen::MatrixXd templates_;
  int patch_h_;
  int patch_w_;
  int update_period_;
  int frames_since_update_ = 0;
};

// Column 0 is the patch under `box`; the rest are taken at uniformly jittered
// centers. Throws GeometryError if `box` leaves the frame and
// DegenerateInputError if any patch has zero variance.
TemplateDictionary init_from_frame(const Image& frame, const TargetBox& box,
                                   const DictionaryConfig& cfg, std::mt19937_64& rng);

// Explicit [D_a | I_d].
Eigen::MatrixXd combined(const TemplateDictionary& dict);

// The same operator with the identity block applied implicitly.
DesignMatrix design_matrix(const TemplateDictionary& dict);

}  // namespace smtt
