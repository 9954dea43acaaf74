#pragma once

#include <string>
#include <vector>

#include "smtt/patch.hpp"

namespace smtt {

// Intersection over union of two boxes (continuous half-open rectangles).
double iou(const TargetBox& a, const TargetBox& b);

// Euclidean distance between box centers, in pixels.
double center_error(const TargetBox& a, const TargetBox& b);

struct EvalReport {
  std::vector<double> precision_thresholds;  // 0, 1, ..., 50 px
  std::vector<double> precision_curve;       // fraction with center error <= threshold
  std::vector<double> success_thresholds;    // 0, 0.01, ..., 1
  std::vector<double> success_curve;         // fraction with IoU >= threshold
  double precision_at_20 = 0.0;
  double success_auc = 0.0;                  // mean of success_curve
  double mean_center_error = 0.0;
  double mean_iou = 0.0;
  std::size_t frames = 0;
};

// Throws InputError when the sequences differ in length or are empty.
EvalReport evaluate(const std::vector<TargetBox>& results, const std::vector<TargetBox>& truth);

// Fraction of frames with center error <= threshold.
double precision_at(const std::vector<TargetBox>& results, const std::vector<TargetBox>& truth,
                    double threshold);

// Human-readable summary (a few lines, LF-terminated).
std::string summary_text(const EvalReport& report);

// Two blocks: "threshold_px,precision" then "threshold_iou,success".
std::string curves_csv(const EvalReport& report);

}  // namespace smtt
