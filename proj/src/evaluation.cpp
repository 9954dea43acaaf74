#include "smtt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "smtt/errors.hpp"

namespace smtt {

namespace {

constexpr int kMaxCenterThreshold = 50;
constexpr int kSuccessSteps = 100;

void require_paired(const std::vector<TargetBox>& results, const std::vector<TargetBox>& truth) {
  if (results.size() != truth.size()) {
    throw InputError("result has " + std::to_string(results.size()) + " boxes but truth has " +
                     std::to_string(truth.size()));
  }
  if (results.empty()) {
    throw InputError("nothing to evaluate");
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double iou(const TargetBox& a, const TargetBox& b) {
  if (a == b) {
    return 1.0;
  }
  const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.left(), b.left()));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top()));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) {
    return 0.0;
  }
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_error(const TargetBox& a, const TargetBox& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

double precision_at(const std::vector<TargetBox>& results, const std::vector<TargetBox>& truth,
                    double threshold) {
  require_paired(results, truth);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (center_error(results[i], truth[i]) <= threshold) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

EvalReport evaluate(const std::vector<TargetBox>& results, const std::vector<TargetBox>& truth) {
  require_paired(results, truth);
  const std::size_t n = results.size();
  std::vector<double> errors(n);
  std::vector<double> overlaps(n);
  EvalReport r;
  r.frames = n;
  for (std::size_t i = 0; i < n; ++i) {
    errors[i] = center_error(results[i], truth[i]);
    overlaps[i] = iou(results[i], truth[i]);
    r.mean_center_error += errors[i];
    r.mean_iou += overlaps[i];
  }
  r.mean_center_error /= static_cast<double>(n);
  r.mean_iou /= static_cast<double>(n);

  auto fraction = [n](auto pred, const std::vector<double>& values) {
    return static_cast<double>(std::count_if(values.begin(), values.end(), pred)) /
           static_cast<double>(n);
  };
  for (int t = 0; t <= kMaxCenterThreshold; ++t) {
    const double theta = t;
    r.precision_thresholds.push_back(theta);
    r.precision_curve.push_back(fraction([theta](double e) { return e <= theta; }, errors));
  }
  for (int s = 0; s <= kSuccessSteps; ++s) {
    const double u = s / static_cast<double>(kSuccessSteps);
    r.success_thresholds.push_back(u);
    r.success_curve.push_back(fraction([u](double o) { return o >= u; }, overlaps));
  }
  r.precision_at_20 = r.precision_curve[20];
  double area = 0.0;
  for (double v : r.success_curve) {
    area += v;
  }
  r.success_auc = area / static_cast<double>(r.success_curve.size());
  return r;
}

std::string summary_text(const EvalReport& report) {
  std::ostringstream out;
  out << "frames=" << report.frames << '\n'
      << "precision@20=" << fixed(report.precision_at_20, 4) << '\n'
      << "success_auc=" << fixed(report.success_auc, 4) << '\n'
      << "mean_center_error=" << fixed(report.mean_center_error, 4) << '\n'
      << "mean_iou=" << fixed(report.mean_iou, 4) << '\n';
  return out.str();
}

std::string curves_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "threshold_px,precision\n";
  for (std::size_t i = 0; i < report.precision_curve.size(); ++i) {
    out << fixed(report.precision_thresholds[i], 0) << ',' << fixed(report.precision_curve[i], 6) << '\n';
  }
  out << "threshold_iou,success\n";
  for (std::size_t i = 0; i < report.success_curve.size(); ++i) {
    out << fixed(report.success_thresholds[i], 2) << ',' << fixed(report.success_curve[i], 6) << '\n';
  }
  return out.str();
}

}  // namespace smtt
