#include "smtt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "smtt/errors.hpp"

namespace smtt {

namespace {

void require_symmetric_nonnegative(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw ShapeError("similarity matrix must be square and non-empty");
  }
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      if (!std::isfinite(w(i, j)) || w(i, j) < 0.0) {
        throw InputError("similarity weights must be finite and nonnegative");
      }
      if (w(i, j) != w(j, i)) {
        throw InputError("similarity matrix is not symmetric");
      }
    }
  }
}

}  // namespace

SimilarityMatrix build_similarity(const Eigen::MatrixXd& features, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("similarity bandwidth sigma must be positive, got " + std::to_string(sigma));
  }
  if (features.cols() < 1) {
    throw ShapeError("similarity graph needs at least one feature column");
  }
  if (!features.allFinite()) {
    throw InputError("feature matrix contains non-finite values");
  }

  const Eigen::Index n = features.cols();
  const double inv_s2 = 1.0 / (sigma * sigma);
  SimilarityMatrix out;
  out.sigma = sigma;
  out.w.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.w(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d2 = (features.col(i) - features.col(j)).squaredNorm();
      // Keep weights strictly positive even when the kernel underflows.
      const double v = std::max(std::exp(-d2 * inv_s2), std::numeric_limits<double>::min());
      out.w(i, j) = v;
      out.w(j, i) = v;
    }
  }
  return out;
}

double median_bandwidth(const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.cols();
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      d2.push_back((features.col(i) - features.col(j)).squaredNorm());
    }
  }
  if (d2.empty()) {
    return 1.0;
  }
  const auto mid = d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2);
  std::nth_element(d2.begin(), mid, d2.end());
  double median = *mid;
  if (d2.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(d2.begin(), mid));
  }
  return median > 0.0 ? std::sqrt(median) : 1.0;
}

Eigen::MatrixXd degree_matrix(const SimilarityMatrix& w) {
  require_symmetric_nonnegative(w.w);
  return w.w.rowwise().sum().asDiagonal();
}

GraphLaplacian laplacian(const SimilarityMatrix& w) {
  require_symmetric_nonnegative(w.w);
  // Self-loops cancel in D - W; summing only off-diagonal weights keeps the
  // diagonal accurate when those weights are tiny next to w_ii = 1.
  GraphLaplacian out;
  out.l = -w.w;
  for (Eigen::Index i = 0; i < w.w.rows(); ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < w.w.cols(); ++j) {
      if (j != i) degree += w.w(i, j);
    }
    out.l(i, i) = degree;
  }
  return out;
}

double penalty_trace(const Eigen::MatrixXd& c, const GraphLaplacian& l) {
  if (c.cols() != l.size()) {
    throw ShapeError("coefficient columns (" + std::to_string(c.cols()) +
                     ") do not match graph size (" + std::to_string(l.size()) + ")");
  }
  // Tr(C L C^T) = sum of the entrywise product of C and C L.
  return c.cwiseProduct(c * l.l).sum();
}

double penalty_pairwise(const Eigen::MatrixXd& c, const SimilarityMatrix& w) {
  if (c.cols() != w.size()) {
    throw ShapeError("coefficient columns (" + std::to_string(c.cols()) +
                     ") do not match graph size (" + std::to_string(w.size()) + ")");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < c.cols(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      total += w.w(i, j) * (c.col(i) - c.col(j)).squaredNorm();
    }
  }
  return 0.5 * total;
}

}  // namespace smtt
