#pragma once

#include <Eigen/Dense>

namespace smtt {

// Gaussian-kernel similarity between the columns of a feature matrix.
// w(i, j) = exp(-||f_i - f_j||^2 / sigma^2), symmetric, unit diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd w;
  double sigma = 1.0;

  Eigen::Index size() const { return w.rows(); }
};

// L = D - W. Symmetric, zero row sums, positive semidefinite.
struct GraphLaplacian {
  Eigen::MatrixXd l;

  Eigen::Index size() const { return l.rows(); }
};

SimilarityMatrix build_similarity(const Eigen::MatrixXd& features, double sigma);

// Median heuristic: sigma^2 is the median of the pairwise squared column
// distances. Returns 1 when there are no pairs or every distance is zero.
double median_bandwidth(const Eigen::MatrixXd& features);

// Diagonal matrix of row sums of w.
Eigen::MatrixXd degree_matrix(const SimilarityMatrix& w);

GraphLaplacian laplacian(const SimilarityMatrix& w);

// Graph smoothness of the columns of c, evaluated as Tr(C L C^T) with one
// column of c per graph node.
double penalty_trace(const Eigen::MatrixXd& c, const GraphLaplacian& l);

// The same quantity as 1/2 sum_ij w_ij ||c_i - c_j||^2, by explicit pairs.
double penalty_pairwise(const Eigen::MatrixXd& c, const SimilarityMatrix& w);

}  // namespace smtt
