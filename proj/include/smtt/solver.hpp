#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "smtt/graph.hpp"

namespace smtt {

// Solver parameters for
//
//   min_C  1/2 ||X - A C||_F^2 + lambda1 ||C||_{p,q} + lambda2 Tr(C L C^T)
//
// Only (p, q) = (1, 1) and (2, 1) are accepted: both have closed-form
// proximal operators.
struct SolverConfig {
  double lambda1 = 0.01;
  double lambda2 = 0.1;
  int p = 2;
  int q = 1;
  double mu = 1.0;              // coupling weight of the alternating scheme
  std::optional<double> step;   // fixed step; empty selects backtracking
  int max_iter = 300;
  double tol = 1e-5;            // relative objective change stopping rule

  // Throws ParameterError on any out-of-range value.
  void validate() const;
};

// Dictionary seen by the solver. Either an arbitrary dense matrix, or the
// block [D_a | I_d] applied without materializing the identity block.
class DesignMatrix {
 public:
  // Dense operator. `appearance_cols` records how many leading columns are
  // appearance atoms; -1 means all of them.
  DesignMatrix(Eigen::MatrixXd dense, Eigen::Index appearance_cols = -1);  // NOLINT(google-explicit-constructor)

  static DesignMatrix with_identity_block(Eigen::MatrixXd appearance);

  Eigen::Index rows() const;
  Eigen::Index cols() const;
  Eigen::Index appearance_cols() const { return appearance_cols_; }
  bool has_identity_block() const { return identity_block_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& c) const;             // A C
  Eigen::MatrixXd apply_transpose(const Eigen::MatrixXd& r) const;   // A^T R
  Eigen::MatrixXd to_dense() const;

  // Power-iteration estimate of the largest eigenvalue of A^T A.
  double gram_norm_estimate() const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::Index appearance_cols_ = 0;
  bool identity_block_ = false;
};

// Coefficients [Z; E]: the first m rows code appearance templates, the last
// d rows are the sparse per-pixel error.
class CoefficientMatrix {
 public:
  CoefficientMatrix() = default;
  CoefficientMatrix(Eigen::MatrixXd c, Eigen::Index m);

  const Eigen::MatrixXd& matrix() const { return c_; }
  Eigen::Index m() const { return m_; }
  Eigen::Index d() const { return c_.rows() - m_; }
  Eigen::Index cols() const { return c_.cols(); }

  auto appearance() const { return c_.topRows(m_); }
  auto error() const { return c_.bottomRows(c_.rows() - m_); }

 private:
  Eigen::MatrixXd c_;
  Eigen::Index m_ = 0;
};

struct SolveReport {
  std::vector<double> objective_history;  // one entry per iteration
  int iterations = 0;
  bool converged = false;
};

struct SolveResult {
  CoefficientMatrix coefficients;
  SolveReport report;
};

// ||C||_{p,q}: inner l_p over the entries of each row, outer l_q over rows.
double mixed_norm(const Eigen::MatrixXd& c, int p, int q);

double objective(const Eigen::MatrixXd& x, const DesignMatrix& a, const Eigen::MatrixXd& c,
                 const GraphLaplacian& l, const SolverConfig& cfg);

// Gradient of the smooth part, A^T (A C - X) + 2 lambda2 C L, plus
// mu (C - Z) when the alternating scheme supplies its auxiliary variable.
Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& x, const DesignMatrix& a,
                                const Eigen::MatrixXd& c, const GraphLaplacian& l,
                                const SolverConfig& cfg, const Eigen::MatrixXd* z_aux = nullptr);

// argmin_C 1/2 ||C - V||_F^2 + tau ||C||_{p,q}.
Eigen::MatrixXd prox_mixed_norm(const Eigen::MatrixXd& v, double tau, int p, int q);

// Largest eigenvalue of C -> A^T A C + 2 lambda2 C L, i.e. the Lipschitz
// constant of the smooth gradient. It is the sum of the two spectral radii.
double lipschitz_estimate(const DesignMatrix& a, const GraphLaplacian& l, double lambda2);

// Accelerated proximal gradient with (k-1)/(k+2) momentum, backtracking and
// restart on objective increase. Starts from C = 0.
SolveResult apg_solve(const Eigen::MatrixXd& x, const DesignMatrix& a, const GraphLaplacian& l,
                      const SolverConfig& cfg);

// Splits C from an auxiliary copy Z: gradient steps on C with Z fixed, then a
// mixed-norm prox for Z, with a scaled multiplier tying the two together.
SolveResult alternating_solve(const Eigen::MatrixXd& x, const DesignMatrix& a,
                              const GraphLaplacian& l, const SolverConfig& cfg);

// Plain subgradient descent with eta_k = eta_0 / sqrt(k), eta_0 = cfg.step or
// 1.9 / L. Reference only.
// The history tracks the best objective seen; the best iterate is returned.
SolveResult subgradient_solve(const Eigen::MatrixXd& x, const DesignMatrix& a,
                              const GraphLaplacian& l, const SolverConfig& cfg);

}  // namespace smtt
