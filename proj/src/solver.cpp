#include "smtt/solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "smtt/errors.hpp"

namespace smtt {

namespace {

constexpr int kPowerIterations = 300;
constexpr int kMaxHalvings = 60;
constexpr int kInnerIterations = 200;

std::string dims(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_supported_norm(int p, int q) {
  if (!((p == 1 && q == 1) || (p == 2 && q == 1))) {
    throw ParameterError("mixed norm (p, q) = (" + std::to_string(p) + ", " + std::to_string(q) +
                         ") is not supported; use (1, 1) or (2, 1)");
  }
}

void require_problem_shapes(const Eigen::MatrixXd& x, const DesignMatrix& a,
                            const GraphLaplacian& l) {
  if (x.rows() != a.rows()) {
    throw ShapeError("observation rows " + std::to_string(x.rows()) +
                     " do not match dictionary rows " + std::to_string(a.rows()));
  }
  if (l.l.rows() != x.cols() || l.l.cols() != x.cols()) {
    throw ShapeError("laplacian is " + dims(l.l) + " but there are " + std::to_string(x.cols()) +
                     " observations");
  }
}

void require_coefficient_shape(const Eigen::MatrixXd& x, const DesignMatrix& a,
                               const Eigen::MatrixXd& c) {
  if (c.rows() != a.cols() || c.cols() != x.cols()) {
    throw ShapeError("coefficients are " + dims(c) + ", expected " + std::to_string(a.cols()) +
                     "x" + std::to_string(x.cols()));
  }
}

// Largest eigenvalue of a symmetric PSD operator by power iteration from a
// fixed pseudo-random start.
template <class Op>
double power_iteration(Eigen::Index size, Op&& op) {
  if (size == 0) {
    return 0.0;
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    v(i) = unit(rng);
  }
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXd w = op(v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    v = w / norm;
    if (std::abs(next - estimate) <= 1e-12 * std::abs(next)) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

// 1/2 ||X - AC||^2 + lambda2 Tr(C L C^T), from cached products AC and CL.
double smooth_value(const Eigen::MatrixXd& x, const Eigen::MatrixXd& ac, const Eigen::MatrixXd& c,
                    const Eigen::MatrixXd& cl, double lambda2) {
  double value = 0.5 * (x - ac).squaredNorm();
  if (lambda2 != 0.0) {
    value += lambda2 * c.cwiseProduct(cl).sum();
  }
  return value;
}

double relative_change(double before, double after) {
  const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
  return std::abs(before - after) / scale;
}

void require_finite(double value, const char* solver, int iteration) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string(solver) + ": objective became non-finite at iteration " +
                             std::to_string(iteration),
                         iteration);
  }
}

Eigen::MatrixXd norm_subgradient(const Eigen::MatrixXd& c, int p) {
  if (p == 1) {
    return c.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c.rows(), c.cols());
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    const double norm = c.row(r).norm();
    if (norm > 0.0) {
      g.row(r) = c.row(r) / norm;
    }
  }
  return g;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) {
    throw ParameterError("lambda1 must be a nonnegative finite number");
  }
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
    throw ParameterError("lambda2 must be a nonnegative finite number");
  }
  require_supported_norm(p, q);
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("mu must be positive");
  }
  if (step && (!(*step > 0.0) || !std::isfinite(*step))) {
    throw ParameterError("fixed step size must be positive");
  }
  if (max_iter < 1) {
    throw ParameterError("max_iter must be at least 1");
  }
  if (!(tol > 0.0)) {
    throw ParameterError("tol must be positive");
  }
}

// ---------------------------------------------------------------------------
// DesignMatrix

DesignMatrix::DesignMatrix(Eigen::MatrixXd dense, Eigen::Index appearance_cols)
    : matrix_(std::move(dense)),
      appearance_cols_(appearance_cols < 0 ? matrix_.cols() : appearance_cols) {
  if (appearance_cols_ > matrix_.cols()) {
    throw ShapeError("appearance column count exceeds dictionary width");
  }
  if (!matrix_.allFinite()) {
    throw InputError("dictionary contains non-finite values");
  }
}

DesignMatrix DesignMatrix::with_identity_block(Eigen::MatrixXd appearance) {
  DesignMatrix out(std::move(appearance));
  out.identity_block_ = true;
  return out;
}

Eigen::Index DesignMatrix::rows() const { return matrix_.rows(); }

Eigen::Index DesignMatrix::cols() const {
  return identity_block_ ? matrix_.cols() + matrix_.rows() : matrix_.cols();
}

Eigen::MatrixXd DesignMatrix::apply(const Eigen::MatrixXd& c) const {
  if (c.rows() != cols()) {
    throw ShapeError("cannot apply " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                     " dictionary to " + dims(c) + " coefficients");
  }
  if (!identity_block_) {
    return matrix_ * c;
  }
  const Eigen::Index m = matrix_.cols();
  Eigen::MatrixXd out = c.bottomRows(matrix_.rows());
  out.noalias() += matrix_ * c.topRows(m);
  return out;
}

Eigen::MatrixXd DesignMatrix::apply_transpose(const Eigen::MatrixXd& r) const {
  if (r.rows() != rows()) {
    throw ShapeError("cannot apply transposed dictionary to " + dims(r) + " residual");
  }
  if (!identity_block_) {
    return matrix_.transpose() * r;
  }
  const Eigen::Index m = matrix_.cols();
  Eigen::MatrixXd out(cols(), r.cols());
  out.topRows(m).noalias() = matrix_.transpose() * r;
  out.bottomRows(r.rows()) = r;
  return out;
}

Eigen::MatrixXd DesignMatrix::to_dense() const {
  if (!identity_block_) {
    return matrix_;
  }
  Eigen::MatrixXd out(rows(), cols());
  out << matrix_, Eigen::MatrixXd::Identity(rows(), rows());
  return out;
}

double DesignMatrix::gram_norm_estimate() const {
  return power_iteration(cols(), [this](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return apply_transpose(apply(v));
  });
}

// ---------------------------------------------------------------------------
// CoefficientMatrix

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXd c, Eigen::Index m) : c_(std::move(c)), m_(m) {
  if (m < 0 || m > c_.rows()) {
    throw ShapeError("appearance row count out of range");
  }
  if (!c_.allFinite()) {
    throw InputError("coefficient matrix contains non-finite values");
  }
}

// ---------------------------------------------------------------------------
// Objective pieces

double mixed_norm(const Eigen::MatrixXd& c, int p, int q) {
  require_supported_norm(p, q);
  if (p == 1) {
    return c.cwiseAbs().sum();
  }
  return c.rowwise().norm().sum();
}

double objective(const Eigen::MatrixXd& x, const DesignMatrix& a, const Eigen::MatrixXd& c,
                 const GraphLaplacian& l, const SolverConfig& cfg) {
  require_problem_shapes(x, a, l);
  require_coefficient_shape(x, a, c);
  const double fit = 0.5 * (x - a.apply(c)).squaredNorm();
  const double sparsity = cfg.lambda1 * mixed_norm(c, cfg.p, cfg.q);
  const double smoothness = cfg.lambda2 * penalty_trace(c, l);
  return fit + sparsity + smoothness;
}

Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& x, const DesignMatrix& a,
                                const Eigen::MatrixXd& c, const GraphLaplacian& l,
                                const SolverConfig& cfg, const Eigen::MatrixXd* z_aux) {
  require_problem_shapes(x, a, l);
  require_coefficient_shape(x, a, c);
  Eigen::MatrixXd grad = a.apply_transpose(a.apply(c) - x);
  if (cfg.lambda2 != 0.0) {
    grad.noalias() += (2.0 * cfg.lambda2) * (c * l.l);
  }
  if (z_aux != nullptr) {
    if (z_aux->rows() != c.rows() || z_aux->cols() != c.cols()) {
      throw ShapeError("auxiliary variable is " + dims(*z_aux) + ", expected " + dims(c));
    }
    grad += cfg.mu * (c - *z_aux);
  }
  return grad;
}

Eigen::MatrixXd prox_mixed_norm(const Eigen::MatrixXd& v, double tau, int p, int q) {
  require_supported_norm(p, q);
  if (!(tau >= 0.0)) {
    throw ParameterError("prox threshold must be nonnegative");
  }
  if (tau == 0.0) {
    return v;
  }
  if (p == 1) {
    return v.unaryExpr([tau](double e) {
      const double shrunk = std::abs(e) - tau;
      return shrunk > 0.0 ? std::copysign(shrunk, e) : 0.0;
    });
  }
  Eigen::MatrixXd out(v.rows(), v.cols());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const double norm = v.row(r).norm();
    if (norm <= tau) {
      out.row(r).setZero();
    } else {
      out.row(r) = (1.0 - tau / norm) * v.row(r);
    }
  }
  return out;
}

double lipschitz_estimate(const DesignMatrix& a, const GraphLaplacian& l, double lambda2) {
  double bound = a.gram_norm_estimate();
  if (lambda2 != 0.0) {
    bound += 2.0 * lambda2 * power_iteration(l.size(), [&l](const Eigen::VectorXd& v) -> Eigen::VectorXd {
               return l.l * v;
             });
  }
  return bound;
}

// ---------------------------------------------------------------------------
// Solvers

SolveResult apg_solve(const Eigen::MatrixXd& x, const DesignMatrix& a, const GraphLaplacian& l,
                      const SolverConfig& cfg) {
  cfg.validate();
  require_problem_shapes(x, a, l);
  if (!x.allFinite()) {
    throw InputError("observation matrix contains non-finite values");
  }

  const Eigen::Index k_rows = a.cols();
  const Eigen::Index n = x.cols();
  const double lambda1 = cfg.lambda1;
  const double lambda2 = cfg.lambda2;
  const bool backtracking = !cfg.step.has_value();
  double eta = backtracking
                   ? 1.0 / std::max(lipschitz_estimate(a, l, lambda2), std::numeric_limits<double>::min())
                   : *cfg.step;

  // Iterate C and its products A C, C L. The extrapolated point Y is an
  // affine combination of iterates, so its products follow by linearity.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k_rows, n);
  Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(x.rows(), n);
  Eigen::MatrixXd cl = Eigen::MatrixXd::Zero(k_rows, n);
  double f_c = 0.5 * x.squaredNorm();
  double obj_c = f_c;

  Eigen::MatrixXd y = c;
  Eigen::MatrixXd ay = ac;
  Eigen::MatrixXd yl = cl;
  double f_y = f_c;

  SolveReport report;
  report.objective_history.reserve(static_cast<std::size_t>(cfg.max_iter));
  int k = 1;
  Eigen::MatrixXd cn;
  Eigen::MatrixXd acn;
  Eigen::MatrixXd cnl;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    double obj_n = 0.0;
    double f_n = 0.0;
    for (;;) {
      Eigen::MatrixXd grad = a.apply_transpose(ay - x);
      if (lambda2 != 0.0) {
        grad.noalias() += (2.0 * lambda2) * yl;
      }
      for (int halvings = 0;; ++halvings) {
        cn = prox_mixed_norm(y - eta * grad, eta * lambda1, cfg.p, cfg.q);
        acn = a.apply(cn);
        cnl.noalias() = cn * l.l;
        f_n = smooth_value(x, acn, cn, cnl, lambda2);
        if (!backtracking || halvings >= kMaxHalvings) {
          break;
        }
        if (std::isfinite(f_n)) {
          // Sufficient decrease against the quadratic model at Y.
          const Eigen::MatrixXd diff = cn - y;
          const double model =
              f_y + grad.cwiseProduct(diff).sum() + diff.squaredNorm() / (2.0 * eta);
          if (f_n <= model + 1e-12 * (1.0 + std::abs(f_y))) {
            break;
          }
        }
        eta *= 0.5;
      }
      obj_n = f_n + lambda1 * mixed_norm(cn, cfg.p, cfg.q);
      if (obj_n > obj_c && k > 1) {
        // Momentum overshoot: drop it and retake the step from C.
        y = c;
        ay = ac;
        yl = cl;
        f_y = f_c;
        k = 1;
        continue;
      }
      break;
    }
    require_finite(obj_n, "apg_solve", it);

    const double beta = (k - 1.0) / (k + 2.0);
    y = cn + beta * (cn - c);
    ay = acn + beta * (acn - ac);
    yl = cnl + beta * (cnl - cl);
    f_y = smooth_value(x, ay, y, yl, lambda2);

    const double change = relative_change(obj_c, obj_n);
    std::swap(c, cn);
    std::swap(ac, acn);
    std::swap(cl, cnl);
    f_c = f_n;
    obj_c = obj_n;
    ++k;

    report.objective_history.push_back(obj_n);
    report.iterations = it;
    if (change < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  return {CoefficientMatrix(std::move(c), a.appearance_cols()), std::move(report)};
}

SolveResult alternating_solve(const Eigen::MatrixXd& x, const DesignMatrix& a,
                              const GraphLaplacian& l, const SolverConfig& cfg) {
  cfg.validate();
  require_problem_shapes(x, a, l);
  if (!x.allFinite()) {
    throw InputError("observation matrix contains non-finite values");
  }

  const double eta =
      cfg.step ? *cfg.step : 1.0 / (lipschitz_estimate(a, l, cfg.lambda2) + cfg.mu);
  const Eigen::Index k_rows = a.cols();
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k_rows, n);
  Eigen::MatrixXd z = c;
  Eigen::MatrixXd u = c;  // scaled multiplier for C = Z

  SolveReport report;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    // Subproblem 1: gradient steps on C with the auxiliary target fixed.
    const Eigen::MatrixXd target = z - u;
    for (int inner = 0; inner < kInnerIterations; ++inner) {
      const Eigen::MatrixXd grad = smooth_gradient(x, a, c, l, cfg, &target);
      if (grad.norm() <= 0.1 * cfg.tol * (1.0 + c.norm())) {
        break;
      }
      c -= eta * grad;
    }

    // Subproblem 2: mixed-norm prox for Z.
    const Eigen::MatrixXd z_prev = z;
    z = prox_mixed_norm(c + u, cfg.lambda1 / cfg.mu, cfg.p, cfg.q);
    u += c - z;

    const double obj = objective(x, a, c, l, cfg);
    require_finite(obj, "alternating_solve", it);
    report.objective_history.push_back(obj);
    report.iterations = it;

    const double scale = 1.0 + c.norm();
    const double primal = (c - z).norm() / scale;
    const double dual = cfg.mu * (z - z_prev).norm() / scale;
    if (primal < cfg.tol && dual < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  return {CoefficientMatrix(std::move(c), a.appearance_cols()), std::move(report)};
}

SolveResult subgradient_solve(const Eigen::MatrixXd& x, const DesignMatrix& a,
                              const GraphLaplacian& l, const SolverConfig& cfg) {
  cfg.validate();
  require_problem_shapes(x, a, l);
  if (!x.allFinite()) {
    throw InputError("observation matrix contains non-finite values");
  }

  // Just under the 2 / L stability limit of the smooth part.
  const double eta0 = cfg.step ? *cfg.step : 1.9 / lipschitz_estimate(a, l, cfg.lambda2);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.cols(), x.cols());
  Eigen::MatrixXd best = c;
  double best_obj = 0.5 * x.squaredNorm();
  double window_start = best_obj;
  constexpr int kWindow = 100;

  SolveReport report;
  report.objective_history.reserve(static_cast<std::size_t>(cfg.max_iter));
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Eigen::MatrixXd g = smooth_gradient(x, a, c, l, cfg);
    if (cfg.lambda1 != 0.0) {
      g += cfg.lambda1 * norm_subgradient(c, cfg.p);
    }
    c -= (eta0 / std::sqrt(static_cast<double>(it))) * g;

    const double obj = objective(x, a, c, l, cfg);
    require_finite(obj, "subgradient_solve", it);
    if (obj < best_obj) {
      best_obj = obj;
      best = c;
    }
    report.objective_history.push_back(best_obj);
    report.iterations = it;
    if (it % kWindow == 0) {
      if (relative_change(window_start, best_obj) < cfg.tol) {
        report.converged = true;
        break;
      }
      window_start = best_obj;
    }
  }
  return {CoefficientMatrix(std::move(best), a.appearance_cols()), std::move(report)};
}

}  // namespace smtt
