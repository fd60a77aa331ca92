#include "snmf/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace snmf {

namespace {

std::string branch_name(double beta) {
  if (beta == 1.0) return "beta=1 (KL) branch";
  if (beta == 0.0) return "beta=0 (IS) branch";
  return "generic branch (beta=" + std::to_string(beta) + ")";
}

void require_factor_shapes(const DataMatrix& v, const Matrix& w, const Matrix& h) {
  if (w.rows() != v.rows() || h.cols() != v.cols() || w.cols() != h.rows()) {
    throw ShapeError("objective: V " + v.shape_string() + " does not match W " +
                     w.shape_string() + " * H " + h.shape_string());
  }
}

}  // namespace

double beta_divergence(double x, double y, double beta) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    throw DomainError("beta_divergence: y must be positive and finite in the " + branch_name(beta));
  }
  if (!std::isfinite(x) || x < 0.0 || (beta <= 1.0 && x == 0.0)) {
    throw DomainError("beta_divergence: x out of domain in the " + branch_name(beta) +
                      " (x must be > 0 when beta <= 1, >= 0 otherwise)");
  }
  if (beta == 1.0) return x * std::log(x / y) - x + y;
  if (beta == 0.0) return x / y - std::log(x / y) - 1.0;
  return std::pow(x, beta) / (beta * (beta - 1.0)) + std::pow(y, beta) / beta -
         x * std::pow(y, beta - 1.0) / (beta - 1.0);
}

double data_fit(const DataMatrix& v, const Matrix& wh, double beta, double kappa) {
  if (wh.rows() != v.rows() || wh.cols() != v.cols()) {
    throw ShapeError("data_fit: V " + v.shape_string() + " vs WH " + wh.shape_string());
  }
  std::vector<double> vrow(v.cols());
  double total = 0.0;
  for (std::size_t f = 0; f < v.rows(); ++f) {
    v.copy_row(f, vrow);
    const auto whrow = wh.row(f);
    for (std::size_t n = 0; n < v.cols(); ++n) {
      try {
        total += beta_divergence(vrow[n] + kappa, whrow[n] + kappa, beta);
      } catch (const DomainError& e) {
        throw DomainError(e.what(), Index{f, n});
      }
    }
  }
  return total;
}

double data_fit(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta, double kappa) {
  require_factor_shapes(v, w, h);
  return data_fit(v, matmul(w, h), beta, kappa);
}

double penalty_l1_scaled(const Matrix& w, const Matrix& h) {
  const auto lambda = col_sums(w);
  double total = 0.0;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    for (const double x : h.row(k)) total += lambda[k] * x;
  }
  return total;
}

double penalty_log_scaled(const Matrix& w, const Matrix& h, double epsilon) {
  const auto lambda = col_sums(w);
  double total = 0.0;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    for (const double x : h.row(k)) total += std::log(lambda[k] * x + epsilon);
  }
  return total;
}

double penalty_l1(const Matrix& h) {
  double total = 0.0;
  for (const double x : h.values()) total += x;
  return total;
}

double penalty_log(const Matrix& h, double epsilon) {
  double total = 0.0;
  for (const double x : h.values()) total += std::log(x + epsilon);
  return total;
}

double objective(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                 const Penalty& penalty, double kappa) {
  const double fit = data_fit(v, w, h, beta, kappa);
  if (penalty.alpha == 0.0) return fit;
  const double reg = penalty.kind == RegularizerKind::L1
                         ? penalty_l1_scaled(w, h)
                         : penalty_log_scaled(w, h, penalty.epsilon);
  return fit + penalty.alpha * reg;
}

double objective(const DataMatrix& v, const Matrix& w, const Matrix& h, const SolverConfig& config) {
  return objective(v, w, h, config.beta, config.penalty(), config.kappa);
}

double objective_constrained(const DataMatrix& v, const Matrix& w, const Matrix& h,
                             const SolverConfig& config) {
  const double fit = data_fit(v, w, h, config.beta, config.kappa);
  if (config.alpha == 0.0) return fit;
  const double reg = config.regularizer == RegularizerKind::L1 ? penalty_l1(h)
                                                               : penalty_log(h, config.epsilon);
  return fit + config.alpha * reg;
}

double objective_reparametrized(const DataMatrix& v, const Matrix& w, const Matrix& h,
                                const SolverConfig& config) {
  const auto lambda = col_sums(w);
  Matrix normalized = w;
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < w.cols(); ++k) {
      if (lambda[k] > 0.0) normalized(f, k) = w(f, k) / lambda[k];
    }
  }
  return objective_constrained(v, normalized, h, config);
}

}  // namespace snmf
