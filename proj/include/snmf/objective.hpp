#pragma once

#include "snmf/config.hpp"
#include "snmf/matrix.hpp"

namespace snmf {

/// d_beta(x | y). Branches on beta == 1 (Kullback-Leibler) and beta == 0
/// (Itakura-Saito) by exact comparison; every other beta, including 2, uses
/// the generic expression.
///
/// Domain: y > 0 always; x > 0 when beta <= 1; x >= 0 otherwise.
/// Violations throw DomainError naming the branch.
double beta_divergence(double x, double y, double beta);

/// D_beta(V + kappa | WH + kappa), summed in row-major order.
double data_fit(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta, double kappa);
/// Same, from a precomputed product WH.
double data_fit(const DataMatrix& v, const Matrix& wh, double beta, double kappa);

/// sum_{k,n} ||w_k||_1 h_kn.
double penalty_l1_scaled(const Matrix& w, const Matrix& h);
/// sum_{k,n} log(||w_k||_1 h_kn + epsilon). May be negative.
double penalty_log_scaled(const Matrix& w, const Matrix& h, double epsilon);

/// sum_{k,n} h_kn.
double penalty_l1(const Matrix& h);
/// sum_{k,n} log(h_kn + epsilon).
double penalty_log(const Matrix& h, double epsilon);

/// Scale-invariant objective: data_fit + alpha * scaled penalty. Coincides
/// with the constrained objective whenever every column of W has unit l1 norm.
double objective(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                 const Penalty& penalty, double kappa);
double objective(const DataMatrix& v, const Matrix& w, const Matrix& h, const SolverConfig& config);

/// Constrained-problem objective: penalty on H alone, W used as given.
double objective_constrained(const DataMatrix& v, const Matrix& w, const Matrix& h,
                             const SolverConfig& config);

/// Reparametrized objective: data_fit of V against (W Lambda^-1) H plus the
/// unscaled penalty on H.
double objective_reparametrized(const DataMatrix& v, const Matrix& w, const Matrix& h,
                                const SolverConfig& config);

}  // namespace snmf
