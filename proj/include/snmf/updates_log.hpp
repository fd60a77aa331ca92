#pragma once

#include "snmf/matrix.hpp"

namespace snmf {

// Log-regularized steps. The penalty is alpha * sum log(lambda_k h_kn + epsilon)
// for the MM family and alpha * sum log(h_kn + epsilon) for the heuristic.
// Zero-locking and frozen-row handling follow the l1 steps.

/// MM step on H: the l1 shrinkage alpha*lambda_k becomes alpha / (h_kn + epsilon/lambda_k),
/// with lambda taken from the incoming W.
Matrix mm_log_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                       double alpha, double epsilon, double kappa);

/// MM step on W. Column k of the denominator gains sum_n alpha / (lambda_k + epsilon/h_kn),
/// where a zero h_kn contributes nothing.
Matrix mm_log_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                       double alpha, double epsilon, double kappa);

/// Heuristic step on H. Expects unit-norm columns in W.
Matrix heur_log_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                         double alpha, double epsilon, double kappa);

/// Heuristic step on W: the regularizer does not enter, so this is heur_update_w.
Matrix heur_log_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                         double alpha, double epsilon, double kappa);

}  // namespace snmf
