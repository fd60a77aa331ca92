#pragma once

#include <span>
#include <vector>

#include "snmf/matrix.hpp"

namespace snmf {

/// S = (V + kappa) .* (WH + kappa)^(beta-2) and T = (WH + kappa)^(beta-1).
struct RatioParts {
  Matrix s;
  Matrix t;
};

RatioParts compute_ratio_parts(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                               double kappa);

/// Exponent applied to the MM ratio: 1/(2-beta) below 1, 1 on [1, 2], 1/(beta-1) above 2.
double gamma_exponent(double beta);

// One multiplicative step of each l1 family. Every step returns the new
// factor and leaves its inputs untouched. Entries that are exactly zero stay
// zero; a row of H facing an all-zero column of W (or a column of W facing an
// all-zero row of H) is left as is, with a one-time warning.

/// Majorization-minimization step on H for the scale-invariant objective.
Matrix mm_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                   double alpha, double kappa);
/// Majorization-minimization step on W; the mirror image of mm_update_h.
Matrix mm_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                   double alpha, double kappa);

/// Heuristic gradient-split step on H. Expects unit-norm columns in W.
Matrix heur_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa);
/// Heuristic gradient-split step on W followed by column renormalization.
/// Throws DomainError when a column collapses to zero.
Matrix heur_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa);

/// Lagrangian step on H (beta <= 1 only). Expects unit-norm columns in W.
Matrix lagr_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa);

struct MultiplierRoot {
  double nu = 0.0;
  /// Distance from nu to the positivity bound min_f b_f over the support.
  /// Kept separately because b - nu loses digits when |nu| >> gap.
  double gap = 0.0;
  /// min_f b_f over the support {f : w_f a_f > 0}.
  double bound = 0.0;
  int iterations = 0;
};

/// phi(nu) = sum_f w_f (a_f / (b_f - nu))^(1/(2-beta)) over the support
/// {f : w_f a_f > 0}.
double multiplier_constraint(std::span<const double> numer, std::span<const double> denom,
                             std::span<const double> w_col, double beta, double nu);

/// Solves phi(nu) = 1 by safeguarded Newton-Raphson. The root is unique and
/// lies strictly below min_f b_f over the support.
MultiplierRoot solve_multiplier(std::span<const double> numer, std::span<const double> denom,
                                std::span<const double> w_col, double beta, double tol = 1e-10,
                                int max_sub = 200);

/// Lagrangian step on W (beta <= 1 only): per-column multipliers from
/// solve_multiplier, then the exponentiated ratio. Output columns have unit
/// l1 norm to the multiplier tolerance. `multipliers`, when given, receives nu.
Matrix lagr_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa, double tol = 1e-10, int max_sub = 200,
                     std::vector<double>* multipliers = nullptr);

}  // namespace snmf
