#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "snmf/config.hpp"
#include "snmf/matrix.hpp"

namespace snmf {

// Brute-force materialization of the auxiliary functions behind the MM
// updates. Every value here is computed entry by entry from its defining
// expression and is meant to be compared against the closed-form updates,
// never used by them. All auxiliary values are defined up to an additive
// constant; compare differences against the anchor.

enum class FactorSide { H, W };

/// Auxiliary-function data at an anchor. For side H the anchor is H~ (K x N)
/// and `fixed` is W; for side W the anchor is W~ (F x K) and `fixed` is H.
///   p, q   : W^T S~, W^T T~ (side H) or S~ H^T, T~ H^T (side W)
///   coef   : per-entry weight of the linearized regularizer
///            l1  side H: lambda_k        side W: sum_n h_kn
///            log side H: 1/(h~ + eps/lambda_k)
///                side W: sum_n 1/(lambda~_k + eps/h_kn), zero h_kn skipped
struct AuxEvalContext {
  FactorSide side = FactorSide::H;
  Matrix anchor;
  Matrix fixed;
  Matrix v;
  double beta = 1.0;
  Penalty penalty;
  double kappa = 0.0;
  Matrix p;
  Matrix q;
  Matrix coef;
};

/// Throws DomainError unless the anchor is strictly positive.
AuxEvalContext make_context(FactorSide side, const Matrix& v, const Matrix& anchor,
                            const Matrix& fixed, double beta, const Penalty& penalty,
                            double kappa);

/// Data-fit auxiliary function G_beta(X | X~), selecting the regime
/// beta < 1, beta = 1, 1 < beta <= 2, beta > 2 by exact comparison.
/// Requires X > 0.
double g_beta(const Matrix& x, const AuxEvalContext& ctx);

/// l1 regularizer majorizer sum coef * (x~/beta) (x/x~)^beta. Only defined for
/// beta > 1; below that the exact penalty is used and this throws.
double g_s_l1(const Matrix& x, const AuxEvalContext& ctx);

/// Log regularizer majorizer on H: sum h / (h~ + eps/lambda) for beta <= 1,
/// sum (1/beta) (h~/(h~ + eps/lambda)) (h/h~)^beta above.
double g_s_log(const Matrix& h, const AuxEvalContext& ctx);

/// Log regularizer majorizer on W: sum_k c_k sum_f w_fk for beta <= 1, in
/// monomial form above.
double f_r_log(const Matrix& w, const AuxEvalContext& ctx);

/// Full auxiliary function: g_beta plus alpha times the matching regularizer term.
double aux_value(const Matrix& x, const AuxEvalContext& ctx);

/// The function being majorized: the scale-invariant objective with the other
/// factor held fixed.
double target_value(const Matrix& x, const AuxEvalContext& ctx);

/// Analytic gradient of aux_value with respect to X, differentiated from the
/// per-entry expressions.
Matrix aux_gradient(const Matrix& x, const AuxEvalContext& ctx);

/// Entrywise minimizer of aux_value: bisection on the sign of the separable
/// derivative over (1e-8 x~, 1e8 x~), geometric midpoints, relative width 1e-12.
Matrix aux_argmin(const AuxEvalContext& ctx);

/// Central differences with per-entry step rel_step * (x + rel_step). Throws
/// DomainError naming the probed entry when fn is not finite there.
Matrix fd_gradient(const std::function<double(const Matrix&)>& fn, const Matrix& x,
                   double rel_step);

/// aux_value(X) - aux_value(X~) and target_value(X) - target_value(X~),
/// summed entry by entry from log1p/expm1 forms so that increments far below
/// the size of the totals keep their digits.
double aux_increment(const Matrix& x, const AuxEvalContext& ctx);
double target_increment(const Matrix& x, const AuxEvalContext& ctx);

struct PropertyReport {
  std::size_t samples = 0;
  std::size_t p1_violations = 0;  // majorization
  double p1_worst = 0.0;          // largest (C diff - G diff) seen
  double p2_gap = 0.0;            // largest |G diff - C diff| at 1e-8 from the anchor
  std::size_t p3_violations = 0;  // ratio-only gradient
  double p3_worst = 0.0;
  std::size_t p4_violations = 0;  // matching directional derivatives at the anchor
  double p4_worst = 0.0;
  std::size_t p5_violations = 0;  // positive separable curvature
  std::uint64_t seed = 0;
  std::string first_failure;

  bool ok() const noexcept {
    return p1_violations == 0 && p3_violations == 0 && p4_violations == 0 && p5_violations == 0 &&
           p2_gap <= 1e-12;
  }
};

/// Samples `n_samples` probe points around the anchor and checks the five
/// MM properties:
///   P1  G(X) - G(X~) >= C(X) - C(X~) - 1e-9
///   P2  the two differences agree to 1e-12 at relative distance 1e-8 from X~;
///       the gap is second order in that distance, so this probes tightness
///   P3  dG/dx at (X, X~) equals dG/dx at (cX, cX~), relative 1e-6
///   P4  central-difference directional derivatives of G and C agree at X~,
///       relative 1e-5
///   P5  the separable second derivative of G is positive at X
PropertyReport check_mm_properties(const AuxEvalContext& ctx, std::size_t n_samples,
                                   std::uint64_t seed);

}  // namespace snmf
