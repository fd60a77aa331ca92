#include "snmf/updates_l1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "snmf/config.hpp"
#include "update_common.hpp"

namespace snmf {

using detail::apply_ratio;

RatioParts compute_ratio_parts(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                               double kappa) {
  detail::require_update_shapes(v, w, h, "compute_ratio_parts");
  const Matrix wh = matmul(w, h);
  RatioParts parts{Matrix(v.rows(), v.cols()), Matrix(v.rows(), v.cols())};
  std::vector<double> vrow(v.cols());
  for (std::size_t f = 0; f < v.rows(); ++f) {
    v.copy_row(f, vrow);
    const auto whrow = wh.row(f);
    auto srow = parts.s.row(f);
    auto trow = parts.t.row(f);
    for (std::size_t n = 0; n < v.cols(); ++n) {
      const double y = whrow[n] + kappa;
      if (y == 0.0 && beta < 2.0) {
        throw DomainError("compute_ratio_parts: WH + kappa is zero with beta < 2", Index{f, n});
      }
      srow[n] = (vrow[n] + kappa) * std::pow(y, beta - 2.0);
      trow[n] = std::pow(y, beta - 1.0);
    }
  }
  return parts;
}

double gamma_exponent(double beta) {
  if (beta < 1.0) return 1.0 / (2.0 - beta);
  if (beta <= 2.0) return 1.0;
  return 1.0 / (beta - 1.0);
}

Matrix mm_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                   double alpha, double kappa) {
  detail::require_update_shapes(v, w, h, "mm_update_h");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix p = matmul_tn(w, s);
  const Matrix q = matmul_tn(w, t);
  const auto lambda = col_sums(w);
  const double gamma = gamma_exponent(beta);
  Matrix out = h;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    if (lambda[k] == 0.0) {
      detail::warn_frozen_row("mm_update_h");
      continue;
    }
    const double shrink = alpha * lambda[k];
    for (std::size_t n = 0; n < h.cols(); ++n) {
      out(k, n) = apply_ratio(h(k, n), p(k, n), q(k, n) + shrink, gamma, {k, n}, "mm_update_h");
    }
  }
  return out;
}

Matrix mm_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                   double alpha, double kappa) {
  detail::require_update_shapes(v, w, h, "mm_update_w");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix a = matmul_nt(s, h);
  const Matrix b = matmul_nt(t, h);
  const auto rho = row_sums(h);
  const double gamma = gamma_exponent(beta);
  Matrix out = w;
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < w.cols(); ++k) {
      if (rho[k] == 0.0) {
        detail::warn_frozen_col("mm_update_w");
        continue;
      }
      out(f, k) = apply_ratio(w(f, k), a(f, k), b(f, k) + alpha * rho[k], gamma, {f, k},
                              "mm_update_w");
    }
  }
  return out;
}

Matrix heur_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa) {
  detail::require_update_shapes(v, w, h, "heur_update_h");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix p = matmul_tn(w, s);
  const Matrix q = matmul_tn(w, t);
  const auto lambda = col_sums(w);
  Matrix out = h;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    if (lambda[k] == 0.0) {
      detail::warn_frozen_row("heur_update_h");
      continue;
    }
    for (std::size_t n = 0; n < h.cols(); ++n) {
      out(k, n) = apply_ratio(h(k, n), p(k, n), q(k, n) + alpha, 1.0, {k, n}, "heur_update_h");
    }
  }
  return out;
}

Matrix heur_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double /*alpha*/, double kappa) {
  detail::require_update_shapes(v, w, h, "heur_update_w");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix a = matmul_nt(s, h);  // S H^T
  const Matrix b = matmul_nt(t, h);  // T H^T
  const auto rho = row_sums(h);
  const std::size_t rank = w.cols();

  // Column sums of W .* (T H^T) and W .* (S H^T), broadcast over rows.
  std::vector<double> wt(rank, 0.0);
  std::vector<double> ws(rank, 0.0);
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < rank; ++k) {
      wt[k] += w(f, k) * b(f, k);
      ws[k] += w(f, k) * a(f, k);
    }
  }

  Matrix out = w;
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < rank; ++k) {
      if (rho[k] == 0.0) {
        detail::warn_frozen_col("heur_update_w");
        continue;
      }
      out(f, k) = apply_ratio(w(f, k), a(f, k) + wt[k], b(f, k) + ws[k], 1.0, {f, k},
                              "heur_update_w");
    }
  }

  const auto lambda = col_sums(out);
  for (std::size_t k = 0; k < rank; ++k) {
    if (!(lambda[k] > 0.0)) {
      throw DomainError("heur_update_w: column " + std::to_string(k) +
                        " collapsed to zero and cannot be normalized");
    }
  }
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < rank; ++k) out(f, k) /= lambda[k];
  }
  return out;
}

Matrix lagr_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double alpha, double kappa) {
  require_lagrangian_supported(RegularizerKind::L1, beta);
  detail::require_update_shapes(v, w, h, "lagr_update_h");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix p = matmul_tn(w, s);
  const Matrix q = matmul_tn(w, t);
  const auto lambda = col_sums(w);
  const double gamma = 1.0 / (2.0 - beta);
  Matrix out = h;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    if (lambda[k] == 0.0) {
      detail::warn_frozen_row("lagr_update_h");
      continue;
    }
    for (std::size_t n = 0; n < h.cols(); ++n) {
      out(k, n) = apply_ratio(h(k, n), p(k, n), q(k, n) + alpha, gamma, {k, n}, "lagr_update_h");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multipliers

double multiplier_constraint(std::span<const double> numer, std::span<const double> denom,
                             std::span<const double> w_col, double beta, double nu) {
  const double gamma = 1.0 / (2.0 - beta);
  double phi = 0.0;
  for (std::size_t f = 0; f < w_col.size(); ++f) {
    if (w_col[f] > 0.0 && numer[f] > 0.0) {
      phi += w_col[f] * std::pow(numer[f] / (denom[f] - nu), gamma);
    }
  }
  return phi;
}

MultiplierRoot solve_multiplier(std::span<const double> numer, std::span<const double> denom,
                                std::span<const double> w_col, double beta, double tol,
                                int max_sub) {
  require_lagrangian_supported(RegularizerKind::L1, beta);
  if (numer.size() != w_col.size() || denom.size() != w_col.size()) {
    throw ShapeError("solve_multiplier: column lengths differ");
  }
  const double gamma = 1.0 / (2.0 - beta);

  // Work in the gap d = b_min - nu > 0, where phi(d) = sum_f c_f (g_f + d)^-gamma
  // with g_f = b_f - b_min >= 0 is decreasing and convex.
  double b_min = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < w_col.size(); ++f) {
    if (w_col[f] > 0.0 && numer[f] > 0.0) b_min = std::min(b_min, denom[f]);
  }
  if (!std::isfinite(b_min)) {
    throw ConvergenceError("solve_multiplier: empty support (no f with w_f * a_f > 0)");
  }
  std::vector<double> coef;
  std::vector<double> offset;
  double coef_sum = 0.0;
  for (std::size_t f = 0; f < w_col.size(); ++f) {
    if (w_col[f] > 0.0 && numer[f] > 0.0) {
      coef.push_back(w_col[f] * std::pow(numer[f], gamma));
      offset.push_back(denom[f] - b_min);
      coef_sum += coef.back();
    }
  }

  auto phi_at = [&](double d, double& slope) {
    double phi = 0.0;
    double dphi = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      const double base = offset[i] + d;
      const double term = coef[i] * std::pow(base, -gamma);
      phi += term;
      dphi -= gamma * term / base;
    }
    slope = dphi;
    return phi;
  };

  // phi(d) <= coef_sum * d^-gamma, so phi(d_max) <= 1.
  const double d_max = std::pow(coef_sum, 2.0 - beta);
  double lo = 0.0;
  double hi = d_max;
  double d = (b_min > 0.0 && b_min <= d_max) ? b_min : d_max;

  for (int it = 0; it <= max_sub; ++it) {
    double slope = 0.0;
    const double residual = phi_at(d, slope) - 1.0;
    if (std::abs(residual) <= tol) return {b_min - d, d, b_min, it};
    if (residual > 0.0) {
      lo = d;
    } else {
      hi = d;
    }
    double next = d - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == d || next == lo || next == hi) break;
    d = next;
  }
  throw ConvergenceError("solve_multiplier: no root within tolerance after " +
                         std::to_string(max_sub) + " subiterations");
}

Matrix lagr_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                     double /*alpha*/, double kappa, double tol, int max_sub,
                     std::vector<double>* multipliers) {
  require_lagrangian_supported(RegularizerKind::L1, beta);
  detail::require_update_shapes(v, w, h, "lagr_update_w");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix a = transpose(matmul_nt(s, h));  // K x F, one row per column of W
  const Matrix b = transpose(matmul_nt(t, h));
  const Matrix wt = transpose(w);
  const auto rho = row_sums(h);
  const double gamma = 1.0 / (2.0 - beta);

  if (multipliers) multipliers->assign(w.cols(), 0.0);
  Matrix out = w;
  for (std::size_t k = 0; k < w.cols(); ++k) {
    if (rho[k] == 0.0) {
      detail::warn_frozen_col("lagr_update_w");
      continue;
    }
    MultiplierRoot root;
    try {
      root = solve_multiplier(a.row(k), b.row(k), wt.row(k), beta, tol, max_sub);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " (column " + std::to_string(k) + ")");
    }
    if (multipliers) (*multipliers)[k] = root.nu;
    for (std::size_t f = 0; f < w.rows(); ++f) {
      const double num = a(k, f);
      if (w(f, k) == 0.0 || num == 0.0) {
        out(f, k) = 0.0;
        continue;
      }
      const double den = (b(k, f) - root.bound) + root.gap;
      out(f, k) = apply_ratio(w(f, k), num, den, gamma, {f, k}, "lagr_update_w");
    }
  }
  return out;
}

}  // namespace snmf
