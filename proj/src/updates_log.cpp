#include "snmf/updates_log.hpp"

#include "snmf/updates_l1.hpp"
#include "update_common.hpp"

namespace snmf {

using detail::apply_ratio;

Matrix mm_log_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                       double alpha, double epsilon, double kappa) {
  detail::require_update_shapes(v, w, h, "mm_log_update_h");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix p = matmul_tn(w, s);
  const Matrix q = matmul_tn(w, t);
  const auto upsilon = col_sums(w);
  const double gamma = gamma_exponent(beta);
  Matrix out = h;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    if (upsilon[k] == 0.0) {
      detail::warn_frozen_row("mm_log_update_h");
      continue;
    }
    const double floor = epsilon / upsilon[k];
    for (std::size_t n = 0; n < h.cols(); ++n) {
      const double den = q(k, n) + alpha / (h(k, n) + floor);
      out(k, n) = apply_ratio(h(k, n), p(k, n), den, gamma, {k, n}, "mm_log_update_h");
    }
  }
  return out;
}

Matrix mm_log_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                       double alpha, double epsilon, double kappa) {
  detail::require_update_shapes(v, w, h, "mm_log_update_w");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix a = matmul_nt(s, h);
  const Matrix b = matmul_nt(t, h);
  const auto upsilon = col_sums(w);
  const auto rho = row_sums(h);
  const double gamma = gamma_exponent(beta);

  std::vector<double> penalty(w.cols(), 0.0);
  for (std::size_t k = 0; k < w.cols(); ++k) {
    for (const double hkn : h.row(k)) {
      if (hkn > 0.0) penalty[k] += alpha / (upsilon[k] + epsilon / hkn);
    }
  }

  Matrix out = w;
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t k = 0; k < w.cols(); ++k) {
      if (rho[k] == 0.0) {
        detail::warn_frozen_col("mm_log_update_w");
        continue;
      }
      out(f, k) = apply_ratio(w(f, k), a(f, k), b(f, k) + penalty[k], gamma, {f, k},
                              "mm_log_update_w");
    }
  }
  return out;
}

Matrix heur_log_update_h(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                         double alpha, double epsilon, double kappa) {
  detail::require_update_shapes(v, w, h, "heur_log_update_h");
  const auto [s, t] = compute_ratio_parts(v, w, h, beta, kappa);
  const Matrix p = matmul_tn(w, s);
  const Matrix q = matmul_tn(w, t);
  const auto lambda = col_sums(w);
  Matrix out = h;
  for (std::size_t k = 0; k < h.rows(); ++k) {
    if (lambda[k] == 0.0) {
      detail::warn_frozen_row("heur_log_update_h");
      continue;
    }
    for (std::size_t n = 0; n < h.cols(); ++n) {
      const double den = q(k, n) + alpha / (h(k, n) + epsilon);
      out(k, n) = apply_ratio(h(k, n), p(k, n), den, 1.0, {k, n}, "heur_log_update_h");
    }
  }
  return out;
}

Matrix heur_log_update_w(const DataMatrix& v, const Matrix& w, const Matrix& h, double beta,
                         double alpha, double /*epsilon*/, double kappa) {
  return heur_update_w(v, w, h, beta, alpha, kappa);
}

}  // namespace snmf
