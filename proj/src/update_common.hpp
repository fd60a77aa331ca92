#pragma once

#include <cmath>
#include <string>

#include "snmf/diagnostics.hpp"
#include "snmf/matrix.hpp"

namespace snmf::detail {

inline void require_update_shapes(const DataMatrix& v, const Matrix& w, const Matrix& h,
                                  const char* rule) {
  if (w.rows() != v.rows() || h.cols() != v.cols() || w.cols() != h.rows()) {
    throw ShapeError(std::string(rule) + ": V " + v.shape_string() + " does not match W " +
                     w.shape_string() + " * H " + h.shape_string());
  }
}

// x * (num/den)^gamma with the zero-locking conventions: x == 0 stays 0 and
// 0/0 counts as 0.
inline double apply_ratio(double x, double num, double den, double gamma, Index where,
                          const char* rule) {
  if (x == 0.0) return 0.0;
  if (den == 0.0) {
    if (num == 0.0) return 0.0;
    throw DomainError(std::string(rule) + ": zero denominator with nonzero numerator", where);
  }
  const double ratio = num / den;
  if (!std::isfinite(ratio) || ratio < 0.0) {
    throw DomainError(std::string(rule) + ": non-finite or negative update ratio", where);
  }
  const double next = gamma == 1.0 ? x * ratio : x * std::pow(ratio, gamma);
  if (!std::isfinite(next)) {
    throw DomainError(std::string(rule) + ": update overflowed", where);
  }
  return next;
}

inline void warn_frozen_row(const char* rule) {
  warn_once(std::string("frozen-row:") + rule,
            std::string(rule) + ": all-zero column of W, matching row of H left unchanged");
}

inline void warn_frozen_col(const char* rule) {
  warn_once(std::string("frozen-col:") + rule,
            std::string(rule) + ": all-zero row of H, matching column of W left unchanged");
}

}  // namespace snmf::detail
