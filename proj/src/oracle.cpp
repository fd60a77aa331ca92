#include "snmf/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "snmf/objective.hpp"

namespace snmf {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

bool is_h(const AuxEvalContext& ctx) { return ctx.side == FactorSide::H; }

void require_positive(const Matrix& x, const char* what) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (!(x(r, c) > 0.0) || !std::isfinite(x(r, c))) {
        throw DomainError(std::string(what) + ": entries must be positive and finite", Index{r, c});
      }
    }
  }
}

void require_like_anchor(const Matrix& x, const AuxEvalContext& ctx, const char* what) {
  if (x.rows() != ctx.anchor.rows() || x.cols() != ctx.anchor.cols()) {
    throw ShapeError(std::string(what) + ": argument " + x.shape_string() + " vs anchor " +
                     ctx.anchor.shape_string());
  }
  require_positive(x, what);
}

// Data-fit auxiliary function, one entry, per beta regime. r = x / x~.
double g_entry(double x, double xt, double p, double q, double beta) {
  const double r = x / xt;
  if (beta < 1.0) return q * x - p * xt * std::pow(r, beta - 1.0) / (beta - 1.0);
  if (beta == 1.0) return q * x - p * xt * std::log(r);
  if (beta <= 2.0) {
    return q * xt * std::pow(r, beta) / beta - p * xt * std::pow(r, beta - 1.0) / (beta - 1.0);
  }
  return q * xt * std::pow(r, beta) / beta - p * x;
}

double g_entry_derivative(double x, double xt, double p, double q, double beta) {
  const double r = x / xt;
  if (beta < 1.0) return q - p * std::pow(r, beta - 2.0);
  if (beta == 1.0) return q - p / r;
  if (beta <= 2.0) return q * std::pow(r, beta - 1.0) - p * std::pow(r, beta - 2.0);
  return q * std::pow(r, beta - 1.0) - p;
}

// Regularizer majorizer, one entry, without alpha: linear below beta = 1,
// monomial above.
double reg_entry(double x, double xt, double c, double beta) {
  if (beta <= 1.0) return c * x;
  return c * (xt / beta) * std::pow(x / xt, beta);
}

double reg_entry_derivative(double x, double xt, double c, double beta) {
  if (beta <= 1.0) return c;
  return c * std::pow(x / xt, beta - 1.0);
}

double entry_value(double x, std::size_t i, std::size_t j, const AuxEvalContext& ctx) {
  const double xt = ctx.anchor(i, j);
  return g_entry(x, xt, ctx.p(i, j), ctx.q(i, j), ctx.beta) +
         ctx.penalty.alpha * reg_entry(x, xt, ctx.coef(i, j), ctx.beta);
}

double entry_derivative(double x, std::size_t i, std::size_t j, const AuxEvalContext& ctx) {
  const double xt = ctx.anchor(i, j);
  return g_entry_derivative(x, xt, ctx.p(i, j), ctx.q(i, j), ctx.beta) +
         ctx.penalty.alpha * reg_entry_derivative(x, xt, ctx.coef(i, j), ctx.beta);
}

double sum_reg(const Matrix& x, const AuxEvalContext& ctx) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      total += reg_entry(x(i, j), ctx.anchor(i, j), ctx.coef(i, j), ctx.beta);
    }
  }
  return total;
}

double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

AuxEvalContext make_context(FactorSide side, const Matrix& v, const Matrix& anchor,
                            const Matrix& fixed, double beta, const Penalty& penalty,
                            double kappa) {
  require_positive(anchor, "make_context");
  const Matrix& w = side == FactorSide::H ? fixed : anchor;
  const Matrix& h = side == FactorSide::H ? anchor : fixed;
  if (w.rows() != v.rows() || h.cols() != v.cols() || w.cols() != h.rows()) {
    throw ShapeError("make_context: V " + v.shape_string() + " vs W " + w.shape_string() +
                     " * H " + h.shape_string());
  }
  const std::size_t nf = v.rows();
  const std::size_t nn = v.cols();
  const std::size_t nk = w.cols();

  // S~ and T~ entry by entry.
  Matrix s(nf, nn);
  Matrix t(nf, nn);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t n = 0; n < nn; ++n) {
      double y = 0.0;
      for (std::size_t k = 0; k < nk; ++k) y += w(f, k) * h(k, n);
      y += kappa;
      s(f, n) = (v(f, n) + kappa) * std::pow(y, beta - 2.0);
      t(f, n) = std::pow(y, beta - 1.0);
    }
  }

  std::vector<double> lambda(nk, 0.0);
  std::vector<double> rho(nk, 0.0);
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t f = 0; f < nf; ++f) lambda[k] += w(f, k);
    for (std::size_t n = 0; n < nn; ++n) rho[k] += h(k, n);
  }

  AuxEvalContext ctx{side, anchor, fixed, v, beta, penalty, kappa, {}, {}, {}};
  ctx.p = Matrix(anchor.rows(), anchor.cols());
  ctx.q = Matrix(anchor.rows(), anchor.cols());
  ctx.coef = Matrix(anchor.rows(), anchor.cols());
  const bool log = penalty.kind == RegularizerKind::Log;
  const double eps = penalty.epsilon;

  if (side == FactorSide::H) {
    for (std::size_t k = 0; k < nk; ++k) {
      for (std::size_t n = 0; n < nn; ++n) {
        for (std::size_t f = 0; f < nf; ++f) {
          ctx.p(k, n) += w(f, k) * s(f, n);
          ctx.q(k, n) += w(f, k) * t(f, n);
        }
        ctx.coef(k, n) = log ? 1.0 / (h(k, n) + eps / lambda[k]) : lambda[k];
      }
    }
  } else {
    std::vector<double> c(nk, 0.0);
    for (std::size_t k = 0; k < nk; ++k) {
      if (!log) {
        c[k] = rho[k];
        continue;
      }
      for (std::size_t n = 0; n < nn; ++n) {
        if (h(k, n) > 0.0) c[k] += 1.0 / (lambda[k] + eps / h(k, n));
      }
    }
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t n = 0; n < nn; ++n) {
          ctx.p(f, k) += s(f, n) * h(k, n);
          ctx.q(f, k) += t(f, n) * h(k, n);
        }
        ctx.coef(f, k) = c[k];
      }
    }
  }
  return ctx;
}

double g_beta(const Matrix& x, const AuxEvalContext& ctx) {
  require_like_anchor(x, ctx, "g_beta");
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      total += g_entry(x(i, j), ctx.anchor(i, j), ctx.p(i, j), ctx.q(i, j), ctx.beta);
    }
  }
  return total;
}

double g_s_l1(const Matrix& x, const AuxEvalContext& ctx) {
  if (ctx.penalty.kind != RegularizerKind::L1) {
    throw ConfigError("g_s_l1: context carries a log regularizer");
  }
  if (!(ctx.beta > 1.0)) {
    throw ConfigError("g_s_l1: the l1 penalty is majorized only for beta > 1; use it exactly");
  }
  require_like_anchor(x, ctx, "g_s_l1");
  return sum_reg(x, ctx);
}

double g_s_log(const Matrix& h, const AuxEvalContext& ctx) {
  if (ctx.penalty.kind != RegularizerKind::Log || !is_h(ctx)) {
    throw ConfigError("g_s_log: needs a log regularizer on the H side");
  }
  require_like_anchor(h, ctx, "g_s_log");
  return sum_reg(h, ctx);
}

double f_r_log(const Matrix& w, const AuxEvalContext& ctx) {
  if (ctx.penalty.kind != RegularizerKind::Log || is_h(ctx)) {
    throw ConfigError("f_r_log: needs a log regularizer on the W side");
  }
  require_like_anchor(w, ctx, "f_r_log");
  return sum_reg(w, ctx);
}

double aux_value(const Matrix& x, const AuxEvalContext& ctx) {
  double reg = 0.0;
  if (ctx.penalty.kind == RegularizerKind::Log) {
    reg = is_h(ctx) ? g_s_log(x, ctx) : f_r_log(x, ctx);
  } else if (ctx.beta > 1.0) {
    reg = g_s_l1(x, ctx);
  } else {
    require_like_anchor(x, ctx, "aux_value");
    reg = sum_reg(x, ctx);  // exact: sum coef * x
  }
  return g_beta(x, ctx) + ctx.penalty.alpha * reg;
}

double target_value(const Matrix& x, const AuxEvalContext& ctx) {
  const DataMatrix v(ctx.v);
  return is_h(ctx) ? objective(v, ctx.fixed, x, ctx.beta, ctx.penalty, ctx.kappa)
                   : objective(v, x, ctx.fixed, ctx.beta, ctx.penalty, ctx.kappa);
}

Matrix aux_gradient(const Matrix& x, const AuxEvalContext& ctx) {
  require_like_anchor(x, ctx, "aux_gradient");
  Matrix g(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) g(i, j) = entry_derivative(x(i, j), i, j, ctx);
  }
  return g;
}

Matrix aux_argmin(const AuxEvalContext& ctx) {
  Matrix out(ctx.anchor.rows(), ctx.anchor.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const double xt = ctx.anchor(i, j);
      double lo = 1e-8 * xt;
      double hi = 1e8 * xt;
      while (hi / lo - 1.0 > 1e-13) {
        const double mid = std::sqrt(lo * hi);
        if (entry_derivative(mid, i, j, ctx) > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      out(i, j) = std::sqrt(lo * hi);
    }
  }
  return out;
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& fn, const Matrix& x,
                   double rel_step) {
  Matrix g(x.rows(), x.cols());
  Matrix probe = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double step = rel_step * (x(i, j) + rel_step);
      probe(i, j) = x(i, j) + step;
      const double up = fn(probe);
      probe(i, j) = x(i, j) - step;
      const double down = fn(probe);
      probe(i, j) = x(i, j);
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw DomainError("fd_gradient: objective not finite around the probe", Index{i, j});
      }
      g(i, j) = (up - down) / (2.0 * step);
    }
  }
  return g;
}

double aux_increment(const Matrix& x, const AuxEvalContext& ctx) {
  const double beta = ctx.beta;
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double xt = ctx.anchor(i, j);
      const double dx = x(i, j) - xt;
      const double lr = std::log1p(dx / xt);
      const double p = ctx.p(i, j);
      const double q = ctx.q(i, j);
      double g = 0.0;
      if (beta < 1.0) {
        g = q * dx - p * xt * std::expm1((beta - 1.0) * lr) / (beta - 1.0);
      } else if (beta == 1.0) {
        g = q * dx - p * xt * lr;
      } else if (beta <= 2.0) {
        g = q * xt * std::expm1(beta * lr) / beta -
            p * xt * std::expm1((beta - 1.0) * lr) / (beta - 1.0);
      } else {
        g = q * xt * std::expm1(beta * lr) / beta - p * dx;
      }
      const double c = ctx.coef(i, j);
      const double reg = beta <= 1.0 ? c * dx : c * (xt / beta) * std::expm1(beta * lr);
      total += g + ctx.penalty.alpha * reg;
    }
  }
  return total;
}

double target_increment(const Matrix& x, const AuxEvalContext& ctx) {
  const bool side_h = is_h(ctx);
  const Matrix& w = side_h ? ctx.fixed : ctx.anchor;
  const Matrix& h = side_h ? ctx.anchor : ctx.fixed;
  Matrix dw(w.rows(), w.cols());
  Matrix dh(h.rows(), h.cols());
  Matrix& d = side_h ? dh : dw;
  for (std::size_t i = 0; i < d.size(); ++i) d.values()[i] = x.values()[i] - ctx.anchor.values()[i];

  const double beta = ctx.beta;
  double fit = 0.0;
  for (std::size_t f = 0; f < w.rows(); ++f) {
    for (std::size_t n = 0; n < h.cols(); ++n) {
      double y = ctx.kappa;
      double dy = 0.0;
      for (std::size_t k = 0; k < w.cols(); ++k) {
        y += w(f, k) * h(k, n);
        dy += side_h ? w(f, k) * dh(k, n) : dw(f, k) * h(k, n);
      }
      const double v = ctx.v(f, n) + ctx.kappa;
      const double u = dy / y;
      const double l = std::log1p(u);
      if (beta == 1.0) {
        fit += dy - v * l;
      } else if (beta == 0.0) {
        fit += -(v / y) * u / (1.0 + u) + l;
      } else {
        fit += std::pow(y, beta) * std::expm1(beta * l) / beta -
               v * std::pow(y, beta - 1.0) * std::expm1((beta - 1.0) * l) / (beta - 1.0);
      }
    }
  }
  if (ctx.penalty.alpha == 0.0) return fit;

  double reg = 0.0;
  for (std::size_t k = 0; k < w.cols(); ++k) {
    double lambda = 0.0;
    double dlambda = 0.0;
    for (std::size_t f = 0; f < w.rows(); ++f) {
      lambda += w(f, k);
      dlambda += dw(f, k);
    }
    for (std::size_t n = 0; n < h.cols(); ++n) {
      // (lambda + dlambda)(h + dh) - lambda h, with one of the two increments zero.
      const double dprod = lambda * dh(k, n) + dlambda * h(k, n);
      reg += ctx.penalty.kind == RegularizerKind::L1
                 ? dprod
                 : std::log1p(dprod / (lambda * h(k, n) + ctx.penalty.epsilon));
    }
  }
  return fit + ctx.penalty.alpha * reg;
}

PropertyReport check_mm_properties(const AuxEvalContext& ctx, std::size_t n_samples,
                                   std::uint64_t seed) {
  PropertyReport report;
  report.seed = seed;
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> log_spread(-1.5, 1.5);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Matrix& anchor = ctx.anchor;
  const double g_anchor = aux_value(anchor, ctx);
  const double c_anchor = target_value(anchor, ctx);

  auto note = [&](const std::string& what) {
    if (report.first_failure.empty()) {
      std::ostringstream msg;
      msg << what << " (seed " << seed << ", sample " << report.samples << ")";
      report.first_failure = msg.str();
    }
  };

  for (std::size_t sample = 0; sample < n_samples; ++sample) {
    Matrix x = anchor;
    for (double& e : x.values()) e *= std::exp(log_spread(engine));

    // P1: majorization in difference form.
    const double g_diff = aux_value(x, ctx) - g_anchor;
    const double c_diff = target_value(x, ctx) - c_anchor;
    const double excess = c_diff - g_diff;
    report.p1_worst = std::max(report.p1_worst, excess);
    if (excess > 1e-9) {
      ++report.p1_violations;
      note("P1: auxiliary difference below target difference by " + sci(excess));
    }

    // P2 and P4 along a random direction through the anchor.
    Matrix dir = anchor;
    for (double& e : dir.values()) e *= normal(engine);
    auto along = [&](double t) {
      Matrix y = anchor;
      for (std::size_t i = 0; i < y.size(); ++i) y.values()[i] += t * dir.values()[i];
      return y;
    };
    const Matrix near = along(1e-8);
    const double tight = std::abs(aux_increment(near, ctx) - target_increment(near, ctx));
    report.p2_gap = std::max(report.p2_gap, tight);

    const double t = 1e-5;
    const Matrix up = along(t);
    const Matrix down = along(-t);
    const double dg = (aux_value(up, ctx) - aux_value(down, ctx)) / (2.0 * t);
    const double dc = (target_value(up, ctx) - target_value(down, ctx)) / (2.0 * t);
    const double p4 = relative_gap(dg, dc);
    report.p4_worst = std::max(report.p4_worst, p4);
    if (p4 > 1e-5) {
      ++report.p4_violations;
      note("P4: directional derivatives differ, relative " + sci(p4));
    }

    // P3: the per-entry derivative is unchanged when (x, x~) are scaled jointly.
    // Central differences of the separable entry function, p, q, coef fixed.
    const double c = std::exp(log_spread(engine));
    AuxEvalContext scaled = ctx;
    for (double& e : scaled.anchor.values()) e *= c;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        auto fd = [](const AuxEvalContext& k, double at, std::size_t r, std::size_t s) {
          const double step = 1e-5 * at;
          return (entry_value(at + step, r, s, k) - entry_value(at - step, r, s, k)) /
                 (2.0 * step);
        };
        const double g1 = fd(ctx, x(i, j), i, j);
        const double g2 = fd(scaled, c * x(i, j), i, j);
        const double p3 = std::abs(g1 - g2) / std::max({std::abs(g1), std::abs(g2), 1e-12});
        report.p3_worst = std::max(report.p3_worst, p3);
        if (p3 > 1e-6) {
          ++report.p3_violations;
          note("P3: gradient changes under joint rescaling, relative " + sci(p3));
        }

        // P5: curvature of the separable entry function.
        const double step = 1e-4 * x(i, j);
        const double curv = (entry_derivative(x(i, j) + step, i, j, ctx) -
                             entry_derivative(x(i, j) - step, i, j, ctx)) /
                            (2.0 * step);
        if (!(curv > 0.0)) {
          ++report.p5_violations;
          note("P5: nonpositive curvature " + sci(curv));
        }
      }
    }
    ++report.samples;
  }
  if (report.p2_gap > 1e-12) note("P2: gap " + sci(report.p2_gap) + " near the anchor");
  return report;
}

}  // namespace snmf
