#include "snmf/solver.hpp"

#include <cmath>
#include <ctime>
#include <random>

#include "snmf/diagnostics.hpp"
#include "snmf/objective.hpp"
#include "snmf/updates_l1.hpp"
#include "snmf/updates_log.hpp"

namespace snmf {

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

bool keeps_unit_norm(Method method) { return method != Method::MM; }

Matrix step_h(const DataMatrix& v, const FactorPair& p, const SolverConfig& c) {
  const bool log = c.regularizer == RegularizerKind::Log;
  switch (c.method) {
    case Method::MM:
      return log ? mm_log_update_h(v, p.w, p.h, c.beta, c.alpha, c.epsilon, c.kappa)
                 : mm_update_h(v, p.w, p.h, c.beta, c.alpha, c.kappa);
    case Method::Heuristic:
      return log ? heur_log_update_h(v, p.w, p.h, c.beta, c.alpha, c.epsilon, c.kappa)
                 : heur_update_h(v, p.w, p.h, c.beta, c.alpha, c.kappa);
    case Method::Lagrangian:
      return lagr_update_h(v, p.w, p.h, c.beta, c.alpha, c.kappa);
  }
  return p.h;
}

Matrix step_w(const DataMatrix& v, const FactorPair& p, const SolverConfig& c) {
  const bool log = c.regularizer == RegularizerKind::Log;
  switch (c.method) {
    case Method::MM:
      return log ? mm_log_update_w(v, p.w, p.h, c.beta, c.alpha, c.epsilon, c.kappa)
                 : mm_update_w(v, p.w, p.h, c.beta, c.alpha, c.kappa);
    case Method::Heuristic:
      return log ? heur_log_update_w(v, p.w, p.h, c.beta, c.alpha, c.epsilon, c.kappa)
                 : heur_update_w(v, p.w, p.h, c.beta, c.alpha, c.kappa);
    case Method::Lagrangian:
      return lagr_update_w(v, p.w, p.h, c.beta, c.alpha, c.kappa);
  }
  return p.w;
}

}  // namespace

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterReached: return "max_iter";
    case RunStatus::Failed: return "failed";
  }
  return "?";
}

FactorPair init_half_normal(std::size_t f, std::size_t n, std::size_t k, std::uint64_t seed,
                            double sigma) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  FactorPair pair{Matrix(f, k), Matrix(k, n)};
  for (double& x : pair.w.values()) x = std::abs(normal(engine));
  for (double& x : pair.h.values()) x = std::abs(normal(engine));
  return pair;
}

bool should_stop(double j_prev, double j_curr, double delta) {
  if (j_curr == 0.0) return true;
  return std::abs(j_prev - j_curr) / std::abs(j_curr) <= delta;
}

FactorPair rescale(const FactorPair& pair) {
  const auto lambda = col_sums(pair.w);
  FactorPair out = pair;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (lambda[k] == 0.0) {
      warn_once("rescale-zero-column", "rescale: all-zero column of W left untouched");
      continue;
    }
    for (std::size_t f = 0; f < out.w.rows(); ++f) out.w(f, k) /= lambda[k];
    for (double& x : out.h.row(k)) x *= lambda[k];
  }
  return out;
}

double max_norm_deviation(const Matrix& w) {
  double worst = 0.0;
  for (const double s : col_sums(w)) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

double monitored_objective(const DataMatrix& v, const FactorPair& pair,
                           const SolverConfig& config) {
  switch (config.method) {
    case Method::MM: return objective(v, pair.w, pair.h, config);
    case Method::Heuristic: return objective_reparametrized(v, pair.w, pair.h, config);
    case Method::Lagrangian: return objective_constrained(v, pair.w, pair.h, config);
  }
  return 0.0;
}

RunResult run(const DataMatrix& v, const SolverConfig& config, const std::optional<FactorPair>& init,
              const IterationObserver& observer) {
  config.validate();
  FactorPair current = init ? *init
                            : init_half_normal(v.rows(), v.cols(), config.rank, config.seed,
                                               config.init_sigma);
  if (current.w.rows() != v.rows() || current.h.cols() != v.cols() ||
      current.w.cols() != config.rank || current.h.rows() != config.rank) {
    throw ConfigError("initial factors W " + current.w.shape_string() + ", H " +
                      current.h.shape_string() + " do not match V " + v.shape_string() +
                      " with K = " + std::to_string(config.rank));
  }
  if (!all_nonnegative(current.w) || !all_nonnegative(current.h) || !all_finite(current.w) ||
      !all_finite(current.h)) {
    throw ConfigError("initial factors must be finite and nonnegative");
  }

  const bool normalized = keeps_unit_norm(config.method);
  if (normalized) current = rescale(current);

  const double start = thread_cpu_seconds();
  RunResult result;
  IterationTrace& trace = result.trace;

  auto record = [&](std::size_t iteration, const FactorPair& pair) {
    const double j = config.diagnostic_rescale ? monitored_objective(v, rescale(pair), config)
                                               : monitored_objective(v, pair, config);
    IterationRecord rec{iteration, j, thread_cpu_seconds() - start, std::nullopt};
    if (normalized) rec.norm_residual = max_norm_deviation(pair.w);
    trace.records.push_back(rec);
    if (observer) observer(rec);
    return j;
  };

  auto fail = [&](std::size_t iteration, const std::string& why) {
    trace.status = RunStatus::Failed;
    trace.failed_at = iteration;
    trace.failure = why;
  };

  double j_prev = 0.0;
  try {
    j_prev = record(0, current);
  } catch (const Error& e) {
    fail(0, e.what());
    result.factors = rescale(current);
    return result;
  }

  trace.status = RunStatus::MaxIterReached;
  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    FactorPair next = current;
    double j = 0.0;
    try {
      next.h = step_h(v, next, config);
      next.w = step_w(v, next, config);
      j = record(it, next);
    } catch (const Error& e) {
      fail(it, e.what());
      break;
    }
    if (!std::isfinite(j)) {
      trace.records.pop_back();
      fail(it, "objective is not finite");
      break;
    }
    current = std::move(next);
    if (should_stop(j_prev, j, config.delta)) {
      trace.status = RunStatus::Converged;
      break;
    }
    j_prev = j;
  }

  result.factors = rescale(current);
  return result;
}

}  // namespace snmf
