#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snmf/config.hpp"
#include "snmf/matrix.hpp"

namespace snmf {

struct FactorPair {
  Matrix w;  // F x K
  Matrix h;  // K x N
};

enum class RunStatus { Converged, MaxIterReached, Failed };

std::string_view to_string(RunStatus status);

struct IterationRecord {
  std::size_t iteration = 0;
  double objective = 0.0;
  /// Thread CPU time since the start of the run, cumulative.
  double cpu_seconds = 0.0;
  /// max_k | ||w_k||_1 - 1 |, reported by the normalized families only.
  std::optional<double> norm_residual;
};

struct IterationTrace {
  std::vector<IterationRecord> records;  // records[0] is the initialization
  RunStatus status = RunStatus::MaxIterReached;
  std::string failure;  // empty unless Failed
  std::size_t failed_at = 0;

  /// Number of completed (H, W) sweeps.
  std::size_t iterations() const noexcept { return records.empty() ? 0 : records.back().iteration; }
};

struct RunResult {
  FactorPair factors;
  IterationTrace trace;
};

/// Entries |g| with g ~ Normal(0, sigma^2), drawn from std::mt19937_64 seeded
/// with `seed`: all of W in row-major order, then all of H.
FactorPair init_half_normal(std::size_t f, std::size_t n, std::size_t k, std::uint64_t seed,
                            double sigma);

/// |j_prev - j_curr| / |j_curr| <= delta. A zero current objective counts as converged.
bool should_stop(double j_prev, double j_curr, double delta);

/// (W Lambda^-1, Lambda H) with lambda_k = ||w_k||_1. All-zero columns are
/// left untouched with a warning.
FactorPair rescale(const FactorPair& pair);

/// max_k | ||w_k||_1 - 1 | over the columns of W.
double max_norm_deviation(const Matrix& w);

/// The objective a method monitors: the scale-invariant one for MM, the
/// reparametrized one for the heuristic, the constrained one for the
/// Lagrangian family.
double monitored_objective(const DataMatrix& v, const FactorPair& pair, const SolverConfig& config);

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Alternates one H step and one W step of the family selected by
/// (config.method, config.regularizer) until should_stop or max_iter.
/// Throws ConfigError for an unsupported configuration or shapes that do not
/// match V. Failures during iteration are reported through the trace; the
/// returned factors are then the last good iterate. The returned factors are
/// always rescaled to unit-norm columns of W.
RunResult run(const DataMatrix& v, const SolverConfig& config,
              const std::optional<FactorPair>& init = std::nullopt,
              const IterationObserver& observer = {});

}  // namespace snmf
