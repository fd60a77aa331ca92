#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "snmf/config.hpp"
#include "snmf/matrix.hpp"
#include "snmf/solver.hpp"

namespace snmf {

struct RunReport {
  Method method = Method::MM;
  RegularizerKind regularizer = RegularizerKind::L1;
  double beta = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  /// Constrained objective of the rescaled factors divided by F*N.
  double objective_norm = 0.0;
  double cpu_seconds = 0.0;
  std::size_t iterations = 0;
  RunStatus status = RunStatus::MaxIterReached;
  std::string failure;
};

/// Runs every grid configuration from seeds config.seed, config.seed + 1, ...,
/// config.seed + n_seeds - 1. Configurations that share K and init_sigma see
/// identical initializations for a given seed. Runs are spread over `jobs`
/// threads; the returned order is (grid index, seed) regardless of `jobs`.
/// A failing run is recorded with status Failed and does not stop the batch.
std::vector<RunReport> benchmark(const DataMatrix& v, const std::vector<SolverConfig>& grid,
                                 std::size_t n_seeds, std::size_t jobs = 1);

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

Moments moments(const std::vector<double>& values);

/// Aggregate over the non-failed runs of one (method, regularizer, beta, alpha).
struct SummaryRow {
  Method method = Method::MM;
  RegularizerKind regularizer = RegularizerKind::L1;
  double beta = 0.0;
  double alpha = 0.0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t converged = 0;
  Moments objective_norm;
  Moments cpu_seconds;
  Moments iterations;
  double cpu_total = 0.0;
};

/// Groups in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports);

/// "3.16 (±7E-3)": mean to three significant digits, deviation to one.
std::string format_mean_std(const Moments& m);

}  // namespace snmf
