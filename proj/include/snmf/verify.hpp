#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "snmf/config.hpp"
#include "snmf/matrix.hpp"
#include "snmf/oracle.hpp"
#include "snmf/solver.hpp"

namespace snmf {

enum class Suite { Majorization, Descent, Kkt, CrossMethod };

/// "majorization", "descent", "kkt", "cross-method".
Suite parse_suite(std::string_view text);
std::string_view to_string(Suite suite);

struct VerifyResult {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;  // first few violations, for replay
};

/// Runs `trials` randomized trials of one suite. Trial t draws its instance
/// from a generator seeded with (seed, t), so any single trial can be replayed.
VerifyResult run_suite(Suite suite, std::size_t trials, std::uint64_t seed);

// Building blocks shared with the tests.

struct Instance {
  Matrix v;
  Matrix w;
  Matrix h;
};

/// Dimensions drawn from [1, max_dim]; entries of V uniform on [0.05, 3],
/// factors uniform on [0.1, 2].
Instance random_instance(std::mt19937_64& engine, std::size_t max_dim = 6);

/// Largest entrywise relative difference between the closed-form MM update of
/// the anchor side and aux_argmin of the materialized auxiliary function.
double closed_form_gap(const AuxEvalContext& ctx);

struct KktReport {
  double max_residual = 0.0;  // max |dJ/dx| over strictly positive coordinates
  double bound = 0.0;         // 1e-3 (1 + |J|)
  std::size_t checked = 0;    // coordinates above 1e-3 times their factor's max
  bool ok() const noexcept { return max_residual <= bound; }
};

/// Central-difference gradient of the scale-invariant objective at the
/// given factors, restricted to strictly positive coordinates.
KktReport kkt_residual(const DataMatrix& v, const FactorPair& pair, const SolverConfig& config);

/// Relative difference max |a - b| / max(|a|, |b|), entrywise.
double max_relative_difference(const Matrix& a, const Matrix& b);

}  // namespace snmf
