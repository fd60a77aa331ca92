#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace snmf {

enum class RegularizerKind { L1, Log };

enum class Method { MM, Heuristic, Lagrangian };

/// Sparsity penalty on H: alpha * ||H||_1 or alpha * sum log(h + epsilon).
struct Penalty {
  RegularizerKind kind = RegularizerKind::L1;
  double alpha = 0.0;
  double epsilon = 0.01;  // Log only
};

struct SolverConfig {
  double beta = 1.0;
  double alpha = 0.0;
  std::size_t rank = 1;
  RegularizerKind regularizer = RegularizerKind::L1;
  Method method = Method::MM;
  double epsilon = 0.01;
  double kappa = 1e-12;
  double delta = 1e-5;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 0;
  double init_sigma = 5.0;
  // Evaluate the traced objective on a rescaled copy of the iterate. The copy
  // never feeds back into the iteration.
  bool diagnostic_rescale = false;

  Penalty penalty() const { return {regularizer, alpha, epsilon}; }

  /// Throws ConfigError when a field is out of range or the
  /// (method, regularizer, beta) combination is unsupported.
  void validate() const;
};

/// Throws ConfigError unless the Lagrangian family supports (regularizer, beta).
void require_lagrangian_supported(RegularizerKind regularizer, double beta);

std::string_view to_string(RegularizerKind kind);
std::string_view to_string(Method method);
/// Accepts the CLI spellings: "l1", "log".
RegularizerKind parse_regularizer(std::string_view text);
/// Accepts the CLI spellings: "mm", "heur", "lagr".
Method parse_method(std::string_view text);

}  // namespace snmf
