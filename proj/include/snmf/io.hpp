#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "snmf/benchmark.hpp"
#include "snmf/matrix.hpp"
#include "snmf/solver.hpp"

namespace snmf {

// File formats
//
//   dense-csv     one matrix row per line, values separated by commas.
//   sparse-coord  header "rows cols nnz", then nnz lines "i j v" with 1-based
//                 indices. Blank lines and lines starting with '%' or '#' are
//                 skipped.
//
// Values must be finite and >= 0. Numbers are written in shortest round-trip form.

enum class MatrixFormat { DenseCsv, SparseCoord };

MatrixFormat parse_matrix_format(std::string_view text);  // "dense-csv" | "sparse-coord"

/// Throws ParseError (with line number) on malformed content, negative
/// values, duplicate sparse entries or an empty file; Error when the file
/// cannot be opened.
DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);

/// Dense CSV reader for factor matrices.
Matrix load_dense(const std::filesystem::path& path);

DataMatrix parse_dense_csv(std::string_view text);
DataMatrix parse_sparse_coord(std::string_view text);

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
void write_sparse_coord(const SparseMatrix& m, const std::filesystem::path& path);

enum class SynthMode {
  Direct,   // V drawn entrywise half-normal
  Product,  // V = W_true H_true from half-normal factors
};

struct SynthInstance {
  DataMatrix v;
  std::optional<FactorPair> truth;  // Product mode only
};

/// Deterministic per seed. Direct mode draws V from a generator seeded with
/// (seed, F, N) so it never shares a stream with init_half_normal(seed).
/// Product mode uses init_half_normal(F, N, k_true, seed, sigma) as the truth.
/// `noise`, when set, adds entrywise half-normal noise of that deviation.
SynthInstance synth_instance(std::size_t f, std::size_t n, std::size_t k_true, std::uint64_t seed,
                             double sigma, SynthMode mode,
                             std::optional<double> noise = std::nullopt);

enum class ReportLayout { Csv, Json };

/// CSV: a header, one row per run, then one "# summary,..." line per group.
/// JSON: {"runs": [...], "summary": [...]}.
void write_report(const std::vector<RunReport>& reports, const std::filesystem::path& path,
                  ReportLayout layout);

/// Columns iteration, objective, cpu_seconds, norm_residual (empty for MM).
void write_trace(const IterationTrace& trace, const std::filesystem::path& path);

}  // namespace snmf
