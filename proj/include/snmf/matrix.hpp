#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "snmf/error.hpp"

namespace snmf {

/// Dense row-major matrix of doubles. Used for the factors and every
/// intermediate of the update rules.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Coordinate-format matrix. Triplets are kept sorted by (row, col) and are
/// unique; the constructor enforces both.
class SparseMatrix {
 public:
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Triplet> entries() const noexcept { return entries_; }

  /// Triplets of row `r`, in column order.
  std::span<const Triplet> row(std::size_t r) const noexcept {
    return {entries_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
  }

  Matrix to_dense() const;
  SparseMatrix transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> entries_;
  std::vector<std::size_t> row_start_;
};

/// Nonnegative input matrix V, stored densely or as sparse triplets.
/// Every stored value is finite and >= 0.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix dense);
  explicit DataMatrix(SparseMatrix sparse);

  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;
  bool is_sparse() const noexcept { return std::holds_alternative<SparseMatrix>(storage_); }

  const Matrix& dense() const;
  const SparseMatrix& sparse() const;

  Matrix to_dense() const;
  DataMatrix transposed() const;

  /// Writes row `r` densely into `out` (size cols()).
  void copy_row(std::size_t r, std::span<double> out) const;

  std::string shape_string() const;

 private:
  std::variant<Matrix, SparseMatrix> storage_;
};

// ---------------------------------------------------------------------------
// Kernels. All loops run in a fixed order: each output entry is accumulated
// over the contracted index in ascending order starting from 0.0, so the
// results are reproducible and mirrored products agree bitwise.

Matrix matmul(const Matrix& a, const Matrix& b);
/// Sparse operands skip their zero entries; the result is bitwise equal to
/// the densified product.
Matrix matmul(const DataMatrix& a, const Matrix& b);
/// aᵀ·b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a·bᵀ without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

enum class EwOp { Mul, Div, Add, Sub };

/// How Div treats a zero denominator. Under ZeroLock a 0/0 entry yields 0
/// (the multiplicative-update convention); nonzero/0 is always an error.
enum class ZeroDivision { Error, ZeroLock };

Matrix ew_combine(const Matrix& a, const Matrix& b, EwOp op,
                  ZeroDivision zero_division = ZeroDivision::Error);

/// Entrywise power. x^0 = 1 for every x, including 0.
Matrix ew_pow(const Matrix& a, double exponent);

std::vector<double> col_sums(const Matrix& a);
std::vector<double> row_sums(const Matrix& a);

bool all_nonnegative(const Matrix& a) noexcept;
bool all_finite(const Matrix& a) noexcept;

}  // namespace snmf
