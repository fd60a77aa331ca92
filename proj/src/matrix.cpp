#include "snmf/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace snmf {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

std::string shape_of(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ShapeError("Matrix: " + std::to_string(values_.size()) + " values for shape " +
                     shape_of(rows, cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("Matrix: ragged initializer list");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

std::string Matrix::shape_string() const { return shape_of(rows_, cols_); }

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), row_start_(rows + 1, 0) {
  for (const auto& t : entries_) {
    if (t.row >= rows_ || t.col >= cols_) {
      throw ShapeError("SparseMatrix: entry " + to_string(Index{t.row, t.col}) +
                       " outside shape " + shape_of(rows_, cols_));
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].row == entries_[i - 1].row && entries_[i].col == entries_[i - 1].col) {
      throw DomainError("SparseMatrix: duplicate entry", Index{entries_[i].row, entries_[i].col});
    }
  }
  for (const auto& t : entries_) ++row_start_[t.row + 1];
  for (std::size_t r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];
}

Matrix SparseMatrix::to_dense() const {
  Matrix out(rows_, cols_);
  for (const auto& t : entries_) out(t.row, t.col) = t.value;
  return out;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> flipped;
  flipped.reserve(entries_.size());
  for (const auto& t : entries_) flipped.push_back({t.col, t.row, t.value});
  return SparseMatrix(cols_, rows_, std::move(flipped));
}

// ---------------------------------------------------------------------------
// DataMatrix

DataMatrix::DataMatrix(Matrix dense) : storage_(std::move(dense)) {
  const auto& m = std::get<Matrix>(storage_);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("DataMatrix: entries must be finite and nonnegative", Index{r, c});
      }
    }
  }
}

DataMatrix::DataMatrix(SparseMatrix sparse) : storage_(std::move(sparse)) {
  for (const auto& t : std::get<SparseMatrix>(storage_).entries()) {
    if (!std::isfinite(t.value) || t.value < 0.0) {
      throw DomainError("DataMatrix: entries must be finite and nonnegative", Index{t.row, t.col});
    }
  }
}

std::size_t DataMatrix::rows() const noexcept {
  return std::visit([](const auto& m) { return m.rows(); }, storage_);
}

std::size_t DataMatrix::cols() const noexcept {
  return std::visit([](const auto& m) { return m.cols(); }, storage_);
}

const Matrix& DataMatrix::dense() const {
  if (is_sparse()) throw Error("DataMatrix: dense() called on sparse storage");
  return std::get<Matrix>(storage_);
}

const SparseMatrix& DataMatrix::sparse() const {
  if (!is_sparse()) throw Error("DataMatrix: sparse() called on dense storage");
  return std::get<SparseMatrix>(storage_);
}

Matrix DataMatrix::to_dense() const {
  if (is_sparse()) return std::get<SparseMatrix>(storage_).to_dense();
  return std::get<Matrix>(storage_);
}

DataMatrix DataMatrix::transposed() const {
  if (is_sparse()) return DataMatrix(std::get<SparseMatrix>(storage_).transposed());
  return DataMatrix(transpose(std::get<Matrix>(storage_)));
}

void DataMatrix::copy_row(std::size_t r, std::span<double> out) const {
  if (is_sparse()) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : std::get<SparseMatrix>(storage_).row(r)) out[t.col] = t.value;
  } else {
    const auto src = std::get<Matrix>(storage_).row(r);
    std::copy(src.begin(), src.end(), out.begin());
  }
}

std::string DataMatrix::shape_string() const { return shape_of(rows(), cols()); }

// ---------------------------------------------------------------------------
// Kernels

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + a.shape_string() + " * " +
                     b.shape_string());
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      const auto brow = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += ail * brow[j];
    }
  }
  return c;
}

Matrix matmul(const DataMatrix& a, const Matrix& b) {
  if (!a.is_sparse()) return matmul(a.dense(), b);
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + a.shape_string() + " * " +
                     b.shape_string());
  }
  const auto& s = a.sparse();
  Matrix c(s.rows(), b.cols());
  for (const auto& t : s.entries()) {
    auto out = c.row(t.row);
    const auto brow = b.row(t.col);
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] += t.value * brow[j];
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: row counts differ, " + a.shape_string() + "^T * " +
                     b.shape_string());
  }
  Matrix c(a.cols(), b.cols());
  for (std::size_t m = 0; m < a.rows(); ++m) {
    const auto arow = a.row(m);
    const auto brow = b.row(m);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double amk = arow[k];
      auto out = c.row(k);
      for (std::size_t n = 0; n < b.cols(); ++n) out[n] += amk * brow[n];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: column counts differ, " + a.shape_string() + " * " +
                     b.shape_string() + "^T");
  }
  Matrix c(a.rows(), b.rows());
  for (std::size_t m = 0; m < a.rows(); ++m) {
    const auto arow = a.row(m);
    for (std::size_t k = 0; k < b.rows(); ++k) {
      const auto brow = b.row(k);
      double acc = 0.0;
      for (std::size_t n = 0; n < a.cols(); ++n) acc += arow[n] * brow[n];
      c(m, k) = acc;
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  }
  return t;
}

Matrix ew_combine(const Matrix& a, const Matrix& b, EwOp op, ZeroDivision zero_division) {
  require_same_shape(a, b, "ew_combine");
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double x = a(r, c);
      const double y = b(r, c);
      switch (op) {
        case EwOp::Mul: out(r, c) = x * y; break;
        case EwOp::Add: out(r, c) = x + y; break;
        case EwOp::Sub: out(r, c) = x - y; break;
        case EwOp::Div:
          if (y == 0.0) {
            if (x == 0.0 && zero_division == ZeroDivision::ZeroLock) {
              out(r, c) = 0.0;
            } else {
              throw DomainError("ew_combine: division by zero", Index{r, c});
            }
          } else {
            out(r, c) = x / y;
          }
          break;
      }
    }
  }
  return out;
}

Matrix ew_pow(const Matrix& a, double exponent) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double x = a(r, c);
      if (x < 0.0) throw DomainError("ew_pow: negative base", Index{r, c});
      if (exponent == 0.0) {
        out(r, c) = 1.0;
      } else if (x == 0.0 && exponent < 0.0) {
        throw DomainError("ew_pow: zero raised to a negative power", Index{r, c});
      } else {
        out(r, c) = std::pow(x, exponent);
      }
    }
  }
  return out;
}

std::vector<double> col_sums(const Matrix& a) {
  std::vector<double> sums(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) sums[c] += row[c];
  }
  return sums;
}

std::vector<double> row_sums(const Matrix& a) {
  std::vector<double> sums(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (const double x : a.row(r)) acc += x;
    sums[r] = acc;
  }
  return sums;
}

bool all_nonnegative(const Matrix& a) noexcept {
  return std::all_of(a.values().begin(), a.values().end(), [](double x) { return x >= 0.0; });
}

bool all_finite(const Matrix& a) noexcept {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace snmf
