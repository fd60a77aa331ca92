#include <doctest.h>

#include <random>

#include "snmf/matrix.hpp"

using namespace snmf;

TEST_SUITE("matrix") {

TEST_CASE("matmul by identity and by hand") {
  const Matrix b{{1.5, 2.0, 0.0}, {4.0, 0.25, 7.0}};
  CHECK(matmul(Matrix{{1, 0}, {0, 1}}, b) == b);
  CHECK(matmul(Matrix{{1, 2}, {3, 4}}, Matrix{{1}, {1}}) == Matrix{{3}, {7}});
  CHECK(matmul(Matrix(3, 2), b) == Matrix(3, 3));
}

TEST_CASE("matmul rejects mismatched shapes and names both") {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string what = e.what();
    CHECK(what.find("2x3") != std::string::npos);
  }
}

TEST_CASE("transposed products mirror the plain product") {
  std::mt19937_64 engine(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Matrix a(4, 3), b(4, 5), c(3, 5);
  for (double& x : a.values()) x = u(engine);
  for (double& x : b.values()) x = u(engine);
  for (double& x : c.values()) x = u(engine);
  CHECK(matmul_tn(a, b) == matmul(transpose(a), b));
  CHECK(matmul_nt(b, c) == matmul(b, transpose(c)));
}

TEST_CASE("sparse data matrix products equal dense bitwise") {
  std::mt19937_64 engine(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::bernoulli_distribution keep(0.3);
  Matrix dense(7, 6);
  std::vector<Triplet> entries;
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      if (keep(engine)) {
        dense(r, c) = u(engine);
        entries.push_back({r, c, dense(r, c)});
      }
    }
  }
  Matrix b(6, 4);
  for (double& x : b.values()) x = u(engine);
  const DataMatrix ds(SparseMatrix(7, 6, entries));
  const DataMatrix dd(dense);
  CHECK(ds.is_sparse());
  CHECK(ds.to_dense() == dense);
  CHECK(matmul(ds, b) == matmul(dd, b));
  CHECK(matmul(ds, b) == matmul(dense, b));
  CHECK(ds.transposed().to_dense() == transpose(dense));
}

TEST_CASE("sparse constructor enforces bounds and uniqueness") {
  CHECK_THROWS_AS(SparseMatrix(2, 2, {{2, 0, 1.0}}), ShapeError);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}}), DomainError);
  const SparseMatrix s(2, 3, {{1, 2, 5.0}, {0, 1, 1.0}, {1, 0, 2.0}});
  REQUIRE(s.nnz() == 3);
  CHECK(s.entries()[0].row == 0);
  CHECK(s.entries()[1].col == 0);
  CHECK(s.row(1).size() == 2);
}

TEST_CASE("data matrix rejects negative or non-finite values") {
  CHECK_THROWS_AS(DataMatrix(Matrix{{1, -1}}), DomainError);
  CHECK_THROWS_AS(DataMatrix(Matrix{{1, std::nan("")}}), DomainError);
  CHECK_THROWS_AS(DataMatrix(SparseMatrix(1, 2, {{0, 0, -2.0}})), DomainError);
}

TEST_CASE("elementwise combine") {
  const Matrix a{{2, 4}};
  CHECK(ew_combine(a, Matrix{{1, 1}}, EwOp::Mul) == a);
  CHECK(ew_combine(a, Matrix{{2, 2}}, EwOp::Div) == Matrix{{1, 2}});
  CHECK(ew_combine(a, Matrix{{1, 3}}, EwOp::Add) == Matrix{{3, 7}});
  CHECK(ew_combine(a, Matrix{{1, 3}}, EwOp::Sub) == Matrix{{1, 1}});
  CHECK(ew_combine(Matrix{{0, 1}}, Matrix{{0, 1}}, EwOp::Div, ZeroDivision::ZeroLock) ==
        Matrix{{0, 1}});
  CHECK_THROWS_AS(ew_combine(Matrix{{0, 1}}, Matrix{{0, 1}}, EwOp::Div), DomainError);
  try {
    ew_combine(Matrix{{1, 1}}, Matrix{{1, 0}}, EwOp::Div, ZeroDivision::ZeroLock);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    REQUIRE(e.where().has_value());
    CHECK(e.where()->col == 1);
  }
  CHECK_THROWS_AS(ew_combine(Matrix(1, 2), Matrix(2, 1), EwOp::Add), ShapeError);
}

TEST_CASE("elementwise power") {
  const Matrix a{{0.5, 3}};
  CHECK(ew_pow(a, 1.0) == a);
  CHECK(ew_pow(Matrix{{4}}, 0.5) == Matrix{{2}});
  CHECK(ew_pow(Matrix{{0, 3}}, 0.0) == Matrix{{1, 1}});
  CHECK_THROWS_AS(ew_pow(Matrix{{0, 3}}, -1.0), DomainError);
  CHECK_THROWS_AS(ew_pow(Matrix{{-1}}, 0.5), DomainError);
}

TEST_CASE("column and row sums") {
  CHECK(col_sums(Matrix(3, 2, 1.0)) == std::vector<double>{3, 3});
  CHECK(col_sums(Matrix{{1, 2}, {3, 4}}) == std::vector<double>{4, 6});
  const Matrix a{{1, 2, 3}, {4, 5, 6}};
  CHECK(row_sums(transpose(a)) == col_sums(a));
}

TEST_CASE("predicates") {
  CHECK(all_nonnegative(Matrix{{0, 1}}));
  CHECK_FALSE(all_nonnegative(Matrix{{0, -1}}));
  CHECK(all_finite(Matrix{{0, 1}}));
  CHECK_FALSE(all_finite(Matrix{{0, INFINITY}}));
}

}  // TEST_SUITE
