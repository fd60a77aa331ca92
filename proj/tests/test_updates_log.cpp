#include <doctest.h>

#include <random>

#include "snmf/objective.hpp"
#include "snmf/solver.hpp"
#include "snmf/updates_l1.hpp"
#include "snmf/updates_log.hpp"

using namespace snmf;
using doctest::Approx;

namespace {

struct Random3 {
  Matrix v, w, h;
};

Random3 random3(std::uint64_t seed, std::size_t f = 5, std::size_t n = 4, std::size_t k = 3) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  Random3 r{Matrix(f, n), Matrix(f, k), Matrix(k, n)};
  for (double& x : r.v.values()) x = u(engine);
  for (double& x : r.w.values()) x = u(engine);
  for (double& x : r.h.values()) x = u(engine);
  return r;
}

}  // namespace

TEST_SUITE("updates_log") {

TEST_CASE("one-entry hand evaluations") {
  const DataMatrix v(Matrix{{2}});
  const Matrix h = mm_log_update_h(v, Matrix{{1}}, Matrix{{1}}, 1.0, 1.0, 0.01, 0.0);
  CHECK(h(0, 0) == Approx(2.0 / (1.0 + 1.0 / 1.01)).epsilon(1e-14));
  CHECK(h(0, 0) == Approx(1.004975).epsilon(1e-6));

  const Matrix w = mm_log_update_w(v, Matrix{{1}}, Matrix{{2}}, 1.0, 1.0, 0.01, 0.0);
  CHECK(w(0, 0) == Approx(2.0 / (2.0 + 1.0 / 1.005)).epsilon(1e-14));
  CHECK(w(0, 0) == Approx(0.667774).epsilon(1e-6));

  const Matrix hh = heur_log_update_h(v, Matrix{{1}}, Matrix{{1}}, 1.0, 1.0, 0.01, 0.0);
  CHECK(hh(0, 0) == Approx(1.004975).epsilon(1e-6));
}

TEST_CASE("alpha = 0 reduces to the l1 steps") {
  const auto r = random3(1);
  const DataMatrix v(r.v);
  for (const double beta : {-0.5, 0.0, 1.0, 1.5, 3.0}) {
    CHECK(mm_log_update_h(v, r.w, r.h, beta, 0.0, 0.01, 1e-12) ==
          mm_update_h(v, r.w, r.h, beta, 0.0, 1e-12));
    CHECK(mm_log_update_w(v, r.w, r.h, beta, 0.0, 0.01, 1e-12) ==
          mm_update_w(v, r.w, r.h, beta, 0.0, 1e-12));
  }
  const FactorPair p = rescale({r.w, r.h});
  CHECK(heur_log_update_h(v, p.w, p.h, 1.0, 0.0, 0.01, 1e-12) ==
        heur_update_h(v, p.w, p.h, 1.0, 0.0, 1e-12));
}

TEST_CASE("zero H row contributes no penalty to the W step") {
  auto r = random3(2);
  for (std::size_t n = 0; n < r.h.cols(); ++n) r.h(1, n) = 0.0;
  const DataMatrix v(r.v);
  const Matrix a = mm_log_update_w(v, r.w, r.h, 1.0, 3.0, 0.01, 1e-12);
  const Matrix b = mm_update_w(v, r.w, r.h, 1.0, 0.0, 1e-12);
  // Column 1 is frozen in both; the others differ only through their own penalty.
  for (std::size_t f = 0; f < r.w.rows(); ++f) CHECK(a(f, 1) == b(f, 1));

  Matrix hz(3, 4);
  const Matrix c = mm_log_update_w(v, r.w, hz, 1.0, 3.0, 0.01, 1e-12);
  CHECK(c == r.w);  // all rows frozen
}

TEST_CASE("zero entries stay zero") {
  auto r = random3(3);
  r.h(0, 2) = 0.0;
  r.w(3, 1) = 0.0;
  const DataMatrix v(r.v);
  CHECK(mm_log_update_h(v, r.w, r.h, 0.5, 1.0, 0.01, 1e-12)(0, 2) == 0.0);
  CHECK(mm_log_update_w(v, r.w, r.h, 0.5, 1.0, 0.01, 1e-12)(3, 1) == 0.0);
  const FactorPair p = rescale({r.w, r.h});
  CHECK(heur_log_update_h(v, p.w, p.h, 0.5, 1.0, 0.01, 1e-12)(0, 2) == 0.0);
  CHECK(heur_log_update_w(v, p.w, p.h, 0.5, 1.0, 0.01, 1e-12)(3, 1) == 0.0);
}

TEST_CASE("heuristic W step is the l1 heuristic W step") {
  const auto r = random3(4);
  const FactorPair p = rescale({r.w, r.h});
  const DataMatrix v(r.v);
  for (const double beta : {0.0, 1.0, 2.5}) {
    const Matrix a = heur_log_update_w(v, p.w, p.h, beta, 2.0, 0.01, 1e-12);
    CHECK(a == heur_update_w(v, p.w, p.h, beta, 2.0, 1e-12));
    for (const double s : col_sums(a)) CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  // Exact fit leaves W unchanged.
  const DataMatrix exact(matmul(p.w, p.h));
  const Matrix e = heur_log_update_w(exact, p.w, p.h, 1.0, 2.0, 0.01, 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(e.values()[i] == Approx(p.w.values()[i]).epsilon(1e-13));
  }
}

TEST_CASE("heuristic and MM log H steps coincide on [1, 2] with unit columns") {
  const auto r = random3(5);
  const FactorPair p = rescale({r.w, r.h});
  const DataMatrix v(r.v);
  for (const double beta : {1.0, 1.25, 2.0}) {
    const Matrix a = heur_log_update_h(v, p.w, p.h, beta, 0.7, 0.01, 1e-12);
    const Matrix b = mm_log_update_h(v, p.w, p.h, beta, 0.7, 0.01, 1e-12);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.values()[i] == Approx(b.values()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("W and H roles are not exchangeable") {
  const auto r = random3(6);
  const DataMatrix v(r.v);
  const Matrix direct = mm_log_update_w(v, r.w, r.h, 1.0, 1.0, 0.01, 1e-12);
  const Matrix dual = transpose(
      mm_log_update_h(DataMatrix(transpose(r.v)), transpose(r.h), transpose(r.w), 1.0, 1.0, 0.01,
                      1e-12));
  bool differs = false;
  for (std::size_t i = 0; i < direct.size(); ++i) {
    differs = differs || std::abs(direct.values()[i] - dual.values()[i]) >
                             1e-6 * std::abs(direct.values()[i]);
  }
  CHECK(differs);
}

TEST_CASE("one MM-log sweep never increases the objective") {
  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> alpha(0.0, 5.0);
  for (int trial = 0; trial < 60; ++trial) {
    auto r = random3(100 + trial, 4, 5, 2);
    const double beta = std::vector<double>{-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0}[trial % 7];
    const Penalty pen{RegularizerKind::Log, alpha(engine), 0.01};
    const DataMatrix v(r.v);
    const double before = objective(v, r.w, r.h, beta, pen, 1e-12);
    r.h = mm_log_update_h(v, r.w, r.h, beta, pen.alpha, pen.epsilon, 1e-12);
    r.w = mm_log_update_w(v, r.w, r.h, beta, pen.alpha, pen.epsilon, 1e-12);
    const double after = objective(v, r.w, r.h, beta, pen, 1e-12);
    CHECK(after <= before + 1e-9 * (1.0 + std::abs(before)));
  }
}

}  // TEST_SUITE
