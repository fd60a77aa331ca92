#include <doctest.h>

#include <cmath>

#include "snmf/io.hpp"
#include "snmf/objective.hpp"
#include "snmf/solver.hpp"

using namespace snmf;
using doctest::Approx;

TEST_SUITE("solver") {

TEST_CASE("half-normal initialization") {
  const FactorPair a = init_half_normal(4, 3, 2, 42, 5.0);
  const FactorPair b = init_half_normal(4, 3, 2, 42, 5.0);
  CHECK(a.w == b.w);
  CHECK(a.h == b.h);
  CHECK(a.w.rows() == 4);
  CHECK(a.h.cols() == 3);
  CHECK(all_nonnegative(a.w));
  CHECK(all_nonnegative(a.h));
  CHECK_FALSE(init_half_normal(4, 3, 2, 43, 5.0).w == a.w);

  const FactorPair big = init_half_normal(1000, 1000, 1, 7, 5.0);
  double sum = 0.0;
  for (const double x : big.h.values()) sum += x;
  for (const double x : big.w.values()) sum += x;
  const double mean = sum / 2000.0;
  // 2000 draws: standard error about 0.07. The large-sample check is below.
  CHECK(mean == Approx(5.0 * std::sqrt(2.0 / M_PI)).epsilon(0.1));

  const FactorPair huge = init_half_normal(1000, 1, 1000, 8, 5.0);
  sum = 0.0;
  for (const double x : huge.w.values()) sum += x;
  CHECK(sum / 1e6 == Approx(3.989).epsilon(0.01));
}

TEST_CASE("stopping rule") {
  CHECK(should_stop(3.0, 3.0, 1e-5));
  CHECK_FALSE(should_stop(2.0, 1.0, 1e-5));
  CHECK(should_stop(1.0 + 0.5e-5, 1.0, 1e-5));
  CHECK_FALSE(should_stop(1.0 + 2e-5, 1.0, 1e-5));
  CHECK(should_stop(1.0, 0.0, 1e-5));
  CHECK(should_stop(-2.0, -2.0 - 1e-7, 1e-5));
  CHECK_FALSE(should_stop(-2.0, -1.0, 1e-5));
}

TEST_CASE("rescale") {
  const FactorPair unit{Matrix{{0.25}, {0.75}}, Matrix{{1, 3}}};
  const FactorPair same = rescale(unit);
  CHECK(same.w == unit.w);
  CHECK(same.h == unit.h);

  const FactorPair r = rescale({Matrix{{2}, {2}}, Matrix{{1, 3}}});
  CHECK(r.w == Matrix{{0.5}, {0.5}});
  CHECK(r.h == Matrix{{4, 12}});
  CHECK(matmul(r.w, r.h) == Matrix{{2, 6}, {2, 6}});
  CHECK(max_norm_deviation(r.w) == 0.0);

  const FactorPair z = rescale({Matrix{{0, 1}, {0, 1}}, Matrix{{1, 1}, {1, 1}}});
  CHECK(z.w(0, 0) == 0.0);
  CHECK(z.h(0, 0) == 1.0);
  CHECK(z.h(1, 0) == 2.0);
}

TEST_CASE("exact fit converges at the first iteration") {
  const FactorPair truth = init_half_normal(6, 5, 2, 3, 1.0);
  const DataMatrix v(matmul(truth.w, truth.h));
  SolverConfig config;
  config.rank = 2;
  config.kappa = 0.0;
  const RunResult r = run(v, config, truth);
  CHECK(r.trace.status == RunStatus::Converged);
  CHECK(r.trace.iterations() == 1);
  CHECK(r.trace.records.back().objective == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("max_iter = 0 returns the rescaled initialization") {
  const SynthInstance inst = synth_instance(6, 5, 2, 1, 5.0, SynthMode::Direct);
  SolverConfig config;
  config.rank = 2;
  config.max_iter = 0;
  config.seed = 9;
  const RunResult r = run(inst.v, config);
  const FactorPair expect = rescale(init_half_normal(6, 5, 2, 9, 5.0));
  CHECK(r.trace.status == RunStatus::MaxIterReached);
  CHECK(r.trace.records.size() == 1);
  CHECK(r.factors.w == expect.w);
  CHECK(r.factors.h == expect.h);
}

TEST_CASE("MM traces are non-increasing and factors come back normalized") {
  const SynthInstance inst = synth_instance(12, 10, 3, 5, 5.0, SynthMode::Direct);
  for (const auto reg : {RegularizerKind::L1, RegularizerKind::Log}) {
    for (const double beta : {-0.5, 0.0, 1.0, 1.5, 2.0, 3.0}) {
      SolverConfig config;
      config.rank = 3;
      config.beta = beta;
      config.alpha = 0.5;
      config.regularizer = reg;
      config.max_iter = 200;
      const RunResult r = run(inst.v, config);
      REQUIRE(r.trace.status != RunStatus::Failed);
      const auto& rec = r.trace.records;
      for (std::size_t i = 1; i < rec.size(); ++i) {
        CHECK(rec[i].objective <= rec[i - 1].objective + 1e-9 * std::abs(rec[i - 1].objective));
        CHECK(std::isfinite(rec[i].objective));
        CHECK_FALSE(rec[i].norm_residual.has_value());
      }
      for (const double s : col_sums(r.factors.w)) CHECK(std::abs(s - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("normalized families report the constraint residual") {
  const SynthInstance inst = synth_instance(10, 8, 2, 6, 5.0, SynthMode::Direct);
  for (const auto method : {Method::Heuristic, Method::Lagrangian}) {
    SolverConfig config;
    config.rank = 2;
    config.beta = 0.5;
    config.alpha = 0.2;
    config.method = method;
    config.max_iter = 100;
    const RunResult r = run(inst.v, config);
    REQUIRE(r.trace.status != RunStatus::Failed);
    for (const auto& rec : r.trace.records) {
      REQUIRE(rec.norm_residual.has_value());
      CHECK(*rec.norm_residual <= 1e-8);
    }
  }
}

TEST_CASE("lagrangian traces are non-increasing for beta <= 1") {
  const SynthInstance inst = synth_instance(10, 8, 2, 7, 5.0, SynthMode::Direct);
  for (const double beta : {-0.5, 0.0, 0.5, 1.0}) {
    SolverConfig config;
    config.rank = 2;
    config.beta = beta;
    config.alpha = 0.5;
    config.method = Method::Lagrangian;
    config.max_iter = 100;
    const RunResult r = run(inst.v, config);
    REQUIRE(r.trace.status != RunStatus::Failed);
    const auto& rec = r.trace.records;
    for (std::size_t i = 1; i < rec.size(); ++i) {
      CHECK(rec[i].objective <= rec[i - 1].objective + 1e-9 * std::abs(rec[i - 1].objective));
    }
  }
}

TEST_CASE("unsupported configurations are rejected before iterating") {
  const SynthInstance inst = synth_instance(4, 3, 1, 1, 5.0, SynthMode::Direct);
  SolverConfig config;
  config.method = Method::Lagrangian;
  config.beta = 1.3;
  CHECK_THROWS_AS(run(inst.v, config), ConfigError);
  config.beta = 0.5;
  config.regularizer = RegularizerKind::Log;
  CHECK_THROWS_AS(run(inst.v, config), ConfigError);
  config = SolverConfig{};
  config.rank = 0;
  CHECK_THROWS_AS(run(inst.v, config), ConfigError);
  config.rank = 2;
  CHECK_THROWS_AS(run(inst.v, config, FactorPair{Matrix(4, 1), Matrix(1, 3)}), ConfigError);
}

TEST_CASE("identical seeds give identical traces") {
  const SynthInstance inst = synth_instance(9, 7, 2, 2, 5.0, SynthMode::Direct);
  SolverConfig config;
  config.rank = 2;
  config.beta = 0.5;
  config.alpha = 1.0;
  config.seed = 11;
  config.max_iter = 50;
  const RunResult a = run(inst.v, config);
  const RunResult b = run(inst.v, config);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].objective == b.trace.records[i].objective);
  }
  CHECK(a.factors.w == b.factors.w);
}

TEST_CASE("rescaling preserves the objective") {
  const SynthInstance inst = synth_instance(9, 7, 2, 4, 5.0, SynthMode::Direct);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FactorPair p = init_half_normal(9, 7, 3, seed, 5.0);
    const FactorPair q = rescale(p);
    for (const auto kind : {RegularizerKind::L1, RegularizerKind::Log}) {
      const Penalty pen{kind, 0.9, 0.01};
      const double a = objective(inst.v, p.w, p.h, 0.5, pen, 1e-12);
      const double b = objective(inst.v, q.w, q.h, 0.5, pen, 1e-12);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("diagnostic rescale does not change the iterates") {
  const SynthInstance inst = synth_instance(9, 7, 2, 4, 5.0, SynthMode::Direct);
  SolverConfig config;
  config.rank = 2;
  config.alpha = 0.3;
  config.max_iter = 30;
  const RunResult a = run(inst.v, config);
  config.diagnostic_rescale = true;
  const RunResult b = run(inst.v, config);
  CHECK(a.factors.w == b.factors.w);
  CHECK(a.factors.h == b.factors.h);
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].objective ==
          Approx(b.trace.records[i].objective).epsilon(1e-12));
  }
}

TEST_CASE("failures inside the loop are reported with the iteration") {
  // kappa = 0 with a zero in V makes the KL divergence undefined.
  const DataMatrix v(Matrix{{0.0, 1.0}, {1.0, 1.0}});
  SolverConfig config;
  config.kappa = 0.0;
  const RunResult r = run(v, config);
  CHECK(r.trace.status == RunStatus::Failed);
  CHECK(r.trace.failed_at == 0);
  CHECK_FALSE(r.trace.failure.empty());
}

TEST_CASE("observer sees every record") {
  const SynthInstance inst = synth_instance(10, 8, 2, 1, 5.0, SynthMode::Direct);
  SolverConfig config;
  config.rank = 2;
  config.max_iter = 5;
  config.delta = 1e-30;
  std::size_t seen = 0;
  const RunResult r = run(inst.v, config, std::nullopt, [&](const IterationRecord&) { ++seen; });
  CHECK(seen == r.trace.records.size());
  CHECK(seen == 6);
  CHECK(r.trace.status == RunStatus::MaxIterReached);
}

}  // TEST_SUITE
