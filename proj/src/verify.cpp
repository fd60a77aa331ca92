#include "snmf/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "snmf/objective.hpp"
#include "snmf/updates_l1.hpp"
#include "snmf/updates_log.hpp"

namespace snmf {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

constexpr std::array<double, 8> kBetaGrid{-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
constexpr std::size_t kMaxMessages = 10;

std::mt19937_64 trial_engine(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), 0x5eedu};
  return std::mt19937_64(seq);
}

void record(VerifyResult& result, bool ok, const std::string& what) {
  ++result.checks;
  if (ok) return;
  ++result.violations;
  if (result.messages.size() < kMaxMessages) result.messages.push_back(what);
}

std::string tag(std::size_t trial, double beta, RegularizerKind reg, const char* extra = "") {
  std::ostringstream s;
  s << "trial " << trial << ", beta " << beta << ", " << to_string(reg) << extra;
  return s.str();
}

void majorization_trial(VerifyResult& result, std::size_t trial, std::uint64_t seed) {
  auto engine = trial_engine(seed, trial);
  const Instance inst = random_instance(engine);
  const double beta = kBetaGrid[trial % kBetaGrid.size()];
  const auto reg = (trial / kBetaGrid.size()) % 2 ? RegularizerKind::Log : RegularizerKind::L1;
  const auto side = (trial / (2 * kBetaGrid.size())) % 2 ? FactorSide::W : FactorSide::H;
  std::uniform_real_distribution<double> alpha_dist(0.0, 2.0);
  const Penalty penalty{reg, alpha_dist(engine), 0.01};

  const AuxEvalContext ctx =
      side == FactorSide::H
          ? make_context(side, inst.v, inst.h, inst.w, beta, penalty, 1e-12)
          : make_context(side, inst.v, inst.w, inst.h, beta, penalty, 1e-12);
  const PropertyReport props = check_mm_properties(ctx, 10, engine());
  const char* where = side == FactorSide::H ? ", side H" : ", side W";
  record(result, props.ok(), tag(trial, beta, reg, where) + ": " + props.first_failure);
  const double gap = closed_form_gap(ctx);
  record(result, gap <= 1e-8,
         tag(trial, beta, reg, where) + ": closed form vs argmin differ by " +
             sci(gap));
}

void descent_trial(VerifyResult& result, std::size_t trial, std::uint64_t seed) {
  auto engine = trial_engine(seed, trial);
  Instance inst = random_instance(engine);
  const double beta = kBetaGrid[trial % kBetaGrid.size()];
  const auto reg = (trial / kBetaGrid.size()) % 2 ? RegularizerKind::Log : RegularizerKind::L1;
  std::uniform_real_distribution<double> alpha_dist(0.0, 2.0);
  const Penalty penalty{reg, alpha_dist(engine), 0.01};
  const double kappa = 1e-12;
  const DataMatrix v(inst.v);

  const double before = objective(v, inst.w, inst.h, beta, penalty, kappa);
  if (reg == RegularizerKind::L1) {
    inst.h = mm_update_h(v, inst.w, inst.h, beta, penalty.alpha, kappa);
  } else {
    inst.h = mm_log_update_h(v, inst.w, inst.h, beta, penalty.alpha, penalty.epsilon, kappa);
  }
  const double middle = objective(v, inst.w, inst.h, beta, penalty, kappa);
  if (reg == RegularizerKind::L1) {
    inst.w = mm_update_w(v, inst.w, inst.h, beta, penalty.alpha, kappa);
  } else {
    inst.w = mm_log_update_w(v, inst.w, inst.h, beta, penalty.alpha, penalty.epsilon, kappa);
  }
  const double after = objective(v, inst.w, inst.h, beta, penalty, kappa);

  std::ostringstream msg;
  msg << tag(trial, beta, reg) << ": objective " << before << " -> " << middle << " -> " << after;
  record(result, middle <= before + 1e-9 * (1.0 + std::abs(before)), msg.str() + " (H step)");
  record(result, after <= middle + 1e-9 * (1.0 + std::abs(middle)), msg.str() + " (W step)");
}

void kkt_trial(VerifyResult& result, std::size_t trial, std::uint64_t seed) {
  auto engine = trial_engine(seed, trial);
  SolverConfig config;
  constexpr std::array<std::pair<Method, RegularizerKind>, 5> families{{
      {Method::MM, RegularizerKind::L1},
      {Method::MM, RegularizerKind::Log},
      {Method::Heuristic, RegularizerKind::L1},
      {Method::Heuristic, RegularizerKind::Log},
      {Method::Lagrangian, RegularizerKind::L1},
  }};
  const auto [method, reg] = families[trial % families.size()];
  config.method = method;
  config.regularizer = reg;
  const std::array<double, 3> betas = method == Method::Lagrangian
                                          ? std::array<double, 3>{0.0, 0.5, 1.0}
                                          : std::array<double, 3>{0.5, 1.0, 1.5};
  config.beta = betas[(trial / families.size()) % betas.size()];
  config.alpha = 0.1;
  config.rank = 2;
  config.delta = 1e-12;
  config.max_iter = 20000;
  config.seed = engine();

  std::uniform_real_distribution<double> entry(0.1, 2.0);
  Matrix w(6, 2);
  Matrix h(2, 5);
  for (double& x : w.values()) x = entry(engine);
  for (double& x : h.values()) x = entry(engine);
  Matrix vm = matmul(w, h);
  for (double& x : vm.values()) x *= entry(engine);
  const DataMatrix v(vm);

  const RunResult run_result = run(v, config);
  std::ostringstream msg;
  msg << "trial " << trial << ", " << to_string(method) << "-" << to_string(reg) << ", beta "
      << config.beta;
  if (run_result.trace.status == RunStatus::Failed) {
    record(result, false, msg.str() + ": run failed: " + run_result.trace.failure);
    return;
  }
  const KktReport kkt = kkt_residual(v, run_result.factors, config);
  msg << ": residual " << kkt.max_residual << " vs bound " << kkt.bound << " after "
      << run_result.trace.iterations() << " iterations";
  record(result, kkt.ok(), msg.str());
}

void cross_method_trial(VerifyResult& result, std::size_t trial, std::uint64_t seed) {
  auto engine = trial_engine(seed, trial);
  Instance inst = random_instance(engine);
  const FactorPair normalized = rescale({inst.w, inst.h});
  const Matrix& w = normalized.w;
  const Matrix& h = normalized.h;
  const DataMatrix v(inst.v);
  std::uniform_real_distribution<double> alpha_dist(0.0, 2.0);
  const double alpha = alpha_dist(engine);
  const double kappa = 1e-12;
  const double eps = 0.01;

  for (const double beta : {-0.5, 0.0, 1.0}) {
    const double gap = max_relative_difference(lagr_update_h(v, w, h, beta, alpha, kappa),
                                               mm_update_h(v, w, h, beta, alpha, kappa));
    record(result, gap <= 1e-12,
           tag(trial, beta, RegularizerKind::L1) + ": lagrangian vs MM H step differ by " +
               sci(gap));
  }
  for (const double beta : {1.0, 1.5, 2.0}) {
    const double gap = max_relative_difference(heur_update_h(v, w, h, beta, alpha, kappa),
                                               mm_update_h(v, w, h, beta, alpha, kappa));
    record(result, gap <= 1e-12,
           tag(trial, beta, RegularizerKind::L1) + ": heuristic vs MM H step differ by " +
               sci(gap));
    const double log_gap =
        max_relative_difference(heur_log_update_h(v, w, h, beta, alpha, eps, kappa),
                                mm_log_update_h(v, w, h, beta, alpha, eps, kappa));
    record(result, log_gap <= 1e-12,
           tag(trial, beta, RegularizerKind::Log) + ": heuristic vs MM H step differ by " +
               sci(log_gap));
  }
  const double beta = kBetaGrid[trial % kBetaGrid.size()];
  record(result,
         heur_log_update_w(v, w, h, beta, alpha, eps, kappa) ==
             heur_update_w(v, w, h, beta, alpha, kappa),
         tag(trial, beta, RegularizerKind::Log) + ": heuristic W steps not bitwise equal");
}

}  // namespace

Suite parse_suite(std::string_view text) {
  if (text == "majorization") return Suite::Majorization;
  if (text == "descent") return Suite::Descent;
  if (text == "kkt") return Suite::Kkt;
  if (text == "cross-method") return Suite::CrossMethod;
  throw ConfigError("unknown suite '" + std::string(text) +
                    "' (expected majorization, descent, kkt or cross-method)");
}

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::Majorization: return "majorization";
    case Suite::Descent: return "descent";
    case Suite::Kkt: return "kkt";
    case Suite::CrossMethod: return "cross-method";
  }
  return "?";
}

VerifyResult run_suite(Suite suite, std::size_t trials, std::uint64_t seed) {
  VerifyResult result;
  for (std::size_t t = 0; t < trials; ++t) {
    try {
      switch (suite) {
        case Suite::Majorization: majorization_trial(result, t, seed); break;
        case Suite::Descent: descent_trial(result, t, seed); break;
        case Suite::Kkt: kkt_trial(result, t, seed); break;
        case Suite::CrossMethod: cross_method_trial(result, t, seed); break;
      }
    } catch (const Error& e) {
      record(result, false, "trial " + std::to_string(t) + ": " + e.what());
    }
    ++result.trials;
  }
  return result;
}

Instance random_instance(std::mt19937_64& engine, std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_real_distribution<double> data(0.05, 3.0);
  std::uniform_real_distribution<double> factor(0.1, 2.0);
  const std::size_t f = dim(engine);
  const std::size_t n = dim(engine);
  const std::size_t k = dim(engine);
  Instance inst{Matrix(f, n), Matrix(f, k), Matrix(k, n)};
  for (double& x : inst.v.values()) x = data(engine);
  for (double& x : inst.w.values()) x = factor(engine);
  for (double& x : inst.h.values()) x = factor(engine);
  return inst;
}

double closed_form_gap(const AuxEvalContext& ctx) {
  const DataMatrix v(ctx.v);
  const double a = ctx.penalty.alpha;
  const double eps = ctx.penalty.epsilon;
  const bool log = ctx.penalty.kind == RegularizerKind::Log;
  Matrix update;
  if (ctx.side == FactorSide::H) {
    update = log ? mm_log_update_h(v, ctx.fixed, ctx.anchor, ctx.beta, a, eps, ctx.kappa)
                 : mm_update_h(v, ctx.fixed, ctx.anchor, ctx.beta, a, ctx.kappa);
  } else {
    update = log ? mm_log_update_w(v, ctx.anchor, ctx.fixed, ctx.beta, a, eps, ctx.kappa)
                 : mm_update_w(v, ctx.anchor, ctx.fixed, ctx.beta, a, ctx.kappa);
  }
  return max_relative_difference(update, aux_argmin(ctx));
}

KktReport kkt_residual(const DataMatrix& v, const FactorPair& pair, const SolverConfig& config) {
  const Penalty penalty = config.penalty();
  const double j = objective(v, pair.w, pair.h, config.beta, penalty, config.kappa);
  KktReport report;
  report.bound = 1e-3 * (1.0 + std::abs(j));

  auto scan = [&](const Matrix& x, const Matrix& grad) {
    const double top = *std::max_element(x.values().begin(), x.values().end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.values()[i] > 1e-3 * top) {
        report.max_residual = std::max(report.max_residual, std::abs(grad.values()[i]));
        ++report.checked;
      }
    }
  };
  const Matrix gw = fd_gradient(
      [&](const Matrix& w) {
        return objective(v, w, pair.h, config.beta, penalty, config.kappa);
      },
      pair.w, 1e-6);
  const Matrix gh = fd_gradient(
      [&](const Matrix& h) {
        return objective(v, pair.w, h, config.beta, penalty, config.kappa);
      },
      pair.h, 1e-6);
  scan(pair.w, gw);
  scan(pair.h, gh);
  return report;
}

double max_relative_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_relative_difference: " + a.shape_string() + " vs " + b.shape_string());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.values()[i];
    const double y = b.values()[i];
    if (x == y) continue;
    worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), std::abs(y)));
  }
  return worst;
}

}  // namespace snmf
