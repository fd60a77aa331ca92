#include "snmf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "snmf/benchmark.hpp"
#include "snmf/diagnostics.hpp"
#include "snmf/io.hpp"
#include "snmf/solver.hpp"
#include "snmf/verify.hpp"

namespace snmf {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

// Flags shared by factorize and benchmark.
struct ModelFlags {
  std::string input;
  std::string format = "dense-csv";
  std::size_t k = 0;
  double beta = 1.0;
  double alpha = 0.0;
  std::string reg = "l1";
  double tol = 1e-5;
  std::size_t max_iter = 5000;
  double epsilon = 0.01;
  double kappa = 1e-12;
  std::uint64_t seed = 0;
  double init_sigma = 5.0;
  bool diagnostic_rescale = false;

  void attach(CLI::App* app) {
    app->add_option("--input", input, "Input matrix V")->required()->check(CLI::ExistingFile);
    app->add_option("--format", format, "dense-csv or sparse-coord")
        ->check(CLI::IsMember({"dense-csv", "sparse-coord"}))
        ->capture_default_str();
    app->add_option("--k", k, "Rank K")->required()->check(CLI::PositiveNumber);
    app->add_option("--beta", beta, "Divergence parameter beta")->capture_default_str();
    app->add_option("--alpha", alpha, "Sparsity weight alpha")->capture_default_str();
    app->add_option("--reg", reg, "l1 or log")
        ->check(CLI::IsMember({"l1", "log"}))
        ->capture_default_str();
    app->add_option("--tol", tol, "Relative-change stopping tolerance")->capture_default_str();
    app->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    app->add_option("--epsilon", epsilon, "Log-penalty offset")->capture_default_str();
    app->add_option("--kappa", kappa, "Stabilizing shift")->capture_default_str();
    app->add_option("--seed", seed, "Initialization seed")->capture_default_str();
    app->add_option("--init-sigma", init_sigma, "Half-normal scale of the initialization")
        ->capture_default_str();
    app->add_flag("--diagnostic-rescale", diagnostic_rescale,
                  "Evaluate the traced objective on rescaled copies of the iterates");
  }

  SolverConfig config(Method method) const {
    SolverConfig c;
    c.beta = beta;
    c.alpha = alpha;
    c.rank = k;
    c.regularizer = parse_regularizer(reg);
    c.method = method;
    c.epsilon = epsilon;
    c.kappa = kappa;
    c.delta = tol;
    c.max_iter = max_iter;
    c.seed = seed;
    c.init_sigma = init_sigma;
    c.diagnostic_rescale = diagnostic_rescale;
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

int factorize(const ModelFlags& flags, const std::string& method, const std::vector<std::string>& init,
              const std::string& out_w, const std::string& out_h, const std::string& trace_path,
              bool verbose, std::ostream& err) {
  const SolverConfig config = flags.config(parse_method(method));
  const DataMatrix v = load_matrix(flags.input, parse_matrix_format(flags.format));
  std::optional<FactorPair> start;
  if (!init.empty()) start = FactorPair{load_dense(init[0]), load_dense(init[1])};

  IterationObserver observer;
  if (verbose) {
    observer = [&err](const IterationRecord& r) {
      err << "iter " << r.iteration << " objective " << r.objective << " cpu " << r.cpu_seconds;
      if (r.norm_residual) err << " norm_residual " << *r.norm_residual;
      err << '\n';
    };
  }
  RunResult result;
  try {
    result = run(v, config, start, observer);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  write_matrix_csv(result.factors.w, out_w);
  write_matrix_csv(result.factors.h, out_h);
  if (!trace_path.empty()) write_trace(result.trace, trace_path);

  const IterationTrace& trace = result.trace;
  const double last = trace.records.empty() ? 0.0 : trace.records.back().objective;
  switch (trace.status) {
    case RunStatus::Converged:
      err << "converged after " << trace.iterations() << " iterations, objective " << last << '\n';
      return kExitOk;
    case RunStatus::MaxIterReached:
      err << "warning: iteration cap reached after " << trace.iterations()
          << " iterations, objective " << last << '\n';
      return kExitOk;
    case RunStatus::Failed:
      err << "error: run failed at iteration " << trace.failed_at << ": " << trace.failure
          << "\n(last good iterate written)\n";
      return kExitFailure;
  }
  return kExitFailure;
}

int benchmark_cmd(const ModelFlags& flags, const std::vector<std::string>& methods,
                  std::size_t seeds, std::size_t jobs, const std::string& report_path,
                  const std::string& layout_name, std::ostream& out) {
  std::vector<SolverConfig> grid;
  for (const std::string& m : methods) grid.push_back(flags.config(parse_method(m)));
  const DataMatrix v = load_matrix(flags.input, parse_matrix_format(flags.format));
  const auto reports = benchmark(v, grid, seeds, jobs);

  ReportLayout layout = ReportLayout::Csv;
  if (layout_name == "json" ||
      (layout_name.empty() && report_path.size() >= 5 &&
       report_path.compare(report_path.size() - 5, 5, ".json") == 0)) {
    layout = ReportLayout::Json;
  }
  write_report(reports, report_path, layout);

  bool failed = false;
  for (const SummaryRow& s : summarize(reports)) {
    out << to_string(s.method) << '-' << to_string(s.regularizer) << ": J/FN "
        << format_mean_std(s.objective_norm) << ", iterations " << s.iterations.mean
        << ", cpu total " << s.cpu_total << " s, converged " << s.converged << '/' << s.runs
        << ", failed " << s.failed << '\n';
    failed = failed || s.failed > 0;
  }
  return failed ? kExitFailure : kExitOk;
}

int verify_cmd(const std::string& suite, std::size_t trials, std::uint64_t seed,
               std::ostream& out) {
  const VerifyResult result = run_suite(parse_suite(suite), trials, seed);
  for (const std::string& m : result.messages) out << "violation: " << m << '\n';
  out << suite << ": " << result.trials << " trials, " << result.checks << " checks, "
      << result.violations << " violations\n";
  return result.violations == 0 ? kExitOk : kExitFailure;
}

int synth_cmd(std::size_t rows, std::size_t cols, std::size_t k_true, std::uint64_t seed,
              double sigma, const std::string& mode, std::optional<double> noise,
              const std::string& path, const std::string& format) {
  const SynthInstance inst =
      synth_instance(rows, cols, k_true, seed, sigma,
                     mode == "product" ? SynthMode::Product : SynthMode::Direct, noise);
  if (parse_matrix_format(format) == MatrixFormat::DenseCsv) {
    write_matrix_csv(inst.v.dense(), path);
  } else {
    std::vector<Triplet> entries;
    const Matrix& d = inst.v.dense();
    for (std::size_t r = 0; r < d.rows(); ++r) {
      for (std::size_t c = 0; c < d.cols(); ++c) {
        if (d(r, c) != 0.0) entries.push_back({r, c, d(r, c)});
      }
    }
    write_sparse_coord(SparseMatrix(d.rows(), d.cols(), std::move(entries)), path);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse NMF with the beta-divergence", "snmf"};
  app.require_subcommand(1);

  ModelFlags fact_flags;
  std::string method = "mm";
  std::vector<std::string> init;
  std::string out_w, out_h, trace_path;
  bool verbose = false;
  auto* fact = app.add_subcommand("factorize", "Factorize one matrix");
  fact_flags.attach(fact);
  fact->add_option("--method", method, "mm, heur or lagr")
      ->check(CLI::IsMember({"mm", "heur", "lagr"}))
      ->capture_default_str();
  fact->add_option("--init", init, "Initial factors: W.csv H.csv")->expected(2);
  fact->add_option("--out-w", out_w, "Output path for W")->required();
  fact->add_option("--out-h", out_h, "Output path for H")->required();
  fact->add_option("--trace", trace_path, "Output path for the iteration trace");
  fact->add_flag("--verbose", verbose, "Print one line per iteration to stderr");

  ModelFlags bench_flags;
  std::vector<std::string> methods{"mm"};
  std::size_t seeds = 1;
  std::size_t jobs = 1;
  std::string report_path, report_layout;
  auto* bench = app.add_subcommand("benchmark", "Multi-seed comparison of methods");
  bench_flags.attach(bench);
  bench->add_option("--methods", methods, "Comma-separated list of mm, heur, lagr")
      ->delimiter(',')
      ->check(CLI::IsMember({"mm", "heur", "lagr"}));
  bench->add_option("--seeds", seeds, "Number of seeds, starting at --seed")
      ->capture_default_str();
  bench->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--report", report_path, "Report path (.csv or .json)")->required();
  bench->add_option("--report-format", report_layout, "csv or json (default: from extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string suite;
  std::size_t trials = 100;
  std::uint64_t verify_seed = 0;
  auto* ver = app.add_subcommand("verify", "Run a randomized verification suite");
  ver->add_option("--suite", suite, "majorization, descent, kkt or cross-method")
      ->required()
      ->check(CLI::IsMember({"majorization", "descent", "kkt", "cross-method"}));
  ver->add_option("--trials", trials, "Number of random trials")->capture_default_str();
  ver->add_option("--seed", verify_seed, "Base seed")->capture_default_str();

  std::size_t rows = 50, cols = 40, k_true = 3;
  std::uint64_t synth_seed = 0;
  double sigma = 5.0;
  std::string mode = "direct", synth_out, synth_format = "dense-csv";
  std::optional<double> noise;
  auto* syn = app.add_subcommand("synth", "Write a synthetic nonnegative matrix");
  syn->add_option("--rows", rows, "F")->capture_default_str()->check(CLI::PositiveNumber);
  syn->add_option("--cols", cols, "N")->capture_default_str()->check(CLI::PositiveNumber);
  syn->add_option("--k-true", k_true, "Rank of the product mode")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  syn->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  syn->add_option("--sigma", sigma, "Half-normal scale")->capture_default_str();
  syn->add_option("--mode", mode, "direct or product")
      ->check(CLI::IsMember({"direct", "product"}))
      ->capture_default_str();
  syn->add_option("--noise", noise, "Additive half-normal noise scale");
  syn->add_option("--out", synth_out, "Output path")->required();
  syn->add_option("--format", synth_format, "dense-csv or sparse-coord")
      ->check(CLI::IsMember({"dense-csv", "sparse-coord"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run 'snmf --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (*fact) {
      return factorize(fact_flags, method, init, out_w, out_h, trace_path, verbose, err);
    }
    if (*bench) {
      return benchmark_cmd(bench_flags, methods, seeds, jobs, report_path, report_layout, out);
    }
    if (*ver) return verify_cmd(suite, trials, verify_seed, out);
    if (*syn) {
      return synth_cmd(rows, cols, k_true, synth_seed, sigma, mode, noise, synth_out,
                       synth_format);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace snmf
