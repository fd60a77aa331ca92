#include "snmf/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "snmf/objective.hpp"

namespace snmf {

namespace {

RunReport run_one(const DataMatrix& v, SolverConfig config, std::uint64_t seed) {
  config.seed = seed;
  RunReport report;
  report.method = config.method;
  report.regularizer = config.regularizer;
  report.beta = config.beta;
  report.alpha = config.alpha;
  report.seed = seed;
  try {
    const RunResult result = run(v, config);
    report.status = result.trace.status;
    report.failure = result.trace.failure;
    report.iterations = result.trace.iterations();
    if (!result.trace.records.empty()) report.cpu_seconds = result.trace.records.back().cpu_seconds;
    const double fn = static_cast<double>(v.rows() * v.cols());
    report.objective_norm =
        objective_constrained(v, result.factors.w, result.factors.h, config) / fn;
  } catch (const Error& e) {
    report.status = RunStatus::Failed;
    report.failure = e.what();
    report.objective_norm = std::nan("");
  }
  return report;
}

}  // namespace

std::vector<RunReport> benchmark(const DataMatrix& v, const std::vector<SolverConfig>& grid,
                                 std::size_t n_seeds, std::size_t jobs) {
  const std::size_t total = grid.size() * n_seeds;
  std::vector<RunReport> reports(total);
  auto task = [&](std::size_t i) {
    const SolverConfig& config = grid[i / n_seeds];
    reports[i] = run_one(v, config, config.seed + i % n_seeds);
  };

  jobs = std::max<std::size_t>(1, std::min(jobs, total));
  if (jobs == 1) {
    for (std::size_t i = 0; i < total; ++i) task(i);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t j = 0; j < jobs; ++j) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) task(i);
    });
  }
  workers.clear();
  return reports;
}

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (const double x : values) sum += x;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double x : values) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

std::vector<SummaryRow> summarize(const std::vector<RunReport>& reports) {
  struct Group {
    SummaryRow row;
    std::vector<double> objective, cpu, iterations;
  };
  std::vector<Group> groups;
  for (const RunReport& r : reports) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.row.method == r.method && g.row.regularizer == r.regularizer &&
             g.row.beta == r.beta && g.row.alpha == r.alpha;
    });
    if (it == groups.end()) {
      groups.push_back({});
      it = std::prev(groups.end());
      it->row.method = r.method;
      it->row.regularizer = r.regularizer;
      it->row.beta = r.beta;
      it->row.alpha = r.alpha;
    }
    ++it->row.runs;
    it->row.cpu_total += r.cpu_seconds;
    if (r.status == RunStatus::Failed) {
      ++it->row.failed;
      continue;
    }
    if (r.status == RunStatus::Converged) ++it->row.converged;
    it->objective.push_back(r.objective_norm);
    it->cpu.push_back(r.cpu_seconds);
    it->iterations.push_back(static_cast<double>(r.iterations));
  }
  std::vector<SummaryRow> rows;
  for (Group& g : groups) {
    g.row.objective_norm = moments(g.objective);
    g.row.cpu_seconds = moments(g.cpu);
    g.row.iterations = moments(g.iterations);
    rows.push_back(g.row);
  }
  return rows;
}

std::string format_mean_std(const Moments& m) {
  char mean[64];
  std::snprintf(mean, sizeof mean, "%.3g", m.mean);
  if (m.std == 0.0) return std::string(mean) + " (±0)";
  char dev[64];
  std::snprintf(dev, sizeof dev, "%.0E", m.std);
  // "7E-03" -> "7E-3"
  std::string d(dev);
  const auto e = d.find('E');
  std::string mant = d.substr(0, e);
  std::string exp = d.substr(e + 1);
  const char sign = exp[0];
  exp = exp.substr(1);
  while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
  return std::string(mean) + " (±" + mant + "E" + (sign == '-' ? "-" : "") + exp + ")";
}

}  // namespace snmf
