#include "snmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

namespace snmf {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits into lines, numbering from 1. A trailing newline does not produce an
// extra line.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    const auto end = text.find('\n');
    lines.emplace_back(number++, text.substr(0, end));
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return lines;
}

double parse_value(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("cannot parse '" + std::string(token) + "' as a number", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value", line);
  if (value < 0.0) {
    throw ParseError("negative value " + std::string(token) + " (entries must be >= 0)", line);
  }
  return value;
}

std::size_t parse_count(std::string_view token, std::size_t line, const char* what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(std::string("cannot parse '") + std::string(token) + "' as " + what, line);
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string shortest(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

MatrixFormat parse_matrix_format(std::string_view text) {
  if (text == "dense-csv") return MatrixFormat::DenseCsv;
  if (text == "sparse-coord") return MatrixFormat::SparseCoord;
  throw ConfigError("unknown matrix format '" + std::string(text) +
                    "' (expected dense-csv or sparse-coord)");
}

DataMatrix parse_dense_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto& [number, raw] : lines_of(text)) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      values.push_back(parse_value(line.substr(start, comma - start), number));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("row has " + std::to_string(count) + " values, expected " +
                           std::to_string(cols),
                       number);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("empty matrix file", 1);
  return DataMatrix(Matrix(rows, cols, std::move(values)));
}

DataMatrix parse_sparse_coord(std::string_view text) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t nnz = 0;
  bool have_header = false;
  std::size_t last_line = 1;
  std::vector<Triplet> entries;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [number, raw] : lines_of(text)) {
    last_line = number;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%' || line.front() == '#') continue;
    const auto fields = split_ws(line);
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, found " + std::to_string(fields.size()), number);
    }
    if (!have_header) {
      rows = parse_count(fields[0], number, "a row count");
      cols = parse_count(fields[1], number, "a column count");
      nnz = parse_count(fields[2], number, "an entry count");
      if (rows == 0 || cols == 0) throw ParseError("dimensions must be positive", number);
      have_header = true;
      continue;
    }
    const std::size_t i = parse_count(fields[0], number, "a row index");
    const std::size_t j = parse_count(fields[1], number, "a column index");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") outside the declared " + std::to_string(rows) + "x" +
                           std::to_string(cols) + " shape",
                       number);
    }
    const double value = parse_value(fields[2], number);
    if (!seen.emplace(i, j).second) {
      throw ParseError("duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) + ")",
                       number);
    }
    if (entries.size() == nnz) {
      throw ParseError("more entries than the declared " + std::to_string(nnz), number);
    }
    entries.push_back({i - 1, j - 1, value});
  }
  if (!have_header) throw ParseError("empty matrix file", 1);
  if (entries.size() != nnz) {
    throw ParseError("found " + std::to_string(entries.size()) + " entries, header declares " +
                         std::to_string(nnz),
                     last_line);
  }
  return DataMatrix(SparseMatrix(rows, cols, std::move(entries)));
}

DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string text = read_file(path);
  try {
    return format == MatrixFormat::DenseCsv ? parse_dense_csv(text) : parse_sparse_coord(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

Matrix load_dense(const std::filesystem::path& path) {
  return load_matrix(path, MatrixFormat::DenseCsv).dense();
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << shortest(row[c]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_sparse_coord(const SparseMatrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const Triplet& t : m.entries()) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << shortest(t.value) << '\n';
  }
  finish(out, path);
}

SynthInstance synth_instance(std::size_t f, std::size_t n, std::size_t k_true, std::uint64_t seed,
                             double sigma, SynthMode mode, std::optional<double> noise) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(n)};
  std::mt19937_64 engine(seq);
  Matrix v;
  std::optional<FactorPair> truth;
  if (mode == SynthMode::Direct) {
    std::normal_distribution<double> normal(0.0, sigma);
    v = Matrix(f, n);
    for (double& x : v.values()) x = std::abs(normal(engine));
  } else {
    truth = init_half_normal(f, n, k_true, seed, sigma);
    v = matmul(truth->w, truth->h);
  }
  if (noise) {
    std::normal_distribution<double> normal(0.0, *noise);
    for (double& x : v.values()) x += std::abs(normal(engine));
  }
  return {DataMatrix(std::move(v)), std::move(truth)};
}

void write_report(const std::vector<RunReport>& reports, const std::filesystem::path& path,
                  ReportLayout layout) {
  const auto summary = summarize(reports);
  auto out = open_out(path);
  if (layout == ReportLayout::Csv) {
    out << "method,regularizer,beta,alpha,seed,objective_norm,cpu_seconds,iterations,status\n";
    for (const RunReport& r : reports) {
      out << to_string(r.method) << ',' << to_string(r.regularizer) << ',' << shortest(r.beta)
          << ',' << shortest(r.alpha) << ',' << r.seed << ',' << shortest(r.objective_norm) << ','
          << shortest(r.cpu_seconds) << ',' << r.iterations << ',' << to_string(r.status) << '\n';
    }
    if (!summary.empty()) {
      out << "# summary,method,regularizer,beta,alpha,runs,failed,converged,objective_mean,"
             "objective_std,cpu_mean,cpu_std,cpu_total,iterations_mean,iterations_std,table\n";
    }
    for (const SummaryRow& s : summary) {
      out << "# summary," << to_string(s.method) << ',' << to_string(s.regularizer) << ','
          << shortest(s.beta) << ',' << shortest(s.alpha) << ',' << s.runs << ',' << s.failed
          << ',' << s.converged << ',' << shortest(s.objective_norm.mean) << ','
          << shortest(s.objective_norm.std) << ',' << shortest(s.cpu_seconds.mean) << ','
          << shortest(s.cpu_seconds.std) << ',' << shortest(s.cpu_total) << ','
          << shortest(s.iterations.mean) << ',' << shortest(s.iterations.std) << ','
          << format_mean_std(s.objective_norm) << '\n';
    }
  } else {
    using nlohmann::json;
    // JSON has no NaN; failed runs carry null objectives.
    auto number = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    json runs = json::array();
    for (const RunReport& r : reports) {
      json row = {{"method", to_string(r.method)},
                  {"regularizer", to_string(r.regularizer)},
                  {"beta", r.beta},
                  {"alpha", r.alpha},
                  {"seed", r.seed},
                  {"objective_norm", number(r.objective_norm)},
                  {"cpu_seconds", r.cpu_seconds},
                  {"iterations", r.iterations},
                  {"status", to_string(r.status)}};
      if (!r.failure.empty()) row["failure"] = r.failure;
      runs.push_back(std::move(row));
    }
    json groups = json::array();
    for (const SummaryRow& s : summary) {
      groups.push_back({{"method", to_string(s.method)},
                        {"regularizer", to_string(s.regularizer)},
                        {"beta", s.beta},
                        {"alpha", s.alpha},
                        {"runs", s.runs},
                        {"failed", s.failed},
                        {"converged", s.converged},
                        {"objective_mean", number(s.objective_norm.mean)},
                        {"objective_std", number(s.objective_norm.std)},
                        {"cpu_mean", s.cpu_seconds.mean},
                        {"cpu_std", s.cpu_seconds.std},
                        {"cpu_total", s.cpu_total},
                        {"iterations_mean", s.iterations.mean},
                        {"iterations_std", s.iterations.std},
                        {"table", format_mean_std(s.objective_norm)}});
    }
    out << json{{"runs", runs}, {"summary", groups}}.dump(2) << '\n';
  }
  finish(out, path);
}

void write_trace(const IterationTrace& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "iteration,objective,cpu_seconds,norm_residual\n";
  for (const IterationRecord& r : trace.records) {
    out << r.iteration << ',' << shortest(r.objective) << ',' << shortest(r.cpu_seconds) << ',';
    if (r.norm_residual) out << shortest(*r.norm_residual);
    out << '\n';
  }
  finish(out, path);
}

}  // namespace snmf
