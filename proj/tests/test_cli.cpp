#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "snmf/cli.hpp"
#include "snmf/io.hpp"

using namespace snmf;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "snmf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path dir() {
  const auto d = std::filesystem::temp_directory_path() / "snmf_cli_tests";
  std::filesystem::create_directories(d);
  return d;
}

std::string p(const std::string& name) { return (dir() / name).string(); }

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth then factorize writes factors and a monotone trace") {
  REQUIRE(cli({"synth", "--rows", "50", "--cols", "40", "--seed", "1", "--out", p("v.csv")}).code ==
          0);
  const Outcome r = cli({"factorize", "--input", p("v.csv"), "--k", "3", "--beta", "-0.5",
                         "--alpha", "5", "--reg", "l1", "--method", "mm", "--out-w", p("w.csv"),
                         "--out-h", p("h.csv"), "--trace", p("trace.csv"), "--max-iter", "300"});
  CHECK(r.code == 0);
  const Matrix w = load_dense(p("w.csv"));
  const Matrix h = load_dense(p("h.csv"));
  CHECK(w.rows() == 50);
  CHECK(w.cols() == 3);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 40);
  for (const double s : col_sums(w)) CHECK(std::abs(s - 1.0) <= 1e-10);

  const auto lines = read_lines(p("trace.csv"));
  REQUIRE(lines.size() > 2);
  CHECK(lines[0] == "iteration,objective,cpu_seconds,norm_residual");
  double prev = INFINITY;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c1 = lines[i].find(',');
    const auto c2 = lines[i].find(',', c1 + 1);
    const double j = std::stod(lines[i].substr(c1 + 1, c2 - c1 - 1));
    CHECK(j <= prev + 1e-9 * std::abs(prev));
    prev = j;
  }
}

TEST_CASE("max-iter 0 echoes the initialization") {
  REQUIRE(cli({"synth", "--rows", "6", "--cols", "5", "--out", p("v0.csv")}).code == 0);
  const Matrix w0{{1, 2}, {3, 4}, {1, 1}, {2, 2}, {1, 3}, {2, 1}};
  const Matrix h0{{1, 1, 1, 1, 1}, {2, 2, 2, 2, 2}};
  write_matrix_csv(w0, p("w0.csv"));
  write_matrix_csv(h0, p("h0.csv"));
  const Outcome r = cli({"factorize", "--input", p("v0.csv"), "--k", "2", "--max-iter", "0",
                         "--init", p("w0.csv"), p("h0.csv"), "--out-w", p("w1.csv"), "--out-h",
                         p("h1.csv")});
  CHECK(r.code == 0);
  CHECK(r.err.find("iteration cap") != std::string::npos);
  const Matrix w1 = load_dense(p("w1.csv"));
  const Matrix h1 = load_dense(p("h1.csv"));
  CHECK(w1(0, 0) == doctest::Approx(1.0 / 10.0));
  CHECK(h1(0, 0) == doctest::Approx(10.0));
}

TEST_CASE("unsupported lagrangian beta is a usage error") {
  REQUIRE(cli({"synth", "--rows", "6", "--cols", "5", "--out", p("v2.csv")}).code == 0);
  const Outcome r = cli({"factorize", "--input", p("v2.csv"), "--k", "2", "--beta", "1.3",
                         "--method", "lagr", "--out-w", p("w2.csv"), "--out-h", p("h2.csv")});
  CHECK(r.code == 2);
  CHECK(r.err.find("beta <= 1") != std::string::npos);
  CHECK(r.err.find("usage error") != std::string::npos);
}

TEST_CASE("flag errors are usage errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"factorize", "--k", "2"}).code == 2);
  CHECK(cli({"verify", "--suite", "nope"}).code == 2);
  CHECK(cli({"factorize", "--input", p("missing.csv"), "--k", "2", "--out-w", p("a"), "--out-h",
             p("b")})
            .code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("malformed input fails with exit 1") {
  {
    std::ofstream bad(p("bad.csv"));
    bad << "1,2\n3,-4\n";
  }
  const Outcome r = cli({"factorize", "--input", p("bad.csv"), "--k", "1", "--out-w", p("a.csv"),
                         "--out-h", p("b.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("benchmark report rows") {
  REQUIRE(cli({"synth", "--rows", "12", "--cols", "10", "--out", p("vb.csv")}).code == 0);
  const Outcome r = cli({"benchmark", "--input", p("vb.csv"), "--k", "2", "--beta", "0",
                         "--alpha", "0.5", "--methods", "mm,heur", "--seeds", "3", "--max-iter",
                         "50", "--report", p("report.csv"), "--jobs", "2"});
  CHECK(r.code == 0);
  const auto lines = read_lines(p("report.csv"));
  CHECK(lines.size() == 1 + 6 + 1 + 2);
  CHECK(r.out.find("mm-l1") != std::string::npos);
  CHECK(r.out.find("heur-l1") != std::string::npos);

  const Outcome one = cli({"benchmark", "--input", p("vb.csv"), "--k", "2", "--methods",
                           "mm,heur,lagr", "--seeds", "1", "--max-iter", "20", "--report",
                           p("report.json")});
  CHECK(one.code == 0);
  const Outcome bad = cli({"benchmark", "--input", p("vb.csv"), "--k", "2", "--beta", "2",
                           "--methods", "lagr", "--report", p("x.csv")});
  CHECK(bad.code == 2);
}

TEST_CASE("verify suites") {
  const Outcome ok = cli({"verify", "--suite", "majorization", "--trials", "20"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("0 violations") != std::string::npos);
  CHECK(cli({"verify", "--suite", "descent", "--trials", "0"}).code == 0);
  CHECK(cli({"verify", "--suite", "cross-method", "--trials", "10"}).code == 0);
  CHECK(cli({"verify", "--suite", "descent", "--trials", "30"}).code == 0);
}

TEST_CASE("installed binary honors the exit-status contract") {
  const std::string tool = SNMF_TOOL_PATH;
  const std::string quiet = " >/dev/null 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  CHECK(status(std::system((tool + " verify --suite cross-method --trials 3" + quiet).c_str())) ==
        0);
  CHECK(status(std::system((tool + " factorize --k 2" + quiet).c_str())) == 2);
}

}  // TEST_SUITE
