#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "gldlmom/io.hpp"
#include "gldlmom/simbench.hpp"

using namespace gldlmom;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

Run run(const std::string& command, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(split_words(command), in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~EnvGuard() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("lmom emits the L-moments as JSON by default") {
  const Run r = run("lmom --lambda 0,0.19,0.14,0.14 --order 4");
  REQUIRE(r.code == 0);
  const LMomentSet m = io::from_json<LMomentSet>(r.out);
  CHECK(m.l1 == doctest::Approx(0.0).scale(1e-12));
  CHECK(m.l2 == doctest::Approx(0.60407).epsilon(5e-5 / 0.60407));
  CHECK(m.tau3() == doctest::Approx(0.0).scale(1e-12));
  CHECK(m.tau4() == doctest::Approx(0.12305).epsilon(5e-5 / 0.12305));
  CHECK(m == gld_lmoments({0.0, 0.19, 0.14, 0.14}, 4));
}

TEST_CASE("invalid parameters exit 1 with a diagnostic") {
  const Run r = run("validate --lambda 0,1,-0.5,-0.5");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("invalid parameters") != std::string::npos);

  const Run ok = run("validate --lambda 0,0.19,0.14,0.14 --format csv");
  CHECK(ok.code == 0);
  CHECK(ok.out == "valid,region,lmoments_exist\ntrue,R3,true\n");
}

TEST_CASE("census lists four solutions") {
  const Run r = run("census --tau3 0.4 --tau4 0.25 --format csv");
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "region,lambda1,lambda2,lambda3,lambda4,tau3,tau4,tau5,tau6,objective");
  CHECK(lines[1].rfind("R3,", 0) == 0);
  CHECK(lines[2].rfind("R3,", 0) == 0);
  CHECK(lines[3].rfind("R4,", 0) == 0);
  CHECK(lines[4].rfind("R6,", 0) == 0);
}

TEST_CASE("CSV headers") {
  CHECK(lines_of(run("lmom --lambda 0,1,1,1 --format csv").out)[0] == "L1,L2,tau3,tau4");
  CHECK(lines_of(run("atlas --region R4 --resolution 64 --boundary --format csv").out)[0] == "region,tau3,tau4");
  CHECK(lines_of(run("solve-symmetric --tau4 0.1 --format csv").out)[0] == "tau4,root");
  CHECK(lines_of(run("eval --lambda 0,1,1,1 --u 0.5 --format csv").out) ==
        std::vector<std::string>{"u,quantile,quantile_density", "0.5,0,2"});
}

TEST_CASE("exit codes") {
  SUBCASE("unknown flag") { CHECK(run("lmom --lambda 0,1,1,1 --bogus 3").code == 1); }
  SUBCASE("unknown verb") { CHECK(run("frobnicate").code == 1); }
  SUBCASE("no verb") { CHECK(run("").code == 1); }
  SUBCASE("help") { CHECK(run("--help").code == 0); }
  SUBCASE("malformed list") { CHECK(run("lmom --lambda 0,1,1").code == 1); }
  SUBCASE("eval needs exactly one of --u and --x") {
    CHECK(run("eval --lambda 0,1,1,1").code == 1);
    CHECK(run("eval --lambda 0,1,1,1 --u 0.5 --x 0.5").code == 1);
  }
  SUBCASE("infeasible census target") { CHECK(run("census --tau3 0 --tau4 -0.5").code == 1); }
  SUBCASE("empty contour is a numerical failure") {
    const Run r = run("contour --region R4 --statistic tau4 --levels 0.1 --resolution 64");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }
  SUBCASE("digits out of range") { CHECK(run("lmom --lambda 0,1,1,1 --digits 40").code == 1); }
}

TEST_CASE("seeds make sample and simulate reproducible") {
  const std::string cmd = "sample --lambda 0,0.19,0.14,0.14 --n 50 --seed 7 --format csv";
  const Run a = run(cmd), b = run(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines_of(a.out).size() == 51);
  CHECK(run("sample --lambda 0,0.19,0.14,0.14 --n 50 --seed 8 --format csv").out != a.out);

  const std::string sim = "simulate --n 100 --replications 6 --seed 3";
  auto report = [&](const std::string& extra) {
    SimReport r = io::from_json<SimReport>(run(sim + extra).out);
    r.time_seconds = {};
    return r;
  };
  const SimReport x = report("");
  CHECK(x.replications == 6);
  CHECK(x == report(""));
  CHECK(x == report(" --serial"));
}

TEST_CASE("format selection") {
  SUBCASE("environment default") {
    EnvGuard env("GLDLMOM_FORMAT", "csv");
    CHECK(lines_of(run("lmom --lambda 0,1,1,1").out)[0] == "L1,L2,tau3,tau4");
    CHECK(run("lmom --lambda 0,1,1,1 --format json").out.find("\"format\"") != std::string::npos);
  }
  SUBCASE("table aligns columns") {
    const auto lines = lines_of(run("solve-symmetric --tau4 0.1 --format table --digits 6").out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "tau4  root");
    CHECK(lines[1].rfind("0.1   ", 0) == 0);
  }
  SUBCASE("unknown format") { CHECK(run("lmom --lambda 0,1,1,1 --format xml").code == 1); }
  SUBCASE("digits") {
    CHECK(lines_of(run("lmom --lambda 0,0.19,0.14,0.14 --format csv --digits 4").out)[1] == "0,0.6041,0,0.123");
  }
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "gldlmom_cli_output_test.json";
  const Run r = run("solve-symmetric --tau4 0.2 -o " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream file(path);
  std::stringstream text;
  text << file.rdbuf();
  CHECK(io::from_json<SymmetricSolution>(text.str()).roots.size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("fit reads data from standard input") {
  const Run data = run("sample --lambda 0,0.19,0.14,0.14 --n 400 --seed 11 --format csv");
  const Run r = run("fit --data -", data.out);
  REQUIRE(r.code == 0);
  const auto fits = io::from_json<std::vector<FitResult>>(r.out);
  REQUIRE(!fits.empty());
  CHECK(fits[0].converged);
  CHECK(fits[0].ks_statistic.has_value());
  CHECK(run("fit --data /nonexistent/file").code == 1);
  CHECK(run("fit --data -", "1\n2\n").code != 0);
}

// ---- documented examples ----------------------------------------------------
//
// Every "$ gldlmom ..." line inside a ```console block of the README is run
// as written. The lines that follow, up to the next command or the end of the
// block, are the expected output: text must match up to whitespace and numbers
// to a relative 1e-6. A line "..." stands for any number of output lines.
// "a | b" feeds the output of a to b's standard input, and leading NAME=value
// words set environment variables for that command.

namespace {

struct Example {
  int line;
  std::string command;
  std::vector<std::string> expected;
};

std::vector<Example> readme_examples(const std::string& path) {
  std::ifstream file(path);
  REQUIRE_MESSAGE(file, "cannot open " << path);
  std::vector<Example> examples;
  bool in_block = false;
  int lineno = 0;
  for (std::string line; std::getline(file, line);) {
    ++lineno;
    if (!in_block) {
      in_block = line == "```console";
      continue;
    }
    if (line.rfind("```", 0) == 0) {
      in_block = false;
    } else if (line.rfind("$ ", 0) == 0) {
      examples.push_back({lineno, line.substr(2), {}});
    } else if (!examples.empty()) {
      examples.back().expected.push_back(line);
    }
  }
  return examples;
}

struct Piece {
  bool numeric;
  std::string text;
  double value;
};

std::vector<Piece> pieces(const std::string& line) {
  static const std::regex number(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?|[-+]?inf|nan)");
  std::vector<Piece> out;
  auto text_piece = [&](std::string s) {
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    if (!s.empty()) out.push_back({false, s, 0.0});
  };
  std::size_t pos = 0;
  for (auto it = std::sregex_iterator(line.begin(), line.end(), number); it != std::sregex_iterator(); ++it) {
    text_piece(line.substr(pos, it->position() - pos));
    out.push_back({true, it->str(), io::parse_number(it->str())});
    pos = it->position() + it->length();
  }
  text_piece(line.substr(pos));
  return out;
}

bool same_line(const std::string& actual, const std::string& expected) {
  const auto a = pieces(actual), e = pieces(expected);
  if (a.size() != e.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].numeric != e[k].numeric) return false;
    if (!a[k].numeric) {
      if (a[k].text != e[k].text) return false;
      continue;
    }
    const double x = a[k].value, y = e[k].value;
    if (std::isnan(x) || std::isnan(y)) {
      if (std::isnan(x) != std::isnan(y)) return false;
    } else if (std::isinf(y)) {
      if (x != y) return false;
    } else if (!(std::abs(x - y) <= 1e-6 * std::abs(y) + 1e-12)) {
      return false;
    }
  }
  return true;
}

bool matches(const std::vector<std::string>& actual, std::size_t i, const std::vector<std::string>& expected,
             std::size_t j) {
  if (j == expected.size()) return i == actual.size();
  if (expected[j] == "...") {
    for (std::size_t k = i; k <= actual.size(); ++k)
      if (matches(actual, k, expected, j + 1)) return true;
    return false;
  }
  return i < actual.size() && same_line(actual[i], expected[j]) && matches(actual, i + 1, expected, j + 1);
}

Run run_pipeline(const std::string& command) {
  std::string input;
  Run last{0, {}, {}};
  std::size_t pos = 0;
  while (pos <= command.size()) {
    const auto bar = command.find(" | ", pos);
    const std::string stage = command.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
    pos = bar == std::string::npos ? command.size() + 1 : bar + 3;

    auto words = split_words(stage);
    std::vector<std::pair<std::string, std::string>> env;
    while (!words.empty() && words.front().find('=') != std::string::npos && words.front().front() != '-') {
      const auto eq = words.front().find('=');
      env.emplace_back(words.front().substr(0, eq), words.front().substr(eq + 1));
      words.erase(words.begin());
    }
    REQUIRE_MESSAGE(!words.empty(), "empty pipeline stage in: " << command);
    REQUIRE_MESSAGE(words.front() == "gldlmom", "README example does not run gldlmom: " << command);
    words.erase(words.begin());

    for (const auto& [name, value] : env) ::setenv(name.c_str(), value.c_str(), 1);
    std::istringstream in(input);
    std::ostringstream out, err;
    last.code = cli::run(words, in, out, err);
    for (const auto& kv : env) ::unsetenv(kv.first.c_str());
    last.out = out.str();
    last.err = err.str();
    if (last.code != 0) break;
    input = last.out;
  }
  return last;
}

}  // namespace

TEST_CASE("README examples run verbatim") {
  const auto examples = readme_examples(GLDLMOM_README);
  REQUIRE(examples.size() >= 8);
  for (const auto& ex : examples) {
    INFO("README line " << ex.line << ": " << ex.command);
    const Run r = run_pipeline(ex.command);
    // Diagnostics go to stderr; a documented "error:" line means a failing run.
    const bool expects_error =
        std::any_of(ex.expected.begin(), ex.expected.end(), [](const std::string& l) { return l.rfind("error:", 0) == 0; });
    CHECK((r.code != 0) == expects_error);
    const auto actual = lines_of(r.out + r.err);
    INFO("actual output:\n" << r.out << r.err);
    CHECK(matches(actual, 0, ex.expected, 0));
  }
}
