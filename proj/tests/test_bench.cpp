#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cscs/bench.hpp"
#include "helpers.hpp"

using namespace cscs;
using testutil::random_matrix;
using testutil::random_toeplitz;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("complex literals round trip through the text form") {
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> u(-1e8, 1e8);
  for (int i = 0; i < 200; ++i) {
    const Complex z{u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15),
                    u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15)};
    const Complex back = detail::parse_complex(detail::format_complex(z));
    REQUIRE(back.real() == z.real());
    REQUIRE(back.imag() == z.imag());
  }
  REQUIRE(detail::parse_complex("2.5") == Complex{2.5, 0.0});
  REQUIRE(detail::parse_complex("-1e-3-2.5e+4j") == Complex{-1e-3, -2.5e4});
  REQUIRE(detail::parse_complex("0-0j") == Complex{0.0, -0.0});
  REQUIRE_THROWS_AS(detail::parse_complex("fish"), std::runtime_error);
  REQUIRE_THROWS_AS(detail::parse_complex("3j"), std::runtime_error);
  REQUIRE_THROWS_AS(detail::parse_complex(""), std::runtime_error);
}

TEST_CASE("problem files round trip exactly") {
  std::mt19937_64 rng(502);
  ProblemInstance p;
  p.a = random_toeplitz(rng, 5);
  p.b = random_toeplitz(rng, 4);
  p.c = random_matrix(rng, 5, 4);
  p.x_true = random_matrix(rng, 5, 4);
  p.meta.generator = "handmade";
  p.meta.params = {{"seed", 7.0}, {"scale", 0.12345678901234567}};

  std::stringstream ss;
  save_problem_file(p, ss);
  const ProblemInstance q = load_problem_file(ss);

  REQUIRE(q.a.n == 5);
  REQUIRE((q.a.first_col - p.a.first_col).norm() == 0.0);
  REQUIRE((q.a.first_row - p.a.first_row).norm() == 0.0);
  REQUIRE((q.b.first_col - p.b.first_col).norm() == 0.0);
  REQUIRE((q.c - p.c).norm() == 0.0);
  REQUIRE(q.x_true.has_value());
  REQUIRE((*q.x_true - *p.x_true).norm() == 0.0);
  REQUIRE(q.meta.generator == "handmade");
  REQUIRE(q.meta.params.at("scale") == p.meta.params.at("scale"));
}

TEST_CASE("problem file errors name the offending field") {
  const std::string missing_c = R"({"n": 2, "m": 2,
    "A": {"first_col": ["1+0j", "0+0j"], "first_row": ["1+0j", "0+0j"]},
    "B": {"first_col": ["1+0j", "0+0j"], "first_row": ["1+0j", "0+0j"]}})";
  std::stringstream s1(missing_c);
  REQUIRE_THROWS_WITH(load_problem_file(s1), Catch::Matchers::ContainsSubstring("'C'"));

  const std::string corner = R"({"n": 1, "m": 1,
    "A": {"first_col": ["1+0j"], "first_row": ["2+0j"]},
    "B": {"first_col": ["1+0j"], "first_row": ["1+0j"]},
    "C": [["1+0j"]]})";
  std::stringstream s2(corner);
  REQUIRE_THROWS_AS(load_problem_file(s2), std::runtime_error);

  std::stringstream s3(R"({"n": 2, "m")");  // truncated
  REQUIRE_THROWS_WITH(load_problem_file(s3), Catch::Matchers::ContainsSubstring("parse error"));

  const std::string short_row = R"({"n": 2, "m": 2,
    "A": {"first_col": ["1+0j", "0+0j"], "first_row": ["1+0j", "0+0j"]},
    "B": {"first_col": ["1+0j", "0+0j"], "first_row": ["1+0j", "0+0j"]},
    "C": [["1+0j"], ["1+0j", "2+0j"]]})";
  std::stringstream s4(short_row);
  REQUIRE_THROWS_WITH(load_problem_file(s4), Catch::Matchers::ContainsSubstring("'C'"));
}

TEST_CASE("csv report pins the header and writes one row per cell") {
  BenchConfig cfg;
  cfg.methods = {"oracle"};
  cfg.problem = "example3";
  cfg.sizes = {4};
  cfg.reps = 1;
  const auto records = run_bench(cfg);
  REQUIRE(records.size() == 1);

  std::stringstream ss;
  emit_report(records, "csv", ss);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  REQUIRE(header == "method,problem,n,m,alpha,beta,omega,iters,resid,seconds,status");
  const auto fields = split_csv(row);
  REQUIRE(fields.size() == 11);
  REQUIRE(fields[0] == "oracle");
  REQUIRE(fields[1] == "example3");
  REQUIRE(fields[2] == "4");
  REQUIRE(fields[3] == "4");
  REQUIRE(fields[4].empty());  // no shifts for a direct method
  REQUIRE(fields[7] == "1");
  REQUIRE(fields[10] == "completed");
  REQUIRE(record_succeeded(records[0]));
}

TEST_CASE("markdown rows carry the same payload as csv rows") {
  BenchConfig cfg;
  cfg.methods = {"cscs", "bssor"};
  cfg.problem = "example3";
  cfg.sizes = {6};
  cfg.reps = 1;
  cfg.omega = 1.1;
  const auto records = run_bench(cfg);
  REQUIRE(records.size() == 2);

  std::stringstream csv, md;
  emit_report(records, "csv", csv);
  emit_report(records, "markdown", md);

  std::string line;
  std::getline(csv, line);  // header
  std::vector<std::vector<std::string>> csv_rows;
  while (std::getline(csv, line)) csv_rows.push_back(split_csv(line));

  std::getline(md, line);  // header
  std::getline(md, line);  // separator
  std::vector<std::vector<std::string>> md_rows;
  while (std::getline(md, line)) {
    std::vector<std::string> cells;
    std::string cur;
    for (std::size_t i = 1; i + 1 < line.size(); ++i) {  // strip outer pipes
      if (line[i] == '|') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += line[i];
      }
    }
    cells.push_back(cur);
    for (auto& cell : cells) {
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      while (!cell.empty() && cell.back() == ' ') cell.pop_back();
    }
    md_rows.push_back(std::move(cells));
  }

  REQUIRE(md_rows.size() == csv_rows.size());
  for (std::size_t r = 0; r < csv_rows.size(); ++r) {
    REQUIRE(md_rows[r].size() == csv_rows[r].size());
    for (std::size_t f = 0; f < csv_rows[r].size(); ++f) REQUIRE(md_rows[r][f] == csv_rows[r][f]);
  }
}

TEST_CASE("json report nulls out options a method does not take") {
  BenchConfig cfg;
  cfg.methods = {"bartels_stewart"};
  cfg.problem = "example3";
  cfg.sizes = {3};
  cfg.reps = 1;
  const auto records = run_bench(cfg);
  std::stringstream ss;
  emit_report(records, "json", ss);
  const auto j = nlohmann::json::parse(ss.str());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  REQUIRE(j[0]["alpha"].is_null());
  REQUIRE(j[0]["omega"].is_null());
  REQUIRE(j[0]["status"] == "completed");
  REQUIRE(j[0]["n"] == 3);

  REQUIRE_THROWS_AS(emit_report(records, "yaml", ss), std::invalid_argument);
}

TEST_CASE("parallel mode reproduces the serial records") {
  BenchConfig cfg;
  cfg.methods = {"cscs", "hss"};
  cfg.problem = "example3";
  cfg.sizes = {5, 8};
  cfg.reps = 1;
  const auto serial = run_bench(cfg);
  cfg.parallel = true;
  const auto parallel = run_bench(cfg);

  REQUIRE(serial.size() == 4);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(parallel[i].method == serial[i].method);
    REQUIRE(parallel[i].n == serial[i].n);
    REQUIRE(parallel[i].iterations == serial[i].iterations);
    REQUIRE(parallel[i].resid == serial[i].resid);
    REQUIRE(parallel[i].status == serial[i].status);
  }
}

TEST_CASE("singular stored problems surface as a status, not an exception") {
  ProblemInstance p;
  ComplexVector e1 = ComplexVector::Zero(2);
  e1[0] = 1.0;
  p.a = ToeplitzSpec(e1, e1);        // identity
  p.b = ToeplitzSpec(-e1, -e1);      // minus identity: shared spectrum with -A
  p.c = DenseMatrix::Constant(2, 2, Complex{1.0, 0.0});
  p.meta.generator = "singular-pair";

  const auto path = std::filesystem::temp_directory_path() / "cscs_singular_problem.json";
  save_problem_file(p, path.string());

  BenchConfig cfg;
  cfg.methods = {"oracle", "bartels_stewart"};
  cfg.problem_file = path.string();
  cfg.reps = 1;
  const auto records = run_bench(cfg);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    REQUIRE(r.status == "singular");
    REQUIRE_FALSE(record_succeeded(r));
    REQUIRE(r.problem == "singular-pair");
  }
  std::filesystem::remove(path);
}

TEST_CASE("bench validates its configuration") {
  BenchConfig cfg;
  cfg.reps = 0;
  REQUIRE_THROWS_AS(run_bench(cfg), std::invalid_argument);
  cfg = {};
  cfg.methods = {};
  REQUIRE_THROWS_AS(run_bench(cfg), std::invalid_argument);
  cfg = {};
  cfg.sizes = {};
  REQUIRE_THROWS_AS(run_bench(cfg), std::invalid_argument);
  cfg = {};
  cfg.methods = {"sorcery"};
  cfg.sizes = {4};
  cfg.reps = 1;
  REQUIRE_THROWS_AS(run_bench(cfg), std::invalid_argument);
  cfg = {};
  cfg.problem = "examplex";
  cfg.reps = 1;
  REQUIRE_THROWS_AS(run_bench(cfg), std::invalid_argument);
}
