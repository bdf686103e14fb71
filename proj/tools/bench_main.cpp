// Command-line benchmark driver.  Expands the flag set into a BenchConfig,
// runs the requested cells, and prints one table.  Exit code 0 means every
// cell reported converged or completed.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cscs/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks for Sylvester solvers with Toeplitz coefficients"};

  cscs::BenchConfig cfg;
  std::vector<std::int64_t> sizes{64};
  std::string format = "csv";
  std::string out_path;
  std::string dump_path;

  app.add_option("--method", cfg.methods,
                 "comma-separated list of cscs, hss, bssor, bartels_stewart, oracle")
      ->delimiter(',');
  app.add_option("--problem", cfg.problem, "example1 | cd2 | example2 | example3 | example4")
      ->capture_default_str();
  app.add_option("--n", sizes, "matrix orders (comma-separated list runs one cell each)")
      ->delimiter(',');
  app.add_option("--m", cfg.m, "second grid size for example2 (default: same as --n)");
  app.add_option("--sigma", cfg.sigma, "convection coefficient for A")->capture_default_str();
  app.add_option("--tau", cfg.tau, "convection coefficient for B")->capture_default_str();
  app.add_option("--r", cfg.r, "off-diagonal asymmetry for example3")->capture_default_str();
  app.add_option("--scheme", cfg.scheme, "example1 discretisation: centered | upwind")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "relative residual stopping tolerance")->capture_default_str();
  app.add_option("--maxit", cfg.max_iterations, "iteration cap")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "left shift (omit both shifts for the automatic choice)");
  app.add_option("--beta", cfg.beta, "right shift");
  app.add_option("--shift-mult", cfg.shift_multiplier, "scale applied to the automatic shift")
      ->capture_default_str();
  app.add_option("--omega", cfg.omega, "bssor relaxation parameter")->capture_default_str();
  app.add_option("--seed", cfg.seed, "rng seed for random problem data")->capture_default_str();
  app.add_option("--reps", cfg.reps, "timed repetitions per cell (median reported)")
      ->capture_default_str();
  app.add_option("--rhs-mode", cfg.rhs_mode, "example3 right-hand side: known | random")
      ->capture_default_str();
  app.add_option("--margin", cfg.margin, "example4 spectral margin")->capture_default_str();
  app.add_option("--problem-file", cfg.problem_file,
                 "solve a stored problem instead of a generated one");
  app.add_option("--format", format, "csv | markdown | json")->capture_default_str();
  app.add_option("--out", out_path, "write the table to a file instead of stdout");
  app.add_option("--dump-problem", dump_path,
                 "write the generated problem to a file and exit without solving");
  app.add_flag("--parallel", cfg.parallel, "run cells concurrently (same records, unordered work)");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.sizes.assign(sizes.begin(), sizes.end());

    if (!dump_path.empty()) {
      if (cfg.sizes.empty()) throw std::invalid_argument("--dump-problem needs --n");
      cscs::save_problem_file(cscs::detail::make_instance(cfg, cfg.sizes.front()), dump_path);
      return 0;
    }

    const auto records = cscs::run_bench(cfg);
    if (!out_path.empty()) {
      std::ofstream os(out_path);
      if (!os) throw std::runtime_error("cannot open '" + out_path + "' for writing");
      cscs::emit_report(records, format, os);
    } else {
      cscs::emit_report(records, format, std::cout);
    }

    for (const auto& r : records)
      if (!cscs::record_succeeded(r)) return 1;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  }
}
