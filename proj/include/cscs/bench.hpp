#pragma once

// Benchmark harness behind the CLI: expands a config into (method, problem,
// size) cells, times solves (median over repetitions after one discarded
// warmup), and renders records as csv, markdown, or json.  Also the round-trip
// reader/writer for self-describing problem files.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cscs/baselines.hpp"
#include "cscs/problems.hpp"
#include "cscs/solver.hpp"
#include "cscs/types.hpp"

namespace cscs {

// ---- problem files ---------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

inline std::string format_complex(const Complex& z) {
  std::string s = format_double(z.real());
  const double im = z.imag();
  s += std::signbit(im) ? '-' : '+';
  s += format_double(std::abs(im));
  s += 'j';
  return s;
}

inline double parse_double_token(std::string_view sv, const std::string& original) {
  double v = 0.0;
  const char* first = sv.data();
  const char* last = sv.data() + sv.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::runtime_error("problem file: bad numeric literal in '" + original + "'");
  return v;
}

// accepts "re" and "re+imj" / "re-imj"; exponent signs do not split the token
inline Complex parse_complex(const std::string& tok) {
  if (tok.empty()) throw std::runtime_error("problem file: empty complex literal");
  if (tok.back() != 'j') return {parse_double_token(tok, tok), 0.0};
  const std::string_view body(tok.data(), tok.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char ch = body[i];
    if ((ch == '+' || ch == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos)
    throw std::runtime_error("problem file: complex literal '" + tok + "' lacks a real part");
  const double re = parse_double_token(body.substr(0, split), tok);
  double im = parse_double_token(body.substr(split + 1), tok);
  if (body[split] == '-') im = -im;
  return {re, im};
}

inline const nlohmann::json& need_field(const nlohmann::json& j, const char* key,
                                        const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end())
    throw std::runtime_error("problem file: missing field '" + ctx + key + "'");
  return *it;
}

inline ComplexVector read_complex_vector(const nlohmann::json& arr, Index expect,
                                         const std::string& ctx) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expect)
    throw std::runtime_error("problem file: field '" + ctx + "' must be an array of length " +
                             std::to_string(expect));
  ComplexVector v(expect);
  for (Index i = 0; i < expect; ++i) v[i] = parse_complex(arr[static_cast<std::size_t>(i)].get<std::string>());
  return v;
}

inline nlohmann::json write_complex_vector(const ComplexVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(format_complex(v[i]));
  return arr;
}

inline nlohmann::json write_matrix(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(format_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseMatrix read_matrix(const nlohmann::json& rows, Index n, Index m,
                               const std::string& ctx) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw std::runtime_error("problem file: field '" + ctx + "' must have " + std::to_string(n) +
                             " rows");
  DenseMatrix out(n, m);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m)
      throw std::runtime_error("problem file: row " + std::to_string(i) + " of '" + ctx +
                               "' must have " + std::to_string(m) + " entries");
    for (Index j = 0; j < m; ++j)
      out(i, j) = parse_complex(row[static_cast<std::size_t>(j)].get<std::string>());
  }
  return out;
}

}  // namespace detail

inline void save_problem_file(const ProblemInstance& p, std::ostream& os) {
  nlohmann::json j;
  j["n"] = p.a.n;
  j["m"] = p.b.n;
  j["A"] = {{"first_col", detail::write_complex_vector(p.a.first_col)},
            {"first_row", detail::write_complex_vector(p.a.first_row)}};
  j["B"] = {{"first_col", detail::write_complex_vector(p.b.first_col)},
            {"first_row", detail::write_complex_vector(p.b.first_row)}};
  j["C"] = detail::write_matrix(p.c);
  if (p.x_true) j["X_true"] = detail::write_matrix(*p.x_true);
  j["meta"] = {{"generator", p.meta.generator}, {"params", p.meta.params}};
  os << j.dump(1) << '\n';
}

inline void save_problem_file(const ProblemInstance& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("problem file: cannot open '" + path + "' for writing");
  save_problem_file(p, os);
}

inline ProblemInstance load_problem_file(std::istream& is) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("problem file: parse error: ") + e.what());
  }
  const Index n = detail::need_field(j, "n", "").get<Index>();
  const Index m = detail::need_field(j, "m", "").get<Index>();
  if (n < 1 || m < 1) throw std::runtime_error("problem file: orders must be positive");

  const auto& ja = detail::need_field(j, "A", "");
  const auto& jb = detail::need_field(j, "B", "");
  ProblemInstance p;
  try {
    p.a = ToeplitzSpec(detail::read_complex_vector(detail::need_field(ja, "first_col", "A."), n, "A.first_col"),
                       detail::read_complex_vector(detail::need_field(ja, "first_row", "A."), n, "A.first_row"));
    p.b = ToeplitzSpec(detail::read_complex_vector(detail::need_field(jb, "first_col", "B."), m, "B.first_col"),
                       detail::read_complex_vector(detail::need_field(jb, "first_row", "B."), m, "B.first_row"));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("problem file: ") + e.what());
  }
  p.c = detail::read_matrix(detail::need_field(j, "C", ""), n, m, "C");
  if (j.contains("X_true")) p.x_true = detail::read_matrix(j["X_true"], n, m, "X_true");
  if (j.contains("meta")) {
    const auto& meta = j["meta"];
    if (meta.contains("generator")) p.meta.generator = meta["generator"].get<std::string>();
    if (meta.contains("params"))
      for (const auto& [key, val] : meta["params"].items())
        p.meta.params[key] = val.get<double>();
  }
  return p;
}

inline ProblemInstance load_problem_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("problem file: cannot open '" + path + "'");
  return load_problem_file(is);
}

// ---- bench configs and records ---------------------------------------------

struct BenchConfig {
  std::vector<std::string> methods{"cscs"};
  std::string problem = "example3";
  std::vector<Index> sizes{64};
  Index m = 0;  // example2: second grid size (0 means same as n)
  double sigma = 2.0;
  double tau = 2.0;
  double r = 0.01;
  std::string scheme = "centered";
  double tol = 1e-6;
  int max_iterations = 5000;
  std::optional<double> alpha;
  std::optional<double> beta;
  double shift_multiplier = 1.0;
  double omega = 1.0;
  std::uint64_t seed = 8461;
  int reps = 3;
  std::string rhs_mode = "known";  // example3: known | random
  double margin = 0.1;             // example4 spectral margin
  std::string problem_file;        // when nonempty, overrides `problem`
  bool parallel = false;
};

struct BenchRecord {
  std::string method;
  std::string problem;
  Index n = 0;
  Index m = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> omega;
  int iterations = 0;
  double resid = 0.0;
  double seconds = 0.0;
  std::string status;  // converged | max_iterations | breakdown | singular | completed
};

inline bool record_succeeded(const BenchRecord& r) {
  return r.status == "converged" || r.status == "completed";
}

namespace detail {

inline ProblemInstance make_instance(const BenchConfig& cfg, Index n) {
  if (!cfg.problem_file.empty()) return load_problem_file(cfg.problem_file);
  if (cfg.problem == "example1") {
    if (cfg.scheme != "centered" && cfg.scheme != "upwind")
      throw std::invalid_argument("scheme must be centered or upwind");
    return convection_diffusion_example1(
        n, cfg.sigma, cfg.tau,
        cfg.scheme == "upwind" ? Example1Scheme::upwind : Example1Scheme::centered);
  }
  if (cfg.problem == "cd2") return convection_diffusion_cd2(n, cfg.sigma, cfg.tau);
  if (cfg.problem == "example2")
    return example2_instance(n, cfg.m > 0 ? cfg.m : n, cfg.sigma, cfg.tau, cfg.seed);
  if (cfg.problem == "example3") {
    if (cfg.rhs_mode != "known" && cfg.rhs_mode != "random")
      throw std::invalid_argument("rhs mode must be known or random");
    return example3_instance(n, cfg.r,
                             cfg.rhs_mode == "random" ? Example3Rhs::uniform_random
                                                      : Example3Rhs::known_solution,
                             cfg.seed);
  }
  if (cfg.problem == "example4") return example4_instance(n, cfg.seed, cfg.margin);
  throw std::invalid_argument("unknown problem '" + cfg.problem + "'");
}

struct CellOutcome {
  int iterations = 0;
  double resid = 0.0;
  std::string status;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> omega;
};

inline std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    default: return "breakdown";
  }
}

inline CellOutcome run_method_once(const BenchConfig& cfg, const std::string& method,
                                   const ProblemInstance& inst) {
  CellOutcome out;
  try {
    if (method == "cscs") {
      SolveOptions o;
      o.alpha = cfg.alpha;
      o.beta = cfg.beta;
      o.tol = cfg.tol;
      o.max_iterations = cfg.max_iterations;
      o.shift_multiplier = cfg.shift_multiplier;
      const SolveReport rep = cscs_solve(inst.a, inst.b, inst.c, o);
      out.iterations = rep.iterations;
      out.resid = rep.residual_history.back();
      out.status = status_name(rep.status);
      out.alpha = rep.alpha;
      out.beta = rep.beta;
      return out;
    }
    const DenseMatrix a = to_dense(inst.a);
    const DenseMatrix b = to_dense(inst.b);
    if (method == "hss") {
      HssOptions o;
      o.alpha = cfg.alpha;
      o.beta = cfg.beta;
      o.tol = cfg.tol;
      o.max_iterations = cfg.max_iterations;
      o.shift_multiplier = cfg.shift_multiplier;
      const SolveReport rep = hss_solve(a, b, inst.c, o);
      out.iterations = rep.iterations;
      out.resid = rep.residual_history.back();
      out.status = status_name(rep.status);
      out.alpha = rep.alpha;
      out.beta = rep.beta;
      return out;
    }
    if (method == "bssor") {
      BssorOptions o;
      o.omega = cfg.omega;
      o.tol = cfg.tol;
      o.max_iterations = cfg.max_iterations;
      const SolveReport rep = bssor_solve(a, b, inst.c, o);
      out.iterations = rep.iterations;
      out.resid = rep.residual_history.back();
      out.status = status_name(rep.status);
      out.omega = cfg.omega;
      return out;
    }
    if (method == "bartels_stewart" || method == "oracle") {
      const DenseMatrix x =
          method == "oracle" ? kron_oracle_solve(a, b, inst.c) : bartels_stewart_solve(a, b, inst.c);
      const double cnorm = inst.c.norm();
      out.resid = dense_residual(a, b, inst.c, x).norm() / (cnorm > 0.0 ? cnorm : 1.0);
      out.iterations = 1;
      out.status = "completed";
      return out;
    }
    throw std::invalid_argument("unknown method '" + method + "'");
  } catch (const BreakdownError&) {
    out.status = "breakdown";
    out.resid = std::numeric_limits<double>::quiet_NaN();
    return out;
  } catch (const SingularEquationError&) {
    out.status = "singular";
    out.resid = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
}

inline BenchRecord run_cell(const BenchConfig& cfg, const std::string& method, Index n) {
  const ProblemInstance inst = make_instance(cfg, n);
  BenchRecord rec;
  rec.method = method;
  rec.problem = !cfg.problem_file.empty()
                    ? (inst.meta.generator.empty() ? "file" : inst.meta.generator)
                    : cfg.problem;
  rec.n = inst.a.n;
  rec.m = inst.b.n;

  auto timed = [&](CellOutcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_method_once(cfg, method, inst);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  CellOutcome out;
  timed(out);  // warmup, discarded
  std::vector<double> times(static_cast<std::size_t>(cfg.reps));
  for (auto& t : times) t = timed(out);
  std::sort(times.begin(), times.end());
  const std::size_t h = times.size() / 2;
  rec.seconds = times.size() % 2 == 1 ? times[h] : 0.5 * (times[h - 1] + times[h]);

  rec.iterations = out.iterations;
  rec.resid = out.resid;
  rec.status = out.status;
  rec.alpha = out.alpha;
  rec.beta = out.beta;
  rec.omega = out.omega;
  return rec;
}

inline std::string sig6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string opt_sig6(const std::optional<double>& v) { return v ? sig6(*v) : ""; }

}  // namespace detail

// Cells run in deterministic order (methods outer, sizes inner); the opt-in
// parallel mode farms cells out but stores results by index, so the report is
// identical either way.
inline std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (cfg.methods.empty()) throw std::invalid_argument("no methods given");
  std::vector<std::pair<std::string, Index>> cells;
  const std::vector<Index> sizes = cfg.problem_file.empty() ? cfg.sizes : std::vector<Index>{0};
  if (sizes.empty()) throw std::invalid_argument("no sizes given");
  for (const auto& method : cfg.methods)
    for (const Index n : sizes) cells.emplace_back(method, n);

  std::vector<BenchRecord> records(cells.size());
  if (cfg.parallel) {
    std::vector<std::future<BenchRecord>> futs;
    futs.reserve(cells.size());
    for (const auto& [method, n] : cells)
      futs.push_back(std::async(std::launch::async,
                                [&cfg, method = method, n = n] { return detail::run_cell(cfg, method, n); }));
    for (std::size_t i = 0; i < futs.size(); ++i) records[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i)
      records[i] = detail::run_cell(cfg, cells[i].first, cells[i].second);
  }
  return records;
}

// csv and markdown carry the same column payload; json mirrors the fields
// with nulls for options a method does not take.
inline void emit_report(const std::vector<BenchRecord>& records, std::string_view format,
                        std::ostream& os) {
  static constexpr const char* kColumns[] = {"method", "problem", "n",       "m",
                                             "alpha",  "beta",    "omega",   "iters",
                                             "resid",  "seconds", "status"};
  auto row_fields = [](const BenchRecord& r) {
    return std::vector<std::string>{r.method,
                                    r.problem,
                                    std::to_string(r.n),
                                    std::to_string(r.m),
                                    detail::opt_sig6(r.alpha),
                                    detail::opt_sig6(r.beta),
                                    detail::opt_sig6(r.omega),
                                    std::to_string(r.iterations),
                                    detail::sig6(r.resid),
                                    detail::sig6(r.seconds),
                                    r.status};
  };

  if (format == "csv") {
    for (std::size_t i = 0; i < std::size(kColumns); ++i)
      os << kColumns[i] << (i + 1 < std::size(kColumns) ? "," : "\n");
    for (const auto& r : records) {
      const auto fields = row_fields(r);
      for (std::size_t i = 0; i < fields.size(); ++i)
        os << fields[i] << (i + 1 < fields.size() ? "," : "\n");
    }
    return;
  }
  if (format == "markdown") {
    os << '|';
    for (const auto* col : kColumns) os << ' ' << col << " |";
    os << "\n|";
    for (std::size_t i = 0; i < std::size(kColumns); ++i) os << " --- |";
    os << '\n';
    for (const auto& r : records) {
      const auto fields = row_fields(r);
      os << '|';
      for (const auto& f : fields) os << ' ' << (f.empty() ? " " : f) << " |";
      os << '\n';
    }
    return;
  }
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
      nlohmann::json j{{"method", r.method}, {"problem", r.problem},   {"n", r.n},
                       {"m", r.m},           {"iters", r.iterations},  {"resid", r.resid},
                       {"seconds", r.seconds}, {"status", r.status}};
      j["alpha"] = r.alpha ? nlohmann::json(*r.alpha) : nlohmann::json(nullptr);
      j["beta"] = r.beta ? nlohmann::json(*r.beta) : nlohmann::json(nullptr);
      j["omega"] = r.omega ? nlohmann::json(*r.omega) : nlohmann::json(nullptr);
      arr.push_back(std::move(j));
    }
    os << arr.dump(1) << '\n';
  } else {
    throw std::invalid_argument("unknown format '" + std::string(format) + "'");
  }
}

}  // namespace cscs
