#pragma once

// Command-line front end: `solve`, `efficiency` and `tables`.
//
// run_cli() is the whole program minus argv handling so that tests can drive
// it with in-memory streams. Exit codes: 0 converged / success, 1 usage
// error, 2 iteration limit or divergence, 3 singular Jacobian.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "multipoint/convergence.hpp"
#include "multipoint/efficiency.hpp"
#include "multipoint/format.hpp"
#include "multipoint/problem.hpp"
#include "multipoint/problem_spec.hpp"
#include "multipoint/solvers.hpp"

namespace multipoint::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kMaxIter = 2, kSingular = 3 };

enum class OutputFormat { table, csv, json };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline OutputFormat parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw UsageError("unknown format '" + std::string(s) + "'");
}

inline int exit_code_for(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::MaxIterReached: return kMaxIter;
    case SolveStatus::SingularJacobian: return kSingular;
  }
  return kUsage;
}

/// "1,2.5,-3" or "fill:7.25" (the latter repeated to `dim` entries).
inline Vector parse_vector(std::string_view text, std::size_t dim) {
  auto parse_number = [](std::string_view tok) {
    std::string s(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in vector");
    }
    if (used != s.size()) throw UsageError("bad number '" + s + "' in vector");
    return v;
  };

  constexpr std::string_view fill = "fill:";
  if (text.starts_with(fill)) return Vector::filled(dim, parse_number(text.substr(fill.size())));

  std::vector<double> xs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    xs.push_back(parse_number(text.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (xs.size() != dim) {
    throw UsageError("start vector has " + std::to_string(xs.size()) + " components, problem needs " +
                     std::to_string(dim));
  }
  try {
    return Vector(std::move(xs));
  } catch (const NonFiniteValue&) {
    throw UsageError("start vector must be finite");
  }
}

/// A registered name, or a path to a JSON problem spec.
inline NonlinearProblem resolve_problem(const std::string& ref) {
  if (ref.ends_with(".json") || std::filesystem::is_regular_file(ref)) {
    std::ifstream in(ref);
    if (!in) throw UsageError("cannot open problem spec '" + ref + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return problem_from_json_text(ss.str());
  }
  return find_problem(ref);
}

/// Inclusive "a:b" or a single "a".
inline std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad range '" + text + "'");
    }
    if (used != s.size()) throw UsageError("bad range '" + text + "'");
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  const int lo = to_int(text.substr(0, colon));
  const int hi = to_int(text.substr(colon + 1));
  if (hi < lo) throw UsageError("empty range '" + text + "'");
  return {lo, hi};
}

inline std::vector<MethodId> parse_methods(const std::string& text) {
  std::vector<MethodId> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(parse_method(tok));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no methods selected");
  return out;
}

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json ops_json(const OpCount& ops) {
  return {{"products", ops.products()},
          {"quotients", ops.quotients()},
          {"residual_evals", ops.residual_evals()},
          {"jacobian_evals", ops.jacobian_evals()},
          {"lu_factorizations", ops.lu_factorizations()}};
}

inline std::optional<CocEstimate> try_coc(const SolveTrace& t) {
  try {
    return coc_estimate(t);
  } catch (const InsufficientData&) {
    return std::nullopt;
  }
}

inline nlohmann::json trace_to_json(const SolveTrace& t, const SolverConfig& cfg) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : t.records) {
    records.push_back({{"k", r.k},
                       {"iterate", r.iterate.to_std()},
                       {"step_norm", optional_number(r.step_norm)},
                       {"error_norm", optional_number(r.error_norm)}});
  }
  nlohmann::json coc = nullptr;
  if (auto est = try_coc(t)) {
    nlohmann::json per_k = nlohmann::json::array();
    for (const auto& [k, p] : est->per_k) per_k.push_back({{"k", k}, {"p", p}});
    coc = {{"p_max", est->p_max}, {"valid_count", est->valid_count}, {"per_k", per_k}};
  }
  return {{"problem", t.problem_name},
          {"method", std::string(to_string(t.method))},
          {"config",
           {{"tol", cfg.tol}, {"max_iter", cfg.max_iter}, {"norm", std::string(to_string(cfg.norm_kind))}}},
          {"status", std::string(to_string(t.status))},
          {"iterations", t.iterations()},
          {"full_iterations", t.full_iterations()},
          {"records", records},
          {"coc", coc},
          {"ops", ops_json(t.ops)}};
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + ' ' : s + std::string(width - s.size(), ' ');
}

inline void write_trace_footer(std::ostream& os, const SolveTrace& t, std::string_view prefix) {
  os << prefix << "status: " << to_string(t.status) << '\n';
  if (!t.detail.empty()) os << prefix << "detail: " << t.detail << '\n';
  os << prefix << "iterations: " << t.iterations() << " (full: " << t.full_iterations() << ")\n";
  const auto est = try_coc(t);
  os << prefix << "coc_p_max: " << (est ? format_roundtrip(est->p_max) : std::string("n/a")) << '\n';
  os << prefix << "ops: products=" << t.ops.products() << " quotients=" << t.ops.quotients()
     << " residual_evals=" << t.ops.residual_evals() << " jacobian_evals=" << t.ops.jacobian_evals()
     << " lu_factorizations=" << t.ops.lu_factorizations() << '\n';
}

inline void write_trace_table(std::ostream& os, const SolveTrace& t) {
  const std::size_t n = t.final_iterate().dim();
  constexpr std::size_t w = 26;
  os << "problem " << t.problem_name << "  method " << to_string(t.method) << "  norm "
     << to_string(t.norm_kind) << '\n';
  os << pad("k", 4);
  for (std::size_t i = 0; i < n; ++i) os << pad("x" + std::to_string(i + 1), w);
  os << pad("step_norm", w) << "error_norm\n";
  for (const auto& r : t.records) {
    os << pad(std::to_string(r.k), 4);
    for (double x : r.iterate.components()) os << pad(format_sig17(x), w);
    os << pad(r.step_norm ? format_sig17(*r.step_norm) : "-", w)
       << (r.error_norm ? format_sig17(*r.error_norm) : "-") << '\n';
  }
  write_trace_footer(os, t, "");
}

inline void write_trace_csv(std::ostream& os, const SolveTrace& t) {
  const std::size_t n = t.final_iterate().dim();
  os << "k";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << ",step_norm,error_norm\n";
  for (const auto& r : t.records) {
    os << r.k;
    for (double x : r.iterate.components()) os << ',' << format_roundtrip(x);
    os << ',' << (r.step_norm ? format_roundtrip(*r.step_norm) : "");
    os << ',' << (r.error_norm ? format_roundtrip(*r.error_norm) : "") << '\n';
  }
  write_trace_footer(os, t, "# ");
}

inline void write_sweep_table(std::ostream& os, const std::vector<SweepRow>& rows) {
  constexpr std::size_t w = 24;
  os << pad("method", 10) << pad("n", 5) << pad("C", w) << pad("E", w) << pad("R_vs_cordero5", w)
     << "R_vs_cordero6\n";
  for (const auto& r : rows) {
    os << pad(std::string(to_string(r.method)), 10) << pad(std::to_string(r.n), 5)
       << pad(format_sig17(r.C), w) << pad(format_sig17(r.E), w) << pad(format_sig17(r.R_vs_cordero5), w)
       << format_sig17(r.R_vs_cordero6) << '\n';
  }
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"method", std::string(to_string(r.method))},
                   {"n", r.n},
                   {"mu0", r.mu0},
                   {"mu1", r.mu1},
                   {"l", r.l},
                   {"C", r.C},
                   {"E", r.E},
                   {"R_vs_cordero5", r.R_vs_cordero5},
                   {"R_vs_cordero6", r.R_vs_cordero6}});
  }
  return out;
}

/// Reproduces the published iteration tables for both test problems.
inline void write_tables(std::ostream& os) {
  const SolverConfig cfg{};  // tol 1e-12, l2 stopping norm
  constexpr std::size_t w = 26;

  {
    const auto p = problem1();
    const auto t = solve(p, MethodId::pg6, p.default_start, cfg);
    const auto err_l1 = error_norms(t, *p.known_solution, NormKind::l1);
    os << "Problem 1: x1^3 x2^3 - 1 = 0, x1 - 1 = 0; pg6 from (2, 2), tol 1e-12\n";
    os << "  columns x1, x2: iterate values (asserted against the reference table)\n";
    os << "  columns step_l2, error_l1: norm diagnostics (informational)\n";
    os << pad("k", 4) << pad("x1", w) << pad("x2", w) << pad("step_l2", w) << "error_l1\n";
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      const auto& r = t.records[i];
      os << pad(std::to_string(r.k), 4) << pad(format_sig17(r.iterate[0]), w)
         << pad(format_sig17(r.iterate[1]), w) << pad(r.step_norm ? format_sig17(*r.step_norm) : "-", w)
         << format_sig17(err_l1[i]) << '\n';
    }
    write_trace_footer(os, t, "  ");
    os << '\n';
  }

  {
    const auto p = bvp_problem(BvpSpec(7));
    const auto t = solve(p, MethodId::pg6, p.default_start, cfg);
    os << "Problem 2: boundary value problem, n = 7 (6 unknowns); pg6 from 7.25 * ones, tol 1e-12\n";
    os << "  columns x1..x6: iterate values (asserted against the reference table)\n";
    os << "  column step_l2: successive-difference norm (asserted, relative 1e-6)\n";
    os << pad("k", 4);
    for (int i = 1; i <= 6; ++i) os << pad("x" + std::to_string(i), w);
    os << "step_l2\n";
    for (const auto& r : t.records) {
      os << pad(std::to_string(r.k), 4);
      for (double x : r.iterate.components()) os << pad(format_sig17(x), w);
      os << (r.step_norm ? format_sig17(*r.step_norm) : "-") << '\n';
    }
    write_trace_footer(os, t, "  ");
  }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipoint iterative solvers for nonlinear systems", "multipoint"};
  app.require_subcommand(1);

  std::string problem_ref, method_name = "pg6", x0_text, norm_name = "l2", format_name = "table";
  SolverConfig cfg;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a registered or file-specified problem");
  solve_cmd->add_option("--problem", problem_ref, "problem1, bvp7, bvp:<n>, or a JSON spec file")->required();
  solve_cmd->add_option("--method", method_name, "newton, pg6, cordero5 or cordero6");
  solve_cmd->add_option("--x0", x0_text, "start vector: comma-separated or fill:<value>");
  solve_cmd->add_option("--tol", cfg.tol, "stopping tolerance on the step norm");
  solve_cmd->add_option("--max-iter", cfg.max_iter, "iteration limit");
  solve_cmd->add_option("--norm", norm_name, "l1, l2 or linf");
  solve_cmd->add_option("--format", format_name, "table, csv or json");

  std::string n_range = "2:30", methods_text = "pg6,cordero5,cordero6", eff_format = "table";
  double mu0 = 1.0, mu1 = 1.0, l = 1.0;
  bool crossover = false;
  auto* eff_cmd = app.add_subcommand("efficiency", "Tabulate cost, efficiency index and ratios");
  eff_cmd->add_option("--n", n_range, "system size or inclusive range a:b");
  eff_cmd->add_option("--mu0", mu0, "cost of one F component in products");
  eff_cmd->add_option("--mu1", mu1, "cost of one Jacobian entry in products");
  eff_cmd->add_option("--l", l, "cost of one quotient in products");
  eff_cmd->add_option("--methods", methods_text, "comma-separated subset of pg6,cordero5,cordero6");
  eff_cmd->add_option("--format", eff_format, "table, csv or json");
  eff_cmd->add_flag("--crossover", crossover, "print the smallest n where pg6 beats cordero5");

  auto* tables_cmd = app.add_subcommand("tables", "Reproduce the reference iteration tables");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve_cmd) {
      const auto fmt = parse_format(format_name);
      const auto method = parse_method(method_name);
      cfg.norm_kind = parse_norm_kind(norm_name);
      cfg.validate();
      const auto problem = resolve_problem(problem_ref);
      const Vector x0 = x0_text.empty() ? problem.default_start : parse_vector(x0_text, problem.dim);
      const auto trace = solve(problem, method, x0, cfg);
      switch (fmt) {
        case OutputFormat::table: write_trace_table(out, trace); break;
        case OutputFormat::csv: write_trace_csv(out, trace); break;
        case OutputFormat::json: out << trace_to_json(trace, cfg).dump(2) << '\n'; break;
      }
      return exit_code_for(trace.status);
    }
    if (*eff_cmd) {
      const auto fmt = parse_format(eff_format);
      const auto [lo, hi] = parse_range(n_range);
      const auto methods = parse_methods(methods_text);
      CostModel{lo, mu0, mu1, l}.validate();
      if (crossover) {
        const auto n = pg6_crossover(lo, hi, mu0, mu1, l);
        out << (n ? std::to_string(*n) : std::string("none")) << '\n';
        return kOk;
      }
      const auto rows = efficiency_sweep(methods, lo, hi, mu0, mu1, l);
      switch (fmt) {
        case OutputFormat::table: write_sweep_table(out, rows); break;
        case OutputFormat::csv: write_sweep_csv(out, rows); break;
        case OutputFormat::json: out << sweep_to_json(rows).dump(2) << '\n'; break;
      }
      return kOk;
    }
    if (*tables_cmd) {
      write_tables(out);
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    // UsageError, UnknownProblem, InvalidSpec, DimensionMismatch, bad enums.
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace multipoint::cli
