#pragma once

// Iterative solvers for F(x) = 0.
//
//   newton    x+ = x - F'(x)^-1 F(x)                                 order 2
//   pg6       three-point scheme, two F and two F' per step          order 6
//   cordero5  shares y, z with pg6, last step uses F'(y)              order 5
//   cordero6  weighted variant with 3F'(y) - F'(x) reused twice      order 6
//
// No inverse is ever formed: every inverse-times-vector is a factor-and-solve
// against an explicitly formed matrix, and F'(x) is factored once per step.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multipoint/linalg.hpp"
#include "multipoint/problem.hpp"

namespace multipoint {

enum class MethodId { newton, pg6, cordero5, cordero6 };

inline std::string_view to_string(MethodId m) noexcept {
  switch (m) {
    case MethodId::newton: return "newton";
    case MethodId::pg6: return "pg6";
    case MethodId::cordero5: return "cordero5";
    case MethodId::cordero6: return "cordero6";
  }
  return "?";
}

inline MethodId parse_method(std::string_view s) {
  if (s == "newton") return MethodId::newton;
  if (s == "pg6") return MethodId::pg6;
  if (s == "cordero5") return MethodId::cordero5;
  if (s == "cordero6") return MethodId::cordero6;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline int theoretical_order(MethodId m) noexcept {
  switch (m) {
    case MethodId::newton: return 2;
    case MethodId::pg6: return 6;
    case MethodId::cordero5: return 5;
    case MethodId::cordero6: return 6;
  }
  return 0;
}

struct SolverConfig {
  double tol = 1e-12;
  int max_iter = 100;
  NormKind norm_kind = NormKind::l2;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be at least 1");
  }
};

struct IterationRecord {
  int k = 0;
  Vector iterate;
  std::optional<double> step_norm;   // absent for k = 0
  std::optional<double> error_norm;  // present when the root is known
};

enum class SolveStatus { Converged, MaxIterReached, SingularJacobian };

inline std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
    case SolveStatus::SingularJacobian: return "SingularJacobian";
  }
  return "?";
}

struct SolveTrace {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::MaxIterReached;
  OpCount ops;
  MethodId method = MethodId::newton;
  std::string problem_name;
  NormKind norm_kind = NormKind::l2;
  std::string detail;  // why the run stopped early, if it did

  int iterations() const noexcept { return static_cast<int>(records.size()) - 1; }
  /// Steps that moved the iterate by at least tol. A converged trace ends
  /// with one confirming step below tol, which is not counted.
  int full_iterations() const noexcept {
    return status == SolveStatus::Converged ? iterations() - 1 : iterations();
  }
  const Vector& final_iterate() const { return records.back().iterate; }

  std::vector<double> step_norms() const {
    std::vector<double> d;
    for (const auto& r : records)
      if (r.step_norm) d.push_back(*r.step_norm);
    return d;
  }
};

namespace detail {

inline LuFactors factor_tagged(const Matrix& a, OpCount& counter, const char* which) {
  try {
    return lu_factor(a, counter);
  } catch (const SingularMatrix& e) {
    throw SingularMatrix(std::string(which) + " is singular: " + e.what(), which);
  }
}

}  // namespace detail

inline Vector newton_step(const NonlinearProblem& p, const Vector& x, OpCount& counter) {
  const Vector fx = p.residual(x, counter);
  const Matrix jx = p.jacobian(x, counter);
  const LuFactors lu = detail::factor_tagged(jx, counter, "F'(x)");
  return x - lu_solve(lu, fx, counter);
}

struct Pg6Step {
  Vector x_next;
  Vector y;
  Vector z;
};

inline Pg6Step pg6_step(const NonlinearProblem& p, const Vector& x, OpCount& counter) {
  const Vector fx = p.residual(x, counter);
  const Matrix jx = p.jacobian(x, counter);
  const LuFactors lu_x = detail::factor_tagged(jx, counter, "F'(x)");

  Vector y = x - lu_solve(lu_x, fx, counter);
  const Matrix jy = p.jacobian(y, counter);

  const Matrix sum = mat_combine(jx, jy, 1.0, 1.0, counter);
  const LuFactors lu_sum = detail::factor_tagged(sum, counter, "F'(x)+F'(y)");
  Vector z = x - scaled(2.0, lu_solve(lu_sum, fx, counter), counter);

  const Vector fz = p.residual(z, counter);
  const Vector w = lu_solve(lu_x, fz, counter);
  const Matrix weighted = mat_combine(jy, jx, 3.0, -1.0, counter);
  const LuFactors lu_weighted = detail::factor_tagged(weighted, counter, "3F'(y)-F'(x)");
  Vector x_next = z - lu_solve(lu_weighted, mat_vec(sum, w, counter), counter);

  return Pg6Step{std::move(x_next), std::move(y), std::move(z)};
}

inline Vector cordero5_step(const NonlinearProblem& p, const Vector& x, OpCount& counter) {
  const Vector fx = p.residual(x, counter);
  const Matrix jx = p.jacobian(x, counter);
  const LuFactors lu_x = detail::factor_tagged(jx, counter, "F'(x)");

  const Vector y = x - lu_solve(lu_x, fx, counter);
  const Matrix jy = p.jacobian(y, counter);

  const Matrix sum = mat_combine(jx, jy, 1.0, 1.0, counter);
  const LuFactors lu_sum = detail::factor_tagged(sum, counter, "F'(x)+F'(y)");
  const Vector z = x - scaled(2.0, lu_solve(lu_sum, fx, counter), counter);

  const Vector fz = p.residual(z, counter);
  const LuFactors lu_y = detail::factor_tagged(jy, counter, "F'(y)");
  return z - lu_solve(lu_y, fz, counter);
}

inline Vector cordero6_step(const NonlinearProblem& p, const Vector& x, OpCount& counter) {
  const Vector fx = p.residual(x, counter);
  const Matrix jx = p.jacobian(x, counter);
  const LuFactors lu_x = detail::factor_tagged(jx, counter, "F'(x)");

  const Vector newton_dir = lu_solve(lu_x, fx, counter);
  const Vector y = x - scaled(2.0 / 3.0, newton_dir, counter);
  const Matrix jy = p.jacobian(y, counter);

  const Matrix weighted = mat_combine(jy, jx, 3.0, -1.0, counter);
  const Matrix weighted_sum = mat_combine(jy, jx, 3.0, 1.0, counter);
  const LuFactors lu_weighted = detail::factor_tagged(weighted, counter, "3F'(y)-F'(x)");

  const Vector v = mat_vec(weighted_sum, newton_dir, counter);
  const Vector z = x - scaled(0.5, lu_solve(lu_weighted, v, counter), counter);

  const Vector fz = p.residual(z, counter);
  return z - scaled(2.0, lu_solve(lu_weighted, fz, counter), counter);
}

inline Vector method_step(MethodId m, const NonlinearProblem& p, const Vector& x,
                          OpCount& counter) {
  switch (m) {
    case MethodId::newton: return newton_step(p, x, counter);
    case MethodId::pg6: return pg6_step(p, x, counter).x_next;
    case MethodId::cordero5: return cordero5_step(p, x, counter);
    case MethodId::cordero6: return cordero6_step(p, x, counter);
  }
  throw std::invalid_argument("method_step: bad method id");
}

/// Iterates past this magnitude are treated as divergence.
inline constexpr double kDivergenceBound = 1e12;

/// Runs `m` from x0 until ||x(k+1) - x(k)|| < tol. Failures are reported
/// through the trace status, never thrown; only a malformed config or a
/// start of the wrong dimension throws.
inline SolveTrace solve(const NonlinearProblem& p, MethodId m, const Vector& x0,
                        const SolverConfig& cfg = {}) {
  cfg.validate();
  if (x0.dim() != p.dim) {
    throw DimensionMismatch("solve: start has dimension " + std::to_string(x0.dim()) +
                            ", problem " + p.name + " has dimension " + std::to_string(p.dim));
  }

  SolveTrace trace;
  trace.method = m;
  trace.problem_name = p.name;
  trace.norm_kind = cfg.norm_kind;

  auto error_of = [&](const Vector& x) -> std::optional<double> {
    if (!p.known_solution) return std::nullopt;
    return norm(x - *p.known_solution, cfg.norm_kind);
  };

  trace.records.push_back(IterationRecord{0, x0, std::nullopt, error_of(x0)});
  Vector x = x0;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    std::optional<Vector> next;
    try {
      next = method_step(m, p, x, trace.ops);
    } catch (const SingularMatrix& e) {
      trace.status = SolveStatus::SingularJacobian;
      trace.detail = e.what();
      return trace;
    } catch (const NonFiniteValue& e) {
      trace.status = SolveStatus::MaxIterReached;
      trace.detail = std::string("diverged: ") + e.what();
      return trace;
    }

    const double step = norm(*next - x, cfg.norm_kind);
    trace.records.push_back(IterationRecord{k, *next, step, error_of(*next)});
    x = *next;

    if (step < cfg.tol) {
      trace.status = SolveStatus::Converged;
      return trace;
    }
    if (norm(x, NormKind::linf) > kDivergenceBound) {
      trace.status = SolveStatus::MaxIterReached;
      trace.detail = "diverged: iterate exceeds divergence bound";
      return trace;
    }
  }
  trace.status = SolveStatus::MaxIterReached;
  trace.detail = "iteration limit reached";
  return trace;
}

}  // namespace multipoint
