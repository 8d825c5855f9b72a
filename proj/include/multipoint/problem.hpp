#pragma once

// Nonlinear systems F(x) = 0 with analytic Jacobians, plus the two built-in
// test systems: a 2x2 polynomial system and a finite-difference
// discretization of y'' = y^3/2 + 3y' - 3/(2-x) + 1/2, y(0)=0, y(1)=1.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multipoint/linalg.hpp"

namespace multipoint {

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

struct NonlinearProblem {
  std::string name;
  std::size_t dim = 0;
  ResidualFn residual_fn;
  JacobianFn jacobian_fn;
  std::optional<Vector> known_solution;
  Vector default_start = Vector::zeros(1);

  Vector residual(const Vector& x) const {
    check_input(x);
    return residual_fn(x);
  }
  Matrix jacobian(const Vector& x) const {
    check_input(x);
    return jacobian_fn(x);
  }

  // Counted evaluations, one tick per full F or F' evaluation.
  Vector residual(const Vector& x, OpCount& counter) const {
    counter.add_residual_eval();
    return residual(x);
  }
  Matrix jacobian(const Vector& x, OpCount& counter) const {
    counter.add_jacobian_eval();
    return jacobian(x);
  }

 private:
  void check_input(const Vector& x) const {
    if (x.dim() != dim) {
      throw DimensionMismatch(name + ": expected a " + std::to_string(dim) +
                              "-vector, got dimension " + std::to_string(x.dim()));
    }
  }
};

/// F(x) = (x1^3 x2^3 - 1, x1 - 1), root (1, 1), start (2, 2).
inline NonlinearProblem problem1() {
  NonlinearProblem p;
  p.name = "problem1";
  p.dim = 2;
  p.residual_fn = [](const Vector& x) {
    const double a = x[0] * x[0] * x[0];
    const double b = x[1] * x[1] * x[1];
    return Vector{a * b - 1.0, x[0] - 1.0};
  };
  p.jacobian_fn = [](const Vector& x) {
    const double x1 = x[0], x2 = x[1];
    return Matrix{{3.0 * x1 * x1 * x2 * x2 * x2, 3.0 * x1 * x1 * x1 * x2 * x2}, {1.0, 0.0}};
  };
  p.known_solution = Vector{1.0, 1.0};
  p.default_start = Vector{2.0, 2.0};
  return p;
}

/// Uniform grid on [0, 1] with n subintervals.
class BvpSpec {
 public:
  explicit BvpSpec(int n) : n_(n) {
    if (n < 2) throw InvalidSpec("BvpSpec: need at least 2 subintervals, got " + std::to_string(n));
  }
  int n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / n_; }
  double x(int j) const noexcept { return j * h(); }

 private:
  int n_;
};

/// Which three-point stencil bvp_problem() builds.
///
/// Row j (j = 1..n-1, y_0 = 0, y_n = 1) is
///   (1 + 3h/2) y_{j-1} + s (1 - 3h/2) y_{j+1} - 2 y_j - (h^2/2) y_j^3
///     + 3h^2/(2 - x_j) - h^2/2
/// with s = +1 for the central-difference discretization and s = -1 for the
/// stencil that generated the reference iteration tables. Only the latter
/// has the tabulated 6-component root as a zero; the central stencil leaves
/// a residual of about 1.57 there.
enum class BvpStencil {
  reference,
  central,
  /// Central stencil whose last row ends in +h^2/2 + (1 - 3h/2), copied
  /// from the hand-expanded n = 7 system. Diagnostic only.
  central_printed_last_row,
};

inline std::string_view to_string(BvpStencil s) noexcept {
  switch (s) {
    case BvpStencil::reference: return "reference";
    case BvpStencil::central: return "central";
    case BvpStencil::central_printed_last_row: return "central_printed_last_row";
  }
  return "?";
}

/// Reference root of the n=7 system (20 significant digits).
inline Vector bvp7_reference_solution() {
  return Vector{0.0083494505929842810, 0.0077178744477447688, 0.0257257242738628680,
                -0.0169564948809037690, 0.1244784293587575000, -0.2954656773600666300};
}

inline NonlinearProblem bvp_problem(const BvpSpec& spec, BvpStencil stencil = BvpStencil::reference) {
  const int n = spec.n();
  const double h = spec.h();
  const double lower = 1.0 + 1.5 * h;
  const double upper = (stencil == BvpStencil::reference ? -1.0 : 1.0) * (1.0 - 1.5 * h);
  const double half_h2 = 0.5 * h * h;
  const std::size_t m = static_cast<std::size_t>(n - 1);

  std::vector<double> forcing(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double xj = spec.x(static_cast<int>(i) + 1);
    forcing[i] = 3.0 * h * h / (2.0 - xj) - half_h2;
  }
  forcing[m - 1] += upper;  // y_n = 1
  if (stencil == BvpStencil::central_printed_last_row) forcing[m - 1] += 2.0 * half_h2;

  NonlinearProblem p;
  p.name = "bvp:" + std::to_string(n);
  if (stencil != BvpStencil::reference) p.name += "/" + std::string(to_string(stencil));
  p.dim = m;
  p.residual_fn = [=](const Vector& y) {
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double left = i == 0 ? 0.0 : lower * y[i - 1];
      const double right = i + 1 == m ? 0.0 : upper * y[i + 1];
      const double yi = y[i];
      f[i] = left + right - 2.0 * yi - half_h2 * yi * yi * yi + forcing[i];
    }
    return Vector(std::move(f));
  };
  p.jacobian_fn = [=](const Vector& y) {
    std::vector<double> jac(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      jac[i * m + i] = -2.0 - 3.0 * half_h2 * y[i] * y[i];
      if (i > 0) jac[i * m + i - 1] = lower;
      if (i + 1 < m) jac[i * m + i + 1] = upper;
    }
    return Matrix(m, std::move(jac));
  };
  if (n == 7 && stencil == BvpStencil::reference) p.known_solution = bvp7_reference_solution();
  p.default_start = Vector::filled(m, 7.25);
  return p;
}

/// Max entrywise |analytic - central difference| over the Jacobian at x.
/// The step for coordinate j is step * max(1, |x_j|).
inline double fd_jacobian_check(const NonlinearProblem& p, const Vector& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_jacobian_check: step must be positive");
  const Matrix analytic = p.jacobian(x);
  const std::size_t n = p.dim;
  double worst = 0.0;
  std::vector<double> shifted(x.components().begin(), x.components().end());
  for (std::size_t j = 0; j < n; ++j) {
    const double hj = step * std::max(1.0, std::abs(x[j]));
    shifted[j] = x[j] + hj;
    const Vector fp = p.residual(Vector(shifted));
    shifted[j] = x[j] - hj;
    const Vector fm = p.residual(Vector(shifted));
    shifted[j] = x[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double fd = (fp[i] - fm[i]) / (2.0 * hj);
      worst = std::max(worst, std::abs(analytic(i, j) - fd));
    }
  }
  return worst;
}

/// Looks up "problem1", "bvp7" or "bvp:<n>".
inline NonlinearProblem find_problem(std::string_view name) {
  if (name == "problem1") return problem1();
  if (name == "bvp7") {
    auto p = bvp_problem(BvpSpec(7));
    p.name = "bvp7";
    return p;
  }
  constexpr std::string_view prefix = "bvp:";
  if (name.starts_with(prefix)) {
    const std::string_view digits = name.substr(prefix.size());
    int n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
      throw UnknownProblem("malformed problem name '" + std::string(name) + "'");
    }
    return bvp_problem(BvpSpec(n));
  }
  throw UnknownProblem("unknown problem '" + std::string(name) + "'");
}

inline std::vector<std::string> registered_problem_names() {
  return {"problem1", "bvp7", "bvp:<n>"};
}

}  // namespace multipoint
