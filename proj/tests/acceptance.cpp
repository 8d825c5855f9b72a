// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "multipoint/multipoint.hpp"

using namespace multipoint;

namespace {

constexpr MethodId kAllMethods[] = {MethodId::newton, MethodId::pg6, MethodId::cordero5, MethodId::cordero6};

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_matrix(std::size_t n, std::mt19937& rng, double diag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = u(rng) + (i == j ? diag : 0.0);
  return Matrix(n, std::move(d));
}

NonlinearProblem left_transformed(const NonlinearProblem& p, const Matrix& t) {
  NonlinearProblem g = p;
  g.name = p.name + "-transformed";
  g.residual_fn = [p, t](const Vector& x) {
    OpCount scratch;
    return mat_vec(t, p.residual(x), scratch);
  };
  g.jacobian_fn = [p, t](const Vector& x) { return t * p.jacobian(x); };
  return g;
}

// x^3 - 2 embedded as a 1-dimensional system.
NonlinearProblem cube_root_two() {
  NonlinearProblem p;
  p.name = "cube-root-two";
  p.dim = 1;
  p.residual_fn = [](const Vector& x) { return Vector{x[0] * x[0] * x[0] - 2.0}; };
  p.jacobian_fn = [](const Vector& x) { return Matrix{{3.0 * x[0] * x[0]}}; };
  p.default_start = Vector{1.5};
  return p;
}

void criterion1(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = problem1();
  const auto t = solve(p, MethodId::pg6, Vector{2, 2}, SolverConfig{1e-12, 100, NormKind::l2});
  const double elapsed = seconds_since(t0);
  c.expect(t.status == SolveStatus::Converged, "status Converged");
  c.expect(t.full_iterations() <= 4, "at most 4 full iterations");
  if (t.records.size() > 2) {
    const auto& x1 = t.records[1].iterate;
    const auto& x2 = t.records[2].iterate;
    c.expect(std::abs(x1[0] - 1.0) <= 1e-12 && std::abs(x1[1] - 2.2768666526192436) <= 1e-12, "x(1)");
    c.expect(std::abs(x2[0] - 1.0) <= 1e-12 && std::abs(x2[1] - 1.0411980475199967) <= 1e-12, "x(2)");
  } else {
    c.expect(false, "trace too short");
  }
  c.expect(elapsed < 0.1, "runtime < 0.1 s");
  c.note << " full_iterations=" << t.full_iterations() << " steps=" << t.iterations()
         << " x(1)[1]=" << format_sig17(t.records.at(1).iterate[1]) << " time=" << elapsed << "s";
}

void criterion2(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = find_problem("bvp:7");
  const auto t = solve(p, MethodId::pg6, Vector::filled(6, 7.25), SolverConfig{1e-12, 100, NormKind::l2});
  const double elapsed = seconds_since(t0);
  c.expect(t.status == SolveStatus::Converged, "status Converged");
  c.expect(t.iterations() == 4, "4 iterations");
  const auto alpha = bvp7_reference_solution();
  double worst = 0.0;
  for (std::size_t i = 0; i < 6; ++i) worst = std::max(worst, std::abs(t.final_iterate()[i] - alpha[i]));
  c.expect(worst <= 1e-12, "final iterate vs reference root");
  const double expected[] = {18.083123849280749, 0.29949347374483143, 1.7236776477730e-11};
  const auto d = t.step_norms();
  for (std::size_t i = 0; i < 3; ++i)
    c.expect(d.size() > i && near_rel(d[i], expected[i], 1e-6), "step norm " + std::to_string(i + 1));
  const double p_max = coc_estimate(t).p_max;
  c.expect(std::abs(p_max - 5.7499) <= 0.01, "COC 5.7499 +- 0.01");
  c.expect(elapsed < 0.1, "runtime < 0.1 s");
  c.note << " iterations=" << t.iterations() << " max|x-alpha|=" << worst << " p_max=" << p_max
         << " time=" << elapsed << "s";
}

void criterion3(Check& c) {
  struct Case {
    const char* problem;
    MethodId method;
    std::optional<double> fill;
    double lo, hi;
  };
  const Case cases[] = {
      {"bvp:7", MethodId::pg6, std::nullopt, 5.4, 6.6},    {"bvp:15", MethodId::pg6, 0.5, 5.4, 6.6},
      {"problem1", MethodId::newton, std::nullopt, 1.8, 2.2}, {"bvp:7", MethodId::cordero5, std::nullopt, 4.4, 5.6},
      {"bvp:7", MethodId::cordero6, std::nullopt, 5.3, 6.6},
  };
  for (const auto& k : cases) {
    const auto p = find_problem(k.problem);
    const Vector x0 = k.fill ? Vector::filled(p.dim, *k.fill) : p.default_start;
    const auto t = solve(p, k.method, x0);
    double p_max = std::nan("");
    try {
      p_max = coc_estimate(t).p_max;
    } catch (const InsufficientData&) {
    }
    const std::string label = std::string(to_string(k.method)) + "@" + k.problem;
    c.expect(t.status == SolveStatus::Converged && p_max >= k.lo && p_max <= k.hi, label);
    c.note << ' ' << label << '=' << p_max;
  }
}

void criterion4(Check& c) {
  struct Budget {
    MethodId m;
    std::uint64_t res, jac, lu;
  };
  const Budget budgets[] = {{MethodId::pg6, 2, 2, 3},
                            {MethodId::cordero5, 2, 2, 3},
                            {MethodId::cordero6, 2, 2, 2},
                            {MethodId::newton, 1, 1, 1}};
  for (const char* name : {"problem1", "bvp7"}) {
    const auto p = find_problem(name);
    for (const auto& b : budgets) {
      OpCount ops;
      Vector x = p.default_start;
      for (int k = 0; k < 3; ++k) {
        const OpCount before = ops;
        x = method_step(b.m, p, x, ops);
        const OpCount d = ops.since(before);
        c.expect(d.residual_evals() == b.res && d.jacobian_evals() == b.jac && d.lu_factorizations() == b.lu,
                 std::string(to_string(b.m)) + "@" + name);
      }
    }
  }
  c.note << " per-step (res,jac,lu) checked for 4 methods x 2 problems x 3 steps";
}

void criterion5(Check& c) {
  std::mt19937 rng(5);
  for (std::uint64_t n = 2; n <= 12; ++n) {
    const Matrix a = random_matrix(n, rng, 4.0);
    std::vector<double> b(n, 1.0);
    OpCount ops;
    const auto lu = lu_factor(a, ops);
    (void)lu_solve(lu, Vector(b), ops);
    const std::uint64_t products = n * (n - 1) * (2 * n - 1) / 6 + n * (n - 1);
    const std::uint64_t quotients = n * (n - 1) / 2 + n;
    c.expect(ops.products() == products && ops.quotients() == quotients, "n=" + std::to_string(n));
  }
  c.note << " n=2..12 exact";
}

void criterion6(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const CostModel unit{2, 1, 1, 1};
  c.expect(cost(MethodId::pg6, unit) == 56.0 && cost(MethodId::cordero5, unit) == 44.0 &&
               cost(MethodId::cordero6, unit) == 50.0,
           "costs (56, 44, 50)");
  c.expect(boundary_f(2, 1) == 18.0, "boundary_f(2,1) = 18");
  for (int n = 2; n <= 100; ++n)
    for (double l : {1.0, 2.5, 5.0, 10.0}) c.expect(boundary_f(n, l) > 0.0, "boundary_f > 0");
  const double g20 = boundary_g(20, 0.01, 1);
  c.expect(g20 > 0.0, "g(20, 0.01, 1) > 0");
  for (double mu1 : {0.01, 0.1, 1.0, 10.0}) {
    for (double l : {1.0, 2.0, 5.0, 10.0}) {
      for (int n = 21; n <= 200; ++n) {
        c.expect(boundary_g(n, mu1, l) < 0.0, "g < 0 for n >= 21");
        for (double mu0 : {1e-6, 1.0, 1e6})
          c.expect(ratio(MethodId::pg6, MethodId::cordero5, CostModel{n, mu0, mu1, l}) > 1.0, "ratio vs cordero5");
      }
    }
  }
  for (int n = 2; n <= 30; ++n)
    c.expect(ratio(MethodId::pg6, MethodId::cordero6, CostModel{n, 1, 1, 1}) < 1.0, "ratio vs cordero6 < 1");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 1.0, "runtime < 1 s");
  c.note << " g(20,0.01,1)=" << g20 << " crossover(mu=1)=" << pg6_crossover(2, 30, 1, 1, 1).value_or(-1)
         << " time=" << elapsed << "s";
}

void criterion7(Check& c) {
  std::mt19937 rng(7);

  // Fixed-point invariance.
  {
    const auto p = problem1();
    const Vector root{1, 1};
    for (auto m : kAllMethods) {
      OpCount ops;
      c.expect(method_step(m, p, root, ops) == root, "fixed point " + std::string(to_string(m)));
    }
  }

  // Affine covariance, random 3x3 T on a 3-unknown system.
  {
    const auto p = bvp_problem(BvpSpec(4));
    const Vector x0 = Vector::filled(3, 0.5);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = left_transformed(p, random_matrix(3, rng, 3.0));
      for (auto m : kAllMethods) {
        const auto a = solve(p, m, x0);
        const auto b = solve(g, m, x0);
        const std::size_t common = std::min(a.records.size(), b.records.size());
        for (std::size_t k = 0; k < common; ++k)
          for (std::size_t i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(a.records[k].iterate[i] - b.records[k].iterate[i]));
      }
    }
    c.expect(worst <= 1e-8, "affine covariance");
    c.note << " affine=" << worst;
  }

  // COC synthetic-order detection.
  {
    double worst = 0.0;
    for (double q : {2.0, 3.0, 5.0, 6.0}) {
      std::vector<double> d{1e-2};
      while (d.back() > 0.0 && std::pow(d.back(), q) > 1e-300) d.push_back(std::pow(d.back(), q));
      for (const auto& [k, p] : coc_from_step_norms(d).per_k) worst = std::max(worst, std::abs(p - q));
    }
    c.expect(worst <= 0.15, "COC synthetic order");
    c.note << " coc_dev=" << worst;
  }

  // n=1 reduction to the scalar scheme.
  {
    const auto p = cube_root_two();
    auto f = [](double x) { return x * x * x - 2.0; };
    auto df = [](double x) { return 3.0 * x * x; };
    double xs = 1.5, worst = 0.0;
    Vector xv{1.5};
    for (int k = 0; k < 3; ++k) {
      const double y = xs - f(xs) / df(xs);
      const double z = xs - 2.0 * f(xs) / (df(xs) + df(y));
      xs = z - f(z) / df(xs) * (df(xs) + df(y)) / (3.0 * df(y) - df(xs));
      OpCount ops;
      xv = pg6_step(p, xv, ops).x_next;
      worst = std::max(worst, std::abs(xv[0] - xs));
    }
    c.expect(worst <= 1e-12, "scalar scheme");
    c.note << " scalar=" << worst;
  }

  // LU round trip.
  {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 12; ++n) {
      const Matrix a = random_matrix(n, rng, 2.0);
      OpCount ops;
      const auto lu = lu_factor(a, ops);
      const Matrix pa = lu.permuted(a);
      const Matrix prod = lu.lower * lu.upper;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(prod(i, j) - pa(i, j)));
    }
    c.expect(worst <= 1e-10, "LU round trip");
    c.note << " lu=" << worst;
  }

  // Finite-difference Jacobian agreement.
  {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (const auto& p : {problem1(), bvp_problem(BvpSpec(7)), bvp_problem(BvpSpec(15))}) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(p.dim);
        for (auto& v : x) v = u(rng);
        worst = std::max(worst, fd_jacobian_check(p, Vector(x), 1e-6));
      }
    }
    c.expect(worst <= 1e-4, "finite-difference Jacobian");
    c.note << " fd=" << worst;
  }
}

void criterion8(Check& c) {
  const auto alpha = bvp7_reference_solution();
  const double adopted = norm(bvp_problem(BvpSpec(7)).residual(alpha), NormKind::linf);
  const double central = norm(bvp_problem(BvpSpec(7), BvpStencil::central).residual(alpha), NormKind::linf);
  const double printed =
      norm(bvp_problem(BvpSpec(7), BvpStencil::central_printed_last_row).residual(alpha), NormKind::linf);
  c.expect(adopted < 1e-12, "adopted stencil residual < 1e-12");
  c.expect(central > adopted && printed > adopted, "adopted stencil has the smallest residual");
  c.note << " adopted(reference)=" << adopted << " rejected(central)=" << central
         << " rejected(central_printed_last_row)=" << printed;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"1 problem1 reproduction", criterion1}, {"2 bvp7 reproduction", criterion2},
      {"3 order verification", criterion3},    {"4 evaluation budget", criterion4},
      {"5 LU count exactness", criterion5},    {"6 efficiency model", criterion6},
      {"7 property suites", criterion7},       {"8 bvp self-consistency", criterion8},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << " [exception: " << e.what() << "]";
    }
    if (!c.ok) ++failures;
    std::printf("%s criterion %s:%s\n", c.ok ? "PASS" : "FAIL", name, c.note.str().c_str());
  }
  return failures;
}
