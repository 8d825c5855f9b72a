#pragma once

// Computational cost C = P0(n) mu0 + P1(n) mu1 + P(n) per iteration and the
// efficiency index E = p^(1/C) for the three multipoint methods.
//
// The closed forms below are the published ones. They are not re-derived
// from the instrumented OpCount of the solvers: pg6's published product
// count assumes six triangular solves and 6n^2 matrix-vector work, while
// the implementation performs eight triangular solves, one n^2 matrix
// combination and one n^2 matrix-vector product. See
// instrumented_pg6_products() for the measured closed form.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "multipoint/format.hpp"
#include "multipoint/solvers.hpp"

namespace multipoint {

class UnsupportedMethod : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CostModel {
  int n = 2;
  double mu0 = 1.0;  // cost of one scalar F component, in products
  double mu1 = 1.0;  // cost of one Jacobian entry, in products
  double l = 1.0;    // cost of one quotient, in products

  void validate() const {
    if (n < 2) throw std::invalid_argument("CostModel: n must be at least 2");
    if (!(mu0 > 0.0) || !(mu1 > 0.0)) throw std::invalid_argument("CostModel: mu0, mu1 must be positive");
    if (!(l >= 1.0)) throw std::invalid_argument("CostModel: l must be at least 1");
  }
};

inline double cost(MethodId m, const CostModel& cm) {
  cm.validate();
  const double n = cm.n;
  const double evals = 2.0 * n * cm.mu0 + 2.0 * n * n * cm.mu1;
  const double quot = 3.0 * cm.l * (n + 1.0);
  switch (m) {
    case MethodId::pg6: return evals + n / 2.0 * (2.0 * n * n + 15.0 * n - 3.0 + quot);
    case MethodId::cordero5: return evals + n / 2.0 * (2.0 * n * n + 9.0 * n - 3.0 + quot);
    case MethodId::cordero6: return evals + n / 3.0 * (2.0 * n * n + 18.0 * n + 4.0 + quot);
    case MethodId::newton: break;
  }
  throw UnsupportedMethod("no cost model for method '" + std::string(to_string(m)) + "'");
}

struct EfficiencyReport {
  MethodId method = MethodId::pg6;
  int order_p = 6;
  double cost_C = 0.0;
  double index_E = 1.0;
};

inline EfficiencyReport index(MethodId m, const CostModel& cm) {
  const double c = cost(m, cm);
  const int p = theoretical_order(m);
  return EfficiencyReport{m, p, c, std::pow(static_cast<double>(p), 1.0 / c)};
}

/// log E_i / log E_j. Greater than 1 when `mi` is the more efficient method.
inline double ratio(MethodId mi, MethodId mj, const CostModel& cm) {
  const double ci = cost(mi, cm);
  const double cj = cost(mj, cm);
  return (cj * std::log(theoretical_order(mi))) / (ci * std::log(theoretical_order(mj)));
}

/// The mu0 at which pg6 and cordero5 are equally efficient, written in
/// terms of s = log 6 and t = log 5 in an arbitrary but common base.
inline double boundary_g(int n, double mu1, double l, double s, double t) {
  const double nn = n;
  const double num = 4.0 * nn * (t - s) * mu1 + 2.0 * nn * nn * (t - s) + 3.0 * nn * (5.0 * t - 3.0 * s) +
                     3.0 * (s - t) + 3.0 * nn * (t - s) * l + 3.0 * (t - s) * l;
  return num / (4.0 * (s - t));
}

inline double boundary_g(int n, double mu1, double l) {
  return boundary_g(n, mu1, l, std::log(6.0), std::log(5.0));
}

/// 2n^2 + 9n + 3l(n+1) - 17. Positive exactly when pg6 costs more than
/// cordero6.
inline double boundary_f(int n, double l) {
  const double nn = n;
  return 2.0 * nn * nn + 9.0 * nn + 3.0 * l * (nn + 1.0) - 17.0;
}

/// Measured products per pg6 iteration: three factorizations, four
/// forward/backward solve pairs, one n^2 combination (3F'(y) - F'(x)), one
/// n^2 matrix-vector product and one n-length scaling.
inline std::uint64_t instrumented_pg6_products(std::uint64_t n) {
  return n * (n - 1) * (2 * n - 1) / 2 + 4 * n * (n - 1) + 2 * n * n + n;
}

inline std::uint64_t instrumented_pg6_quotients(std::uint64_t n) {
  return 3 * n * (n - 1) / 2 + 4 * n;
}

/// Products and quotients in the published pg6 operation count.
inline std::uint64_t published_pg6_products(std::uint64_t n) {
  return n * (n - 1) * (2 * n - 1) / 2 + 3 * n * (n - 1) + 6 * n * n + n;
}

inline std::uint64_t published_pg6_quotients(std::uint64_t n) {
  return 3 * n * (n - 1) / 2 + 3 * n;
}

struct SweepRow {
  MethodId method = MethodId::pg6;
  int n = 2;
  double mu0 = 1.0;
  double mu1 = 1.0;
  double l = 1.0;
  double C = 0.0;
  double E = 1.0;
  double R_vs_cordero5 = 1.0;  // ratio(method, cordero5)
  double R_vs_cordero6 = 1.0;  // ratio(method, cordero6)
};

inline std::vector<SweepRow> efficiency_sweep(const std::vector<MethodId>& methods, int n_lo, int n_hi,
                                              double mu0, double mu1, double l) {
  if (methods.empty()) throw std::invalid_argument("efficiency_sweep: no methods selected");
  if (n_hi < n_lo) throw std::invalid_argument("efficiency_sweep: empty n range");
  std::vector<SweepRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    const CostModel cm{n, mu0, mu1, l};
    for (MethodId m : methods) {
      const auto rep = index(m, cm);
      rows.push_back(SweepRow{m, n, mu0, mu1, l, rep.cost_C, rep.index_E,
                              ratio(m, MethodId::cordero5, cm), ratio(m, MethodId::cordero6, cm)});
    }
  }
  return rows;
}

/// Smallest n in [n_lo, n_hi] with ratio(pg6, cordero5) > 1.
inline std::optional<int> pg6_crossover(int n_lo, int n_hi, double mu0, double mu1, double l) {
  for (int n = n_lo; n <= n_hi; ++n) {
    if (ratio(MethodId::pg6, MethodId::cordero5, CostModel{n, mu0, mu1, l}) > 1.0) return n;
  }
  return std::nullopt;
}

inline constexpr const char* kSweepCsvHeader = "method,n,mu0,mu1,l,C,E,R_vs_cordero5,R_vs_cordero6";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.method) << ',' << r.n << ',' << format_roundtrip(r.mu0) << ','
       << format_roundtrip(r.mu1) << ',' << format_roundtrip(r.l) << ',' << format_roundtrip(r.C)
       << ',' << format_roundtrip(r.E) << ',' << format_roundtrip(r.R_vs_cordero5) << ','
       << format_roundtrip(r.R_vs_cordero6) << '\n';
  }
}

}  // namespace multipoint
