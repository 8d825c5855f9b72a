#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multipoint/linalg.hpp"
#include "multipoint/solvers.hpp"

namespace multipoint {

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Computational order of convergence.
struct CocEstimate {
  std::vector<std::pair<int, double>> per_k;
  double p_max = std::numeric_limits<double>::quiet_NaN();
  int valid_count = 0;
};

/// p_k = ln(d[k+1]/d[k]) / ln(d[k]/d[k-1]) over consecutive step norms.
///
/// `first_k` is the iteration index of d[0], so per_k carries the index of
/// the middle norm of each window. Windows containing a zero norm, a unit
/// ratio, or producing a non-finite or non-positive p are skipped.
inline CocEstimate coc_from_step_norms(std::span<const double> d, int first_k = 1) {
  CocEstimate est;
  bool any_window = false;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const double prev = d[i - 1], cur = d[i], next = d[i + 1];
    if (!(prev > 0.0 && cur > 0.0 && next > 0.0)) continue;
    any_window = true;
    const double den_ratio = cur / prev;
    const double num_ratio = next / cur;
    if (den_ratio == 1.0 || num_ratio == 1.0) continue;
    const double p = std::log(num_ratio) / std::log(den_ratio);
    if (!std::isfinite(p) || p <= 0.0) continue;
    est.per_k.emplace_back(first_k + static_cast<int>(i), p);
  }
  if (!any_window) {
    throw InsufficientData("COC needs three consecutive positive step norms");
  }
  if (est.per_k.empty()) {
    throw InsufficientData("every COC window was degenerate");
  }
  est.valid_count = static_cast<int>(est.per_k.size());
  est.p_max = std::max_element(est.per_k.begin(), est.per_k.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; })
                  ->second;
  return est;
}

/// Uses the trace's recorded step norms, which are measured in the trace's
/// configured stopping norm.
inline CocEstimate coc_estimate(const SolveTrace& t) {
  if (t.records.size() < 4) {
    throw InsufficientData("COC needs at least 4 trace records, got " +
                           std::to_string(t.records.size()));
  }
  const auto d = t.step_norms();
  return coc_from_step_norms(d, 1);
}

/// ||x(k) - alpha|| for every record.
inline std::vector<double> error_norms(const SolveTrace& t, const Vector& alpha, NormKind kind) {
  std::vector<double> out;
  out.reserve(t.records.size());
  for (const auto& r : t.records) {
    require_same_dim(r.iterate, alpha, "error_norms");
    out.push_back(norm(r.iterate - alpha, kind));
  }
  return out;
}

}  // namespace multipoint
