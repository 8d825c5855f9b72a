#pragma once

// Dense real vectors and matrices with an explicit product/quotient counter.
//
// Every arithmetic kernel that the cost model cares about (LU factorization,
// triangular solves, matrix-vector products, scalings) takes an OpCount by
// reference and adds exactly the number of products and quotients the
// textbook operation needs. Additions, subtractions, pivot comparisons and
// row swaps are never counted.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multipoint {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteValue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by lu_factor when no usable pivot exists. `which()` names the
/// matrix that failed when the caller has tagged it (e.g. "F'(x)").
class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(const std::string& what, std::string which = {})
      : std::runtime_error(what), which_(std::move(which)) {}
  const std::string& which() const noexcept { return which_; }

 private:
  std::string which_;
};

/// Per-session operation tallies. Counters only ever grow.
class OpCount {
 public:
  std::uint64_t products() const noexcept { return products_; }
  std::uint64_t quotients() const noexcept { return quotients_; }
  std::uint64_t residual_evals() const noexcept { return residual_evals_; }
  std::uint64_t jacobian_evals() const noexcept { return jacobian_evals_; }
  std::uint64_t lu_factorizations() const noexcept { return lu_factorizations_; }

  void add_products(std::uint64_t k) noexcept { products_ += k; }
  void add_quotients(std::uint64_t k) noexcept { quotients_ += k; }
  void add_residual_eval() noexcept { ++residual_evals_; }
  void add_jacobian_eval() noexcept { ++jacobian_evals_; }
  void add_lu_factorization() noexcept { ++lu_factorizations_; }

  OpCount& operator+=(const OpCount& o) noexcept {
    products_ += o.products_;
    quotients_ += o.quotients_;
    residual_evals_ += o.residual_evals_;
    jacobian_evals_ += o.jacobian_evals_;
    lu_factorizations_ += o.lu_factorizations_;
    return *this;
  }

  /// Componentwise difference `*this - earlier`; `earlier` must be a prior
  /// snapshot of the same session.
  OpCount since(const OpCount& earlier) const noexcept {
    OpCount d;
    d.products_ = products_ - earlier.products_;
    d.quotients_ = quotients_ - earlier.quotients_;
    d.residual_evals_ = residual_evals_ - earlier.residual_evals_;
    d.jacobian_evals_ = jacobian_evals_ - earlier.jacobian_evals_;
    d.lu_factorizations_ = lu_factorizations_ - earlier.lu_factorizations_;
    return d;
  }

  friend bool operator==(const OpCount&, const OpCount&) = default;

 private:
  std::uint64_t products_ = 0;
  std::uint64_t quotients_ = 0;
  std::uint64_t residual_evals_ = 0;
  std::uint64_t jacobian_evals_ = 0;
  std::uint64_t lu_factorizations_ = 0;
};

namespace detail {

inline void require_finite(std::span<const double> xs, std::string_view what) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw NonFiniteValue(std::string(what) + " has a non-finite entry");
    }
  }
}

}  // namespace detail

/// Immutable dense real vector of positive dimension with finite entries.
class Vector {
 public:
  explicit Vector(std::vector<double> components) : data_(std::move(components)) {
    if (data_.empty()) throw DimensionMismatch("Vector: dimension must be positive");
    detail::require_finite(data_, "Vector");
  }
  Vector(std::initializer_list<double> components)
      : Vector(std::vector<double>(components)) {}

  static Vector filled(std::size_t n, double value) {
    return Vector(std::vector<double>(n, value));
  }
  static Vector zeros(std::size_t n) { return filled(n, 0.0); }

  std::size_t dim() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<const double> components() const noexcept { return data_; }
  const std::vector<double>& to_std() const noexcept { return data_; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

inline void require_same_dim(const Vector& a, const Vector& b, std::string_view op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) +
                            " and " + std::to_string(b.dim()) + " differ");
  }
}

// Additive operations are free in the cost model.
inline Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "operator+");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return Vector(std::move(r));
}

inline Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "operator-");
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return Vector(std::move(r));
}

/// c * v. Adds n products unless c is +1 or -1.
inline Vector scaled(double c, const Vector& v, OpCount& counter) {
  std::vector<double> r(v.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * v[i];
  if (c != 1.0 && c != -1.0) counter.add_products(v.dim());
  return Vector(std::move(r));
}

/// Immutable dense square matrix, row-major, finite entries.
class Matrix {
 public:
  Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (n_ == 0) throw DimensionMismatch("Matrix: dimension must be positive");
    if (data_.size() != n_ * n_) {
      throw DimensionMismatch("Matrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                              std::to_string(data_.size()));
    }
    detail::require_finite(data_, "Matrix");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    if (n_ == 0) throw DimensionMismatch("Matrix: dimension must be positive");
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw DimensionMismatch("Matrix: rows must form a square");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    detail::require_finite(data_, "Matrix");
  }

  static Matrix identity(std::size_t n) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return Matrix(n, std::move(d));
  }
  static Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n * n, 0.0)); }

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row_major() const noexcept { return data_; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Uncounted product, for tests and diagnostics.
inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator*: matrix dimensions differ");
  const std::size_t n = a.dim();
  std::vector<double> r(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] += a(i, k) * b(k, j);
  return Matrix(n, std::move(r));
}

/// P·A = L·U with L unit lower triangular.
struct LuFactors {
  Matrix lower;
  Matrix upper;
  std::vector<std::size_t> perm;  // row i of P·A is row perm[i] of A

  std::size_t dim() const noexcept { return upper.dim(); }

  Matrix permuted(const Matrix& a) const {
    const std::size_t n = a.dim();
    std::vector<double> r(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] = a(perm[i], j);
    return Matrix(n, std::move(r));
  }
};

inline constexpr double kSingularPivotTolerance = 1e-14;

/// Doolittle elimination with partial pivoting.
///
/// Adds n(n-1)(2n-1)/6 products and n(n-1)/2 quotients regardless of the
/// matrix values. Throws SingularMatrix when the largest available pivot
/// falls below 1e-14 times the largest row scale of `a`.
inline LuFactors lu_factor(const Matrix& a, OpCount& counter) {
  const std::size_t n = a.dim();
  std::vector<double> w(a.row_major().begin(), a.row_major().end());
  std::vector<double> lower(n * n, 0.0);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  const double scale = a.max_abs();
  const double threshold = kSingularPivotTolerance * scale;
  counter.add_lu_factorization();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double best = std::abs(w[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(w[i * n + k]);
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (scale == 0.0 || best < threshold || best == 0.0) {
      throw SingularMatrix("lu_factor: pivot " + std::to_string(best) + " in column " +
                           std::to_string(k) + " below threshold");
    }
    if (pivot_row != k) {
      std::swap_ranges(w.begin() + k * n, w.begin() + (k + 1) * n, w.begin() + pivot_row * n);
      std::swap_ranges(lower.begin() + k * n, lower.begin() + k * n + k,
                       lower.begin() + pivot_row * n);
      std::swap(perm[k], perm[pivot_row]);
    }
    const double pivot = w[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = w[i * n + k] / pivot;
      lower[i * n + k] = m;
      w[i * n + k] = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) w[i * n + j] -= m * w[k * n + j];
    }
    const std::uint64_t rest = n - k - 1;
    counter.add_quotients(rest);
    counter.add_products(rest * rest);
  }
  for (std::size_t i = 0; i < n; ++i) lower[i * n + i] = 1.0;

  return LuFactors{Matrix(n, std::move(lower)), Matrix(n, std::move(w)), std::move(perm)};
}

/// Forward then backward substitution. Adds n(n-1) products and n quotients.
inline Vector lu_solve(const LuFactors& f, const Vector& b, OpCount& counter) {
  const std::size_t n = f.dim();
  if (b.dim() != n) {
    throw DimensionMismatch("lu_solve: factors are " + std::to_string(n) + "x" +
                            std::to_string(n) + ", rhs has dimension " + std::to_string(b.dim()));
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lower(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.upper(ii, j) * x[j];
    x[ii] = s / f.upper(ii, ii);
  }
  const std::uint64_t nn = n;
  counter.add_products(nn * (nn - 1));
  counter.add_quotients(nn);
  return Vector(std::move(x));
}

enum class NormKind { l1, l2, linf };

inline std::string_view to_string(NormKind k) noexcept {
  switch (k) {
    case NormKind::l1: return "l1";
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
  }
  return "?";
}

inline NormKind parse_norm_kind(std::string_view s) {
  if (s == "l1") return NormKind::l1;
  if (s == "l2") return NormKind::l2;
  if (s == "linf") return NormKind::linf;
  throw std::invalid_argument("unknown norm kind '" + std::string(s) + "'");
}

inline double norm(const Vector& v, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::l1:
      for (double x : v.components()) acc += std::abs(x);
      return acc;
    case NormKind::l2:
      for (double x : v.components()) acc += x * x;
      return std::sqrt(acc);
    case NormKind::linf:
      for (double x : v.components()) acc = std::max(acc, std::abs(x));
      return acc;
  }
  return acc;
}

/// ca·a + cb·b. Each coefficient other than ±1 costs n² products.
inline Matrix mat_combine(const Matrix& a, const Matrix& b, double ca, double cb,
                          OpCount& counter) {
  if (a.dim() != b.dim()) throw DimensionMismatch("mat_combine: matrix dimensions differ");
  const std::size_t n = a.dim();
  std::vector<double> r(n * n);
  const auto ar = a.row_major();
  const auto br = b.row_major();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ca * ar[i] + cb * br[i];
  const std::uint64_t nn = std::uint64_t{n} * n;
  if (ca != 1.0 && ca != -1.0) counter.add_products(nn);
  if (cb != 1.0 && cb != -1.0) counter.add_products(nn);
  return Matrix(n, std::move(r));
}

/// a·v. Adds n² products.
inline Vector mat_vec(const Matrix& a, const Vector& v, OpCount& counter) {
  const std::size_t n = a.dim();
  if (v.dim() != n) throw DimensionMismatch("mat_vec: dimensions differ");
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  counter.add_products(std::uint64_t{n} * n);
  return Vector(std::move(r));
}

}  // namespace multipoint
