#pragma once

// Dense m x m real matrices for the pointwise unknown of a matrix field.
//
// m is a runtime value (typically 2..5). Storage is row-major. All free
// functions are pure and safe to call concurrently.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "macflow/errors.hpp"

namespace macflow {

class SmallMat {
 public:
  SmallMat() = default;

  /// Zero matrix of dimension m.
  explicit SmallMat(int m);

  /// Copies m*m row-major entries; throws UsageError on size mismatch or
  /// non-finite input.
  SmallMat(int m, std::span<const double> entries);

  SmallMat(int m, std::initializer_list<double> entries)
      : SmallMat(m, std::span<const double>(entries.begin(), entries.size())) {}

  /// Copies entries without the finiteness check (internal data paths).
  static SmallMat unchecked(int m, std::span<const double> entries);

  static SmallMat identity(int m);
  static SmallMat diagonal(std::span<const double> values);
  static SmallMat diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  int size() const noexcept { return m_; }

  double& operator()(int i, int j) noexcept { return a_[static_cast<std::size_t>(i * m_ + j)]; }
  double operator()(int i, int j) const noexcept {
    return a_[static_cast<std::size_t>(i * m_ + j)];
  }

  std::span<double> entries() noexcept { return a_; }
  std::span<const double> entries() const noexcept { return a_; }

  SmallMat transposed() const;
  /// Matrix with the diagonal of *this and zeros elsewhere.
  SmallMat diagonal_part() const;
  double frobenius_norm() const;
  double trace() const;

  SmallMat& operator+=(const SmallMat& rhs);
  SmallMat& operator-=(const SmallMat& rhs);
  SmallMat& operator*=(double s);

  friend SmallMat operator+(SmallMat lhs, const SmallMat& rhs) { return lhs += rhs; }
  friend SmallMat operator-(SmallMat lhs, const SmallMat& rhs) { return lhs -= rhs; }
  friend SmallMat operator*(SmallMat lhs, double s) { return lhs *= s; }
  friend SmallMat operator*(double s, SmallMat rhs) { return rhs *= s; }
  friend SmallMat operator*(const SmallMat& lhs, const SmallMat& rhs);

  friend bool operator==(const SmallMat&, const SmallMat&) = default;

 private:
  int m_ = 0;
  std::vector<double> a_;
};

/// A = left * diag(singular_values) * right^T.
///
/// Singular values are sorted descending. Each column of `left` has its
/// largest-magnitude entry nonnegative (first such index on ties); the sign
/// is carried by the matching column of `right`.
struct SvdResult {
  SmallMat left;
  std::vector<double> singular_values;
  SmallMat right;
};

/// Orthogonal polar factor plus a flag raised when
/// sigma_min < 1e-8 * sigma_max (or the input is zero).
struct PolarResult {
  SmallMat orthogonal;
  bool near_singular = false;
};

inline constexpr double kNearSingularRatio = 1e-8;
inline constexpr int kMaxJacobiSweeps = 30;
inline constexpr double kJacobiTolerance = 1e-14;

/// Tr(A B^T).
double frobenius_inner(const SmallMat& a, const SmallMat& b);

/// Cofactor expansion for m <= 3, LU with partial pivoting above.
double determinant(const SmallMat& a);

/// Closed form for m <= 2, one-sided Jacobi otherwise.
/// Throws NumericalError if Jacobi does not converge within
/// kMaxJacobiSweeps sweeps or the input holds non-finite entries.
SvdResult svd(const SmallMat& a);

/// left * diag(values) * right^T.
SmallMat compose_svd(const SvdResult& s, std::span<const double> values);

double nuclear_norm(const SmallMat& a);

PolarResult polar_orthogonal(const SmallMat& a);

/// P diag(f(sigma_i)) Q^T. Throws NumericalError if f yields a
/// non-finite value.
template <class F>
SmallMat apply_singular_function(const SmallMat& a, F&& f) {
  SvdResult s = svd(a);
  std::vector<double> mapped(s.singular_values.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    mapped[i] = f(s.singular_values[i]);
    if (!std::isfinite(mapped[i])) {
      throw NumericalError("singular-value function returned a non-finite value at sigma = " +
                           std::to_string(s.singular_values[i]));
    }
  }
  return compose_svd(s, mapped);
}

}  // namespace macflow
