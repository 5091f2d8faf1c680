#include "macflow/smallmat.hpp"

#include <algorithm>
#include <numeric>

namespace macflow {

namespace {

void require_same_size(const SmallMat& a, const SmallMat& b, const char* op) {
  if (a.size() != b.size()) {
    throw UsageError(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
}

SmallMat rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  SmallMat r(2);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

// Flip column pairs so each left column has a nonnegative dominant entry.
void normalize_signs(SvdResult& s) {
  const int m = s.left.size();
  for (int j = 0; j < m; ++j) {
    int dominant = 0;
    for (int i = 1; i < m; ++i) {
      if (std::abs(s.left(i, j)) > std::abs(s.left(dominant, j))) dominant = i;
    }
    if (s.left(dominant, j) < 0.0) {
      for (int i = 0; i < m; ++i) {
        s.left(i, j) = -s.left(i, j);
        s.right(i, j) = -s.right(i, j);
      }
    }
  }
}

SvdResult svd_1x1(const SmallMat& a) {
  SvdResult s{SmallMat::identity(1), {std::abs(a(0, 0))}, SmallMat::identity(1)};
  if (a(0, 0) < 0.0) s.right(0, 0) = -1.0;
  return s;
}

// A = R(phi) diag(Q + R, Q - R) R(theta), with the rotation/reflection
// decomposition A = E*I + F*K + G*L + H*J.
SvdResult svd_2x2(const SmallMat& a) {
  const double e = 0.5 * (a(0, 0) + a(1, 1));
  const double f = 0.5 * (a(0, 0) - a(1, 1));
  const double g = 0.5 * (a(1, 0) + a(0, 1));
  const double h = 0.5 * (a(1, 0) - a(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  const double theta = 0.5 * (a2 - a1);
  const double phi = 0.5 * (a2 + a1);

  SvdResult s{rotation(phi), {q + r, q - r}, rotation(-theta)};
  if (s.singular_values[1] < 0.0) {
    s.singular_values[1] = -s.singular_values[1];
    s.right(0, 1) = -s.right(0, 1);
    s.right(1, 1) = -s.right(1, 1);
  }
  return s;
}

double column_dot(const SmallMat& a, int p, const SmallMat& b, int q) {
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += a(i, p) * b(i, q);
  return acc;
}

// Two passes of modified Gram-Schmidt of column j against the accepted columns.
void orthogonalize_column(SmallMat& u, int j, const std::vector<int>& accepted) {
  const int m = u.size();
  for (int pass = 0; pass < 2; ++pass) {
    for (int k : accepted) {
      const double proj = column_dot(u, k, u, j);
      for (int i = 0; i < m; ++i) u(i, j) -= proj * u(i, k);
    }
  }
}

SvdResult svd_jacobi(const SmallMat& a) {
  const int m = a.size();
  SmallMat w = a;
  SmallMat v = SmallMat::identity(m);

  bool converged = false;
  double worst = 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    converged = true;
    worst = 0.0;
    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double alpha = column_dot(w, p, w, p);
        const double beta = column_dot(w, q, w, q);
        const double gamma = column_dot(w, q, w, p);
        const double scale = std::sqrt(alpha * beta);
        if (gamma == 0.0 || std::abs(gamma) <= kJacobiTolerance * scale) continue;
        worst = std::max(worst, std::abs(gamma) / scale);
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) {
    throw NumericalError("one-sided Jacobi SVD did not converge in " +
                             std::to_string(kMaxJacobiSweeps) + " sweeps",
                         worst);
  }

  std::vector<double> norms(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) norms[static_cast<std::size_t>(j)] = std::sqrt(column_dot(w, j, w, j));
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)]; });

  SvdResult s{SmallMat(m), std::vector<double>(static_cast<std::size_t>(m)), SmallMat(m)};
  std::vector<int> accepted;
  std::vector<int> missing;
  for (int out = 0; out < m; ++out) {
    const int src = order[static_cast<std::size_t>(out)];
    const double sigma = norms[static_cast<std::size_t>(src)];
    s.singular_values[static_cast<std::size_t>(out)] = sigma;
    for (int i = 0; i < m; ++i) s.right(i, out) = v(i, src);
    if (sigma == 0.0) {
      missing.push_back(out);
      continue;
    }
    for (int i = 0; i < m; ++i) s.left(i, out) = w(i, src) / sigma;
    orthogonalize_column(s.left, out, accepted);
    const double len = std::sqrt(column_dot(s.left, out, s.left, out));
    if (len < 0.5) {
      missing.push_back(out);
      continue;
    }
    for (int i = 0; i < m; ++i) s.left(i, out) /= len;
    accepted.push_back(out);
  }

  // Complete the left basis for (numerically) null directions.
  for (int out : missing) {
    int best = -1;
    double best_len = -1.0;
    SmallMat trial = s.left;
    for (int e = 0; e < m; ++e) {
      for (int i = 0; i < m; ++i) trial(i, out) = (i == e) ? 1.0 : 0.0;
      orthogonalize_column(trial, out, accepted);
      const double len = std::sqrt(column_dot(trial, out, trial, out));
      if (len > best_len) {
        best_len = len;
        best = e;
      }
    }
    for (int i = 0; i < m; ++i) s.left(i, out) = (i == best) ? 1.0 : 0.0;
    orthogonalize_column(s.left, out, accepted);
    const double len = std::sqrt(column_dot(s.left, out, s.left, out));
    for (int i = 0; i < m; ++i) s.left(i, out) /= len;
    accepted.push_back(out);
  }
  return s;
}

}  // namespace

SmallMat::SmallMat(int m) : m_(m), a_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0) {
  if (m < 1) throw UsageError("SmallMat: dimension must be >= 1, got " + std::to_string(m));
}

SmallMat::SmallMat(int m, std::span<const double> entries) : SmallMat(m) {
  if (entries.size() != a_.size()) {
    throw UsageError("SmallMat: expected " + std::to_string(a_.size()) + " entries, got " +
                     std::to_string(entries.size()));
  }
  for (double x : entries) {
    if (!std::isfinite(x)) throw UsageError("SmallMat: non-finite entry");
  }
  std::copy(entries.begin(), entries.end(), a_.begin());
}

SmallMat SmallMat::unchecked(int m, std::span<const double> entries) {
  SmallMat r(m);
  std::copy(entries.begin(), entries.end(), r.a_.begin());
  return r;
}

SmallMat SmallMat::identity(int m) {
  SmallMat r(m);
  for (int i = 0; i < m; ++i) r(i, i) = 1.0;
  return r;
}

SmallMat SmallMat::diagonal(std::span<const double> values) {
  SmallMat r(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    r(static_cast<int>(i), static_cast<int>(i)) = values[i];
  }
  return r;
}

SmallMat SmallMat::transposed() const {
  SmallMat r(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

SmallMat SmallMat::diagonal_part() const {
  SmallMat r(m_);
  for (int i = 0; i < m_; ++i) r(i, i) = (*this)(i, i);
  return r;
}

double SmallMat::frobenius_norm() const {
  double acc = 0.0;
  for (double x : a_) acc += x * x;
  return std::sqrt(acc);
}

double SmallMat::trace() const {
  double acc = 0.0;
  for (int i = 0; i < m_; ++i) acc += (*this)(i, i);
  return acc;
}

SmallMat& SmallMat::operator+=(const SmallMat& rhs) {
  require_same_size(*this, rhs, "operator+");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

SmallMat& SmallMat::operator-=(const SmallMat& rhs) {
  require_same_size(*this, rhs, "operator-");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

SmallMat& SmallMat::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

SmallMat operator*(const SmallMat& lhs, const SmallMat& rhs) {
  require_same_size(lhs, rhs, "operator*");
  const int m = lhs.size();
  SmallMat r(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double a = lhs(i, k);
      for (int j = 0; j < m; ++j) r(i, j) += a * rhs(k, j);
    }
  return r;
}

double frobenius_inner(const SmallMat& a, const SmallMat& b) {
  require_same_size(a, b, "frobenius_inner");
  const auto x = a.entries();
  const auto y = b.entries();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * y[k];
  return acc;
}

double determinant(const SmallMat& a) {
  const int m = a.size();
  switch (m) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      break;
  }
  SmallMat lu = a;
  double det = 1.0;
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int i = col + 1; i < m; ++i) {
      if (std::abs(lu(i, col)) > std::abs(lu(pivot, col))) pivot = i;
    }
    if (lu(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < m; ++j) std::swap(lu(pivot, j), lu(col, j));
      det = -det;
    }
    det *= lu(col, col);
    for (int i = col + 1; i < m; ++i) {
      const double factor = lu(i, col) / lu(col, col);
      for (int j = col; j < m; ++j) lu(i, j) -= factor * lu(col, j);
    }
  }
  return det;
}

SvdResult svd(const SmallMat& a) {
  for (double x : a.entries()) {
    if (!std::isfinite(x)) throw NumericalError("svd: non-finite entry");
  }
  SvdResult s;
  switch (a.size()) {
    case 1:
      s = svd_1x1(a);
      break;
    case 2:
      s = svd_2x2(a);
      break;
    default:
      s = svd_jacobi(a);
      break;
  }
  normalize_signs(s);
  return s;
}

SmallMat compose_svd(const SvdResult& s, std::span<const double> values) {
  const int m = s.left.size();
  SmallMat r(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const double lk = s.left(i, k) * values[static_cast<std::size_t>(k)];
      if (lk == 0.0) continue;
      for (int j = 0; j < m; ++j) r(i, j) += lk * s.right(j, k);
    }
  return r;
}

double nuclear_norm(const SmallMat& a) {
  const SvdResult s = svd(a);
  return std::accumulate(s.singular_values.begin(), s.singular_values.end(), 0.0);
}

PolarResult polar_orthogonal(const SmallMat& a) {
  const SvdResult s = svd(a);
  const std::vector<double> ones(s.singular_values.size(), 1.0);
  const double smax = s.singular_values.front();
  const double smin = s.singular_values.back();
  return {compose_svd(s, ones), smax == 0.0 || smin < kNearSingularRatio * smax};
}

}  // namespace macflow
