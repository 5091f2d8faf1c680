#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's SVD, FFT, or closed-form flow.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "macflow/field.hpp"
#include "macflow/rng.hpp"
#include "macflow/smallmat.hpp"

namespace oracle {

using macflow::SmallMat;

inline SmallMat random_matrix(macflow::CounterRng& rng, int m, double lo = -1.0, double hi = 1.0) {
  SmallMat a(m);
  for (double& v : a.entries()) v = rng.uniform(lo, hi);
  return a;
}

inline double max_abs_diff(const SmallMat& a, const SmallMat& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

/// Sum over permutations with their signs.
inline double leibniz_determinant(const SmallMat& a) {
  const int m = a.size();
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) ++inversions;
    double prod = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < m; ++i) prod *= a(i, p[static_cast<std::size_t>(i)]);
    det += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

/// Eigenvalues (descending) of a symmetric matrix by cyclic two-sided Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(SmallMat s) {
  const int m = s.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += s(i, j) * s(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * s(p, q), s(q, q) - s(p, p));
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        for (int k = 0; k < m; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < m; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) ev[static_cast<std::size_t>(i)] = s(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Singular values as square roots of the eigenvalues of A^T A.
inline std::vector<double> singular_values(const SmallMat& a) {
  std::vector<double> ev = symmetric_eigenvalues(a.transposed() * a);
  for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
  return ev;
}

/// Gauss-Jordan inverse with partial pivoting.
inline SmallMat inverse(const SmallMat& a) {
  const int m = a.size();
  SmallMat w = a;
  SmallMat inv = SmallMat::identity(m);
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(w(r, c)) > std::abs(w(piv, c))) piv = r;
    for (int k = 0; k < m; ++k) {
      std::swap(w(c, k), w(piv, k));
      std::swap(inv(c, k), inv(piv, k));
    }
    const double d = w(c, c);
    for (int k = 0; k < m; ++k) {
      w(c, k) /= d;
      inv(c, k) /= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = w(r, c);
      for (int k = 0; k < m; ++k) {
        w(r, k) -= f * w(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

/// Orthogonal polar factor by the Newton iteration X <- (X + X^{-T}) / 2.
inline SmallMat newton_polar(const SmallMat& a) {
  SmallMat x = a;
  for (int it = 0; it < 100; ++it) {
    SmallMat next = 0.5 * (x + inverse(x).transposed());
    const double change = (next - x).frobenius_norm();
    x = next;
    if (change < 1e-15) break;
  }
  return x;
}

/// Principal square root of a symmetric positive definite matrix
/// (Denman-Beavers iteration).
inline SmallMat spd_sqrt(const SmallMat& a) {
  SmallMat y = a;
  SmallMat z = SmallMat::identity(a.size());
  for (int it = 0; it < 100; ++it) {
    SmallMat y_next = 0.5 * (y + inverse(z));
    SmallMat z_next = 0.5 * (z + inverse(y));
    const double change = (y_next - y).frobenius_norm();
    y = y_next;
    z = z_next;
    if (change < 1e-15 * (1.0 + y.frobenius_norm())) break;
  }
  return y;
}

/// Tr G(U) straight from the matrix definition, for moderate tau.
inline double g_trace_matrix(const SmallMat& u, double tau) {
  const int m = u.size();
  const SmallMat uut = u * u.transposed();
  const double beta = std::expm1(2.0 * tau);
  const SmallMat root = spd_sqrt(SmallMat::identity(m) + beta * uut);
  const double c = std::exp(tau) / (tau * beta);
  return uut.trace() / (2.0 * tau) - c * (root - SmallMat::identity(m)).trace();
}

/// Integer wavenumber of DFT index j on n points.
inline int wave_index(int j, int n) { return j < n / 2 ? j : j - n; }

/// e^{t eps^2 Lap} applied entrywise by a direct O(N^2) DFT on the full spectrum.
/// The Nyquist mode's wavenumber is taken as -n/2 (its sign is irrelevant to |k|^2).
inline macflow::MatrixField direct_dft_heat(const macflow::MatrixField& u, double t, double eps) {
  const macflow::Grid& g = u.grid();
  const int n = g.n();
  const int d = g.dim();
  const std::size_t nodes = g.node_count();
  const std::size_t block = u.block();
  const double two_pi = 2.0 * std::numbers::pi;
  const double kscale = two_pi / g.length();
  macflow::MatrixField out(g, u.matrix_size());
  std::vector<std::complex<double>> spec(nodes);
  auto coords = [&](std::size_t k, int& ix, int& iy) {
    ix = static_cast<int>(k % static_cast<std::size_t>(n));
    iy = d == 2 ? static_cast<int>(k / static_cast<std::size_t>(n)) : 0;
  };
  for (std::size_t e = 0; e < block; ++e) {
    for (std::size_t q = 0; q < nodes; ++q) {
      int qx = 0, qy = 0;
      coords(q, qx, qy);
      std::complex<double> acc = 0.0;
      for (std::size_t p = 0; p < nodes; ++p) {
        int px = 0, py = 0;
        coords(p, px, py);
        const double phase = -two_pi * (static_cast<double>(qx * px) + static_cast<double>(qy * py)) / n;
        acc += u.data()[p * block + e] * std::polar(1.0, phase);
      }
      const double kx = kscale * wave_index(qx, n);
      const double ky = d == 2 ? kscale * wave_index(qy, n) : 0.0;
      spec[q] = acc * std::exp(-t * eps * eps * (kx * kx + ky * ky)) / static_cast<double>(nodes);
    }
    for (std::size_t p = 0; p < nodes; ++p) {
      int px = 0, py = 0;
      coords(p, px, py);
      std::complex<double> acc = 0.0;
      for (std::size_t q = 0; q < nodes; ++q) {
        int qx = 0, qy = 0;
        coords(q, qx, qy);
        const double phase = two_pi * (static_cast<double>(qx * px) + static_cast<double>(qy * py)) / n;
        acc += spec[q] * std::polar(1.0, phase);
      }
      out.data()[p * block + e] = acc.real();
    }
  }
  return out;
}

/// h^d sum ||A - B||_F^2 by an explicit node/entry double loop.
inline double naive_l2_difference(const macflow::MatrixField& a, const macflow::MatrixField& b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.node_count(); ++k) {
    double node = 0.0;
    for (std::size_t e = 0; e < a.block(); ++e) {
      const double diff = a.node(k)[e] - b.node(k)[e];
      node += diff * diff;
    }
    total += node;
  }
  return total * a.grid().cell_volume();
}

/// Discrete L2 inner product h^d sum <A, B>_F.
inline double field_inner(const macflow::MatrixField& a, const macflow::MatrixField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s * a.grid().cell_volume();
}

inline macflow::MatrixField random_field(const macflow::Grid& g, int m, std::uint64_t seed, double lo, double hi) {
  macflow::MatrixField u(g, m);
  macflow::CounterRng rng(seed);
  for (double& v : u.data()) v = rng.uniform(lo, hi);
  return u;
}

/// Random field with ||U(x)||_F <= sqrt(m) at every node.
inline macflow::MatrixField random_admissible_field(const macflow::Grid& g, int m, std::uint64_t seed) {
  macflow::MatrixField u = random_field(g, m, seed, -1.0, 1.0);
  macflow::CounterRng rng(seed ^ 0xABCDEFULL);
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    auto v = u.node(k);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    const double target = rng.uniform() * std::sqrt(static_cast<double>(m));
    if (norm > 0.0)
      for (double& x : v) x *= target / norm;
  }
  return u;
}

}  // namespace oracle
