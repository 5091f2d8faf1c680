#pragma once

// Entrywise Fourier machinery on the periodic grid.
//
// Conventions: the forward transform carries the 1/n^d factor, so
//   u(x_j) = sum_k uhat(k) exp(i k . x_j)
// and Parseval reads h^d sum_j |u_j|^2 = L^d sum_k |uhat(k)|^2.
// Integer wavenumbers run over {-n/2, ..., n/2 - 1} per axis and are scaled
// by 2 pi / L. Real-to-complex storage keeps the last axis for indices
// 0..n/2 only; `multiplicity()` gives each stored mode's weight in a
// full-spectrum sum (1 on the self-conjugate planes, 2 elsewhere).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "macflow/field.hpp"

namespace macflow {

class SpectralPlan {
 public:
  explicit SpectralPlan(const Grid& grid);
  ~SpectralPlan();
  SpectralPlan(SpectralPlan&&) noexcept;
  SpectralPlan& operator=(SpectralPlan&&) noexcept;
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  /// Number of stored (half-spectrum) coefficients.
  std::size_t spectrum_size() const noexcept { return k_squared_.size(); }
  /// |k|^2 per stored coefficient, physical scaling.
  std::span<const double> k_squared() const noexcept { return k_squared_; }
  std::span<const double> multiplicity() const noexcept { return multiplicity_; }
  /// Integer wavenumber of axis index j in {-n/2, ..., n/2 - 1}.
  int wavenumber(int j) const noexcept;

  /// Normalized forward transform of one scalar field (n^d reals).
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Inverse of forward(); `in` is left untouched.
  void backward(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Impl;
  Grid grid_;
  std::vector<double> k_squared_;
  std::vector<double> multiplicity_;
  std::unique_ptr<Impl> impl_;
};

/// Each entry U_ij <- inverse(exp(-t eps^2 |k|^2) * forward(U_ij)).
/// t == 0 returns the input unchanged. Requires t >= 0, eps > 0.
MatrixField heat_propagate(const MatrixField& u, double t, double eps, const SpectralPlan& plan);

/// (1/(2 tau)) * integral <(1 - exp(tau eps^2 Lap)) U, U>_F, evaluated as a
/// Parseval sum. Requires tau > 0.
double linear_energy_form(const MatrixField& u, double tau, double eps, const SpectralPlan& plan);

/// integral ||grad U||_F^2 = L^d sum_k |k|^2 sum_ij |Uhat_ij(k)|^2.
double h1_seminorm_sq(const MatrixField& u, const SpectralPlan& plan);

/// L^d * sum_k weight(|k|^2) * sum_ij |Uhat_ij(k)|^2 over the full spectrum.
template <class Weight>
double spectral_quadratic_form(const MatrixField& u, const SpectralPlan& plan, Weight&& weight);

void require_plan_matches(const MatrixField& u, const SpectralPlan& plan);

// ---------------------------------------------------------------------------

template <class Weight>
double spectral_quadratic_form(const MatrixField& u, const SpectralPlan& plan, Weight&& weight) {
  require_plan_matches(u, plan);
  const std::size_t nodes = u.node_count();
  const std::size_t block = u.block();
  const auto k2 = plan.k_squared();
  const auto mult = plan.multiplicity();
  std::vector<double> w(k2.size());
  for (std::size_t q = 0; q < k2.size(); ++q) w[q] = mult[q] * weight(k2[q]);

  std::vector<double> scalar(nodes);
  std::vector<std::complex<double>> spec(plan.spectrum_size());
  double total = 0.0;
  for (std::size_t e = 0; e < block; ++e) {
    for (std::size_t k = 0; k < nodes; ++k) scalar[k] = u.data()[k * block + e];
    plan.forward(scalar, spec);
    double acc = 0.0;
    for (std::size_t q = 0; q < spec.size(); ++q) acc += w[q] * std::norm(spec[q]);
    total += acc;
  }
  return u.grid().volume() * total;
}

}  // namespace macflow
