#pragma once

// Field-level energies.
//
// The modified energy of the Strang scheme with step tau,
//   E~(U) = int (1/(2tau)) <(1 - e^{tau eps^2 Lap}) U, U>_F + Tr G(e^{tau eps^2 Lap / 2} U) dx,
// is nonincreasing along the scheme for every tau > 0. It splits as
// E~ = E1 - E2 with E1 quadratic and E2 convex; the Strang step is exactly
// the linearized minimization of that split.

#include "macflow/field.hpp"
#include "macflow/spectral.hpp"

namespace macflow {

struct EnergyBreakdown {
  double linear_part = 0.0;
  double g_part = 0.0;
  double total = 0.0;
};

EnergyBreakdown modified_energy(const MatrixField& u, double tau, double eps, const SpectralPlan& plan);

/// (1/2) int ||grad U||^2 + (1/(4 eps^2)) int ||I - U U^T||^2.
double gl_energy_rescaled(const MatrixField& u, double eps, const SpectralPlan& plan);

/// (eps^2/2) int ||grad U||^2 + (1/4) int ||I - U U^T||^2, whose L2 gradient
/// flow is dU/dt = eps^2 Lap U + U - U U^T U.
double gl_energy_physical(const MatrixField& u, double eps, const SpectralPlan& plan);

/// int (1/(2tau)) <U U^T + 2 e^tau/(e^{2tau}-1) I, I>_F dx.
double e1_energy(const MatrixField& u, double tau);

/// int e^tau/(tau(e^{2tau}-1)) Tr[(I + (e^{2tau}-1) W W^T)^{1/2}] dx,
/// W = e^{tau eps^2 Lap / 2} U.
double e2_energy(const MatrixField& u, double tau, double eps, const SpectralPlan& plan);

/// Gradient of e2_energy with respect to the discrete L2 inner product
/// (h^d sum_nodes <., .>_F).
MatrixField e2_frechet_derivative(const MatrixField& u, double tau, double eps, const SpectralPlan& plan);

}  // namespace macflow
