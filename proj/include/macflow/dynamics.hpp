#pragma once

// Pointwise nonlinear machinery for dU/dt = U - U U^T U.
//
// All closed forms act on singular values. Expressions that would contain
// e^{2t} are rewritten so every intermediate stays bounded by max(1, sigma):
//   sigma -> sigma / sqrt(e^{-2t} + (1 - e^{-2t}) sigma^2).

#include <cstddef>

#include "macflow/field.hpp"
#include "macflow/smallmat.hpp"

namespace macflow {

/// Step-dependent constants of the G functional.
///   c1 = 1/(2 tau)
///   c2 = e^tau / (tau (e^{2 tau} - 1)) = 1 / (2 tau sinh tau)
///   beta = e^{2 tau} - 1 (inf once it overflows; never used directly then)
/// plus the decaying exponentials used by the overflow-safe forms.
struct GCoefficients {
  double tau;
  double c1;
  double c2;
  double beta;
  double exp_neg;            // e^{-tau}
  double exp_neg2;           // e^{-2 tau}
  double one_minus_exp_neg2; // 1 - e^{-2 tau}

  static GCoefficients make(double tau);
};

/// Image of one singular value under the exact flow for time t >= 0.
double flow_singular_value(double sigma, double t) noexcept;

/// Exact solution ((e^{2t}-1) U0 U0^T + I)^{-1/2} e^t U0. t == 0 returns U0.
SmallMat nonlinear_flow(const SmallMat& u0, double t);

/// nonlinear_flow(u0, t_tilde / eps^2).
SmallMat nonlinear_flow_rescaled(const SmallMat& u0, double t_tilde, double eps);

/// Polar factor P Q^T; the eps -> 0 limit of the rescaled flow.
PolarResult project_orthogonal(const SmallMat& u);

/// g(lambda) = lambda^2/2 - e^tau/(e^{2tau}-1) [sqrt(1 + (e^{2tau}-1) lambda^2) - 1].
double g_scalar(double lambda, double tau);
double g_scalar(double lambda, const GCoefficients& c) noexcept;

/// Tr G(U) = (1/tau) sum_i g(sigma_i(U)).
double g_trace(const SmallMat& u, double tau);
double g_trace(const SmallMat& u, const GCoefficients& c);

/// Classical RK4 for dU/dt = U - U U^T U with fixed step h; the last step is
/// shortened to land on t.
SmallMat ode_oracle_rk4(const SmallMat& u0, double t, double h);

MatrixField nonlinear_flow_field(const MatrixField& u, double t);

struct ProjectionResult {
  MatrixField field;
  std::size_t near_singular_nodes = 0;
};

ProjectionResult project_orthogonal_field(const MatrixField& u);

}  // namespace macflow
