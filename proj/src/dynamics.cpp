#include "macflow/dynamics.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace macflow {

namespace {

void require_tau(double tau, const char* op) {
  if (!(tau > 0.0)) throw UsageError(std::string(op) + ": tau must be positive");
}

SmallMat ode_rhs(const SmallMat& u) { return u - u * u.transposed() * u; }

}  // namespace

GCoefficients GCoefficients::make(double tau) {
  require_tau(tau, "GCoefficients");
  GCoefficients c{};
  c.tau = tau;
  c.c1 = 1.0 / (2.0 * tau);
  c.c2 = 1.0 / (2.0 * tau * std::sinh(tau));
  c.beta = std::expm1(2.0 * tau);
  c.exp_neg = std::exp(-tau);
  c.exp_neg2 = std::exp(-2.0 * tau);
  c.one_minus_exp_neg2 = -std::expm1(-2.0 * tau);
  return c;
}

double flow_singular_value(double sigma, double t) noexcept {
  if (sigma == 0.0) return 0.0;
  const double decay = std::exp(-2.0 * t);
  const double growth = -std::expm1(-2.0 * t);
  if (sigma <= 1.0) return sigma / std::sqrt(decay + growth * sigma * sigma);
  return 1.0 / std::sqrt(decay / (sigma * sigma) + growth);
}

SmallMat nonlinear_flow(const SmallMat& u0, double t) {
  if (!(t >= 0.0)) throw UsageError("nonlinear_flow: negative time");
  if (t == 0.0) return u0;
  return apply_singular_function(u0, [t](double s) { return flow_singular_value(s, t); });
}

SmallMat nonlinear_flow_rescaled(const SmallMat& u0, double t_tilde, double eps) {
  if (!(eps > 0.0)) throw UsageError("nonlinear_flow_rescaled: eps must be positive");
  if (!(t_tilde >= 0.0)) throw UsageError("nonlinear_flow_rescaled: negative time");
  return nonlinear_flow(u0, t_tilde / (eps * eps));
}

PolarResult project_orthogonal(const SmallMat& u) { return polar_orthogonal(u); }

// g = lambda^2 (D - 2) / (2 D) with D = S + e^{-tau},
// S = sqrt(e^{-2tau} + (1 - e^{-2tau}) lambda^2), and D - 2 expanded so that
// no O(1) terms cancel when tau is small.
double g_scalar(double lambda, const GCoefficients& c) noexcept {
  const double l2 = lambda * lambda;
  if (l2 == 0.0) return 0.0;
  const double s = std::sqrt(c.exp_neg2 + c.one_minus_exp_neg2 * l2);
  const double d = s + c.exp_neg;
  const double d_minus_2 = c.one_minus_exp_neg2 * (l2 - 1.0) / (s + 1.0) + std::expm1(-c.tau);
  return l2 * d_minus_2 / (2.0 * d);
}

double g_scalar(double lambda, double tau) { return g_scalar(lambda, GCoefficients::make(tau)); }

double g_trace(const SmallMat& u, const GCoefficients& c) {
  const SvdResult s = svd(u);
  double acc = 0.0;
  for (double sigma : s.singular_values) acc += g_scalar(sigma, c);
  return acc / c.tau;
}

double g_trace(const SmallMat& u, double tau) { return g_trace(u, GCoefficients::make(tau)); }

SmallMat ode_oracle_rk4(const SmallMat& u0, double t, double h) {
  if (!(t >= 0.0)) throw UsageError("ode_oracle_rk4: negative time");
  if (t == 0.0) return u0;
  if (!(h > 0.0) || h > t) throw UsageError("ode_oracle_rk4: step must satisfy 0 < h <= t");
  const auto steps = static_cast<long>(std::ceil(t / h - 1e-9));
  SmallMat u = u0;
  for (long i = 0; i < steps; ++i) {
    const double step = (i + 1 == steps) ? t - static_cast<double>(steps - 1) * h : h;
    const SmallMat k1 = ode_rhs(u);
    const SmallMat k2 = ode_rhs(u + (0.5 * step) * k1);
    const SmallMat k3 = ode_rhs(u + (0.5 * step) * k2);
    const SmallMat k4 = ode_rhs(u + step * k3);
    u += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

MatrixField nonlinear_flow_field(const MatrixField& u, double t) {
  if (!(t >= 0.0)) throw UsageError("nonlinear_flow_field: negative time");
  return map_nodes(u, [t](const SmallMat& a) { return nonlinear_flow(a, t); });
}

ProjectionResult project_orthogonal_field(const MatrixField& u) {
  ProjectionResult r{MatrixField(u.grid(), u.matrix_size()), 0};
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    PolarResult p = polar_orthogonal(u.at(k));
    if (p.near_singular) ++r.near_singular_nodes;
    r.field.set(k, p.orthogonal);
  }
  return r;
}

}  // namespace macflow
