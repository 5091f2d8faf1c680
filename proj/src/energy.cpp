#include "macflow/energy.hpp"

#include "macflow/dynamics.hpp"

namespace macflow {

namespace {

// h^d sum_nodes ||I - U U^T||_F^2
double orthogonality_defect(const MatrixField& u) {
  const int m = u.matrix_size();
  double acc = 0.0;
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    const auto a = u.node(k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double uut = 0.0;
        for (int l = 0; l < m; ++l) uut += a[static_cast<std::size_t>(i * m + l)] * a[static_cast<std::size_t>(j * m + l)];
        const double d = (i == j ? 1.0 : 0.0) - uut;
        acc += d * d;
      }
  }
  return u.grid().cell_volume() * acc;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw UsageError(std::string(what) + " must be positive");
}

}  // namespace

EnergyBreakdown modified_energy(const MatrixField& u, double tau, double eps, const SpectralPlan& plan) {
  require_positive(tau, "modified_energy: tau");
  require_positive(eps, "modified_energy: eps");
  const GCoefficients c = GCoefficients::make(tau);
  EnergyBreakdown e;
  e.linear_part = linear_energy_form(u, tau, eps, plan);
  const MatrixField w = heat_propagate(u, 0.5 * tau, eps, plan);
  double acc = 0.0;
  for (std::size_t k = 0; k < w.node_count(); ++k) acc += g_trace(w.at(k), c);
  e.g_part = u.grid().cell_volume() * acc;
  e.total = e.linear_part + e.g_part;
  return e;
}

double gl_energy_rescaled(const MatrixField& u, double eps, const SpectralPlan& plan) {
  require_positive(eps, "gl_energy_rescaled: eps");
  return 0.5 * h1_seminorm_sq(u, plan) + orthogonality_defect(u) / (4.0 * eps * eps);
}

double gl_energy_physical(const MatrixField& u, double eps, const SpectralPlan& plan) {
  require_positive(eps, "gl_energy_physical: eps");
  return 0.5 * eps * eps * h1_seminorm_sq(u, plan) + 0.25 * orthogonality_defect(u);
}

double e1_energy(const MatrixField& u, double tau) {
  const GCoefficients c = GCoefficients::make(tau);
  double acc = 0.0;
  for (double x : u.data()) acc += x * x;
  return c.c1 * u.grid().cell_volume() * acc + c.c2 * u.matrix_size() * u.grid().volume();
}

double e2_energy(const MatrixField& u, double tau, double eps, const SpectralPlan& plan) {
  const GCoefficients c = GCoefficients::make(tau);
  // e^tau/(e^{2tau}-1) sqrt(1 + (e^{2tau}-1) s^2) = sqrt(c0^2 + s^2/(1-e^{-2tau})),
  // c0 = 1/(2 sinh tau).
  const double c0 = 0.5 / std::sinh(tau);
  const double c0_sq = c0 * c0;
  const MatrixField w = heat_propagate(u, 0.5 * tau, eps, plan);
  double acc = 0.0;
  for (std::size_t k = 0; k < w.node_count(); ++k) {
    const SvdResult s = svd(w.at(k));
    for (double sigma : s.singular_values) acc += std::sqrt(c0_sq + sigma * sigma / c.one_minus_exp_neg2);
  }
  return u.grid().cell_volume() * acc / tau;
}

MatrixField e2_frechet_derivative(const MatrixField& u, double tau, double eps, const SpectralPlan& plan) {
  require_positive(tau, "e2_frechet_derivative: tau");
  const MatrixField w = heat_propagate(u, 0.5 * tau, eps, plan);
  const MatrixField inner = map_nodes(w, [tau](const SmallMat& a) {
    return apply_singular_function(a, [tau](double s) { return flow_singular_value(s, tau) / tau; });
  });
  return heat_propagate(inner, 0.5 * tau, eps, plan);
}

}  // namespace macflow
