#include "macflow/sim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "macflow/dynamics.hpp"

namespace macflow {

const char* to_string(Mode m) noexcept { return m == Mode::physical ? "physical" : "rescaled"; }
const char* to_string(Scheme s) noexcept { return s == Scheme::strang ? "strang" : "threshold"; }

Mode parse_mode(const std::string& s) {
  if (s == "physical") return Mode::physical;
  if (s == "rescaled") return Mode::rescaled;
  throw UsageError("unknown mode '" + s + "' (expected physical or rescaled)");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "strang") return Scheme::strang;
  if (s == "threshold") return Scheme::threshold;
  throw UsageError("unknown scheme '" + s + "' (expected strang or threshold)");
}

void SchemeParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw UsageError("tau must be positive and finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("eps must be positive and finite");
  if (scheme == Scheme::threshold && mode != Mode::rescaled) {
    throw UsageError("the thresholding scheme requires rescaled mode");
  }
}

MatrixField strang_step(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan) {
  const double half = 0.5 * p.tau;
  const MatrixField a = heat_propagate(u, half, p.heat_eps(), plan);
  const MatrixField b = nonlinear_flow_field(a, p.flow_time());
  return heat_propagate(b, half, p.heat_eps(), plan);
}

ThresholdStep threshold_step(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan) {
  if (p.mode != Mode::rescaled) throw UsageError("threshold_step: requires rescaled mode");
  const double half = 0.5 * p.tau;
  const MatrixField a = heat_propagate(u, half, 1.0, plan);
  ProjectionResult projected = project_orthogonal_field(a);
  return {heat_propagate(projected.field, half, 1.0, plan), projected.near_singular_nodes};
}

MatrixField advance(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan,
                    std::size_t* near_singular) {
  if (p.scheme == Scheme::strang) return strang_step(u, p, plan);
  ThresholdStep s = threshold_step(u, p, plan);
  if (near_singular != nullptr) *near_singular += s.near_singular_nodes;
  return std::move(s.field);
}

EnergyBreakdown scheme_modified_energy(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan) {
  if (p.mode == Mode::physical) return modified_energy(u, p.tau, p.eps, plan);
  const double eps2 = p.eps * p.eps;
  EnergyBreakdown e = modified_energy(u, p.flow_time(), p.eps, plan);
  e.linear_part /= eps2;
  e.g_part /= eps2;
  e.total = e.linear_part + e.g_part;
  return e;
}

double scheme_gl_energy(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan) {
  return p.mode == Mode::physical ? gl_energy_physical(u, p.eps, plan) : gl_energy_rescaled(u, p.eps, plan);
}

DiagnosticsRecord diagnose(const MatrixField& u, double t, const SchemeParams& p, const SpectralPlan& plan) {
  DiagnosticsRecord r;
  r.t = t;
  r.energy = scheme_gl_energy(u, p, plan);
  r.modified_energy = scheme_modified_energy(u, p, plan).total;
  r.max_frobenius = max_frobenius(u);
  r.max_abs_det = max_abs_det(u);
  r.h1_seminorm_sq = h1_seminorm_sq(u, plan);
  return r;
}

std::size_t step_count(double t_max, double tau) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw UsageError("t_max must be nonnegative and finite");
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  return static_cast<std::size_t>(std::floor(t_max / tau + 1e-9));
}

namespace {

TimelineMetadata metadata_for(const MatrixField& u0, const SchemeParams& p) {
  TimelineMetadata m;
  m.params = p;
  m.dim = u0.grid().dim();
  m.n = u0.grid().n();
  m.length = u0.grid().length();
  m.m = u0.matrix_size();
  return m;
}

void push_record(Timeline& tl, DiagnosticsRecord r, std::size_t step) {
  if (!r.all_finite()) {
    throw NumericalError("non-finite diagnostics at step " + std::to_string(step));
  }
  tl.records.push_back(r);
}

bool is_record_step(std::size_t step, std::size_t total, int record_every) {
  return step == 0 || step == total || step % static_cast<std::size_t>(record_every) == 0;
}

template <class F>
auto at_step(std::size_t step, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError("step " + std::to_string(step) + ": " + e.what(), e.residual());
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RunResult run(const MatrixField& u0, const SchemeParams& p, double t_max, int record_every,
              const SpectralPlan& plan, const StepObserver& observer) {
  p.validate();
  if (record_every < 1) throw UsageError("record_every must be >= 1");
  require_plan_matches(u0, plan);
  const auto start = Clock::now();
  const std::size_t total = step_count(t_max, p.tau);

  RunResult result{u0, Timeline{{}, metadata_for(u0, p)}};
  Timeline& tl = result.timeline;
  tl.meta.steps = total;
  push_record(tl, at_step(0, [&] { return diagnose(u0, 0.0, p, plan); }), 0);
  if (observer) observer(0, 0.0, u0);

  for (std::size_t step = 1; step <= total; ++step) {
    const double t = static_cast<double>(step) * p.tau;
    result.final_field =
        at_step(step, [&] { return advance(result.final_field, p, plan, &tl.meta.near_singular_nodes); });
    if (is_record_step(step, total, record_every)) {
      push_record(tl, at_step(step, [&] { return diagnose(result.final_field, t, p, plan); }), step);
    }
    if (observer) observer(step, t, result.final_field);
  }
  tl.meta.wall_seconds = seconds_since(start);
  return result;
}

std::vector<ConvergenceRow> convergence_study(const MatrixField& u0, const SchemeParams& p_base, double t_final,
                                              int levels, const SpectralPlan& plan, int reference_level) {
  p_base.validate();
  if (p_base.scheme != Scheme::strang) throw UsageError("convergence_study: requires the Strang scheme");
  if (levels < 2) throw UsageError("convergence_study: need at least 2 levels");
  if (reference_level < 0) reference_level = levels + 2;
  if (reference_level < levels) throw UsageError("convergence_study: reference must be finer than every level");
  if (!(t_final > 0.0)) throw UsageError("convergence_study: final time must be positive");

  auto solve = [&](int level) {
    SchemeParams p = p_base;
    p.tau = std::ldexp(p_base.tau, -level);
    const double ratio = t_final / p.tau;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0) {
      std::ostringstream msg;
      msg << "convergence_study: T / tau = " << ratio << " is not an integer at level " << level;
      throw UsageError(msg.str());
    }
    MatrixField u = u0;
    const auto steps = static_cast<std::size_t>(rounded);
    for (std::size_t s = 1; s <= steps; ++s) {
      u = at_step(s, [&] { return strang_step(u, p, plan); });
    }
    return u;
  };

  const MatrixField reference = solve(reference_level);
  std::vector<ConvergenceRow> rows(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) {
    rows[static_cast<std::size_t>(j)].tau = std::ldexp(p_base.tau, -j);
    rows[static_cast<std::size_t>(j)].error = std::sqrt(l2_difference(solve(j), reference));
  }
  for (std::size_t j = 0; j + 1 < rows.size(); ++j) rows[j].order = std::log2(rows[j].error / rows[j + 1].error);
  rows.back().order = std::numeric_limits<double>::quiet_NaN();
  return rows;
}

Comparison compare_methods(const MatrixField& u0, const SchemeParams& p, double t_max, int record_every,
                           const SpectralPlan& plan, const PairObserver& observer) {
  if (p.mode != Mode::rescaled) throw UsageError("compare_methods: requires rescaled mode");
  if (record_every < 1) throw UsageError("record_every must be >= 1");
  require_plan_matches(u0, plan);
  SchemeParams ps = p;
  ps.scheme = Scheme::strang;
  SchemeParams pt = p;
  pt.scheme = Scheme::threshold;
  ps.validate();
  pt.validate();

  const auto start = Clock::now();
  const std::size_t total = step_count(t_max, p.tau);
  Comparison c{Timeline{{}, metadata_for(u0, ps)}, Timeline{{}, metadata_for(u0, pt)}, {}, {}};
  c.strang.meta.steps = total;
  c.threshold.meta.steps = total;

  MatrixField us = u0;
  MatrixField ut = u0;
  auto record = [&](std::size_t step, double t) {
    push_record(c.strang, at_step(step, [&] { return diagnose(us, t, ps, plan); }), step);
    push_record(c.threshold, at_step(step, [&] { return diagnose(ut, t, pt, plan); }), step);
    c.times.push_back(t);
    c.difference.push_back(l2_difference(us, ut));
  };
  record(0, 0.0);
  if (observer) observer(0, 0.0, us, ut);
  for (std::size_t step = 1; step <= total; ++step) {
    const double t = static_cast<double>(step) * p.tau;
    us = at_step(step, [&] { return strang_step(us, ps, plan); });
    ut = at_step(step, [&] { return advance(ut, pt, plan, &c.threshold.meta.near_singular_nodes); });
    if (is_record_step(step, total, record_every)) record(step, t);
    if (observer) observer(step, t, us, ut);
  }
  const double wall = seconds_since(start);
  c.strang.meta.wall_seconds = wall;
  c.threshold.meta.wall_seconds = wall;
  return c;
}

std::vector<std::string> audit_timeline(const Timeline& timeline, bool admissible_start, bool require_energy_decay) {
  std::vector<std::string> issues;
  const double bound = std::sqrt(static_cast<double>(timeline.meta.m));
  const auto& rs = timeline.records;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const DiagnosticsRecord& r = rs[i];
    std::ostringstream msg;
    msg.precision(17);
    if (admissible_start && r.max_frobenius > bound + kBoundSlack) {
      msg << "maximum principle violated at t=" << r.t << ": max ||U||_F = " << r.max_frobenius
          << " exceeds sqrt(m) = " << bound << " by " << r.max_frobenius - bound;
      issues.push_back(msg.str());
      msg.str("");
    }
    if (admissible_start && r.max_abs_det > 1.0 + kBoundSlack) {
      msg << "determinant bound violated at t=" << r.t << ": max |det U| = " << r.max_abs_det << " exceeds 1 by "
          << r.max_abs_det - 1.0;
      issues.push_back(msg.str());
      msg.str("");
    }
    if (require_energy_decay && i > 0) {
      const double prev = rs[i - 1].modified_energy;
      const double slack = kEnergySlack * (1.0 + std::abs(prev));
      if (r.modified_energy > prev + slack) {
        msg << "modified energy increased at t=" << r.t << ": " << prev << " -> " << r.modified_energy
            << " (margin " << r.modified_energy - prev - slack << ")";
        issues.push_back(msg.str());
      }
    }
  }
  return issues;
}

}  // namespace macflow
