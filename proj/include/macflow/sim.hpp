#pragma once

// Time steppers, the diagnostics loop, the temporal convergence study, and
// the Strang-vs-thresholding comparison.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "macflow/energy.hpp"
#include "macflow/field.hpp"
#include "macflow/spectral.hpp"

namespace macflow {

/// physical: dU/dt = eps^2 Lap U + U - U U^T U.
/// rescaled: dU/dt = Lap U + (U - U U^T U) / eps^2 (time t~ = eps^2 t).
enum class Mode { physical, rescaled };
enum class Scheme { strang, threshold };

const char* to_string(Mode m) noexcept;
const char* to_string(Scheme s) noexcept;
Mode parse_mode(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct SchemeParams {
  double tau = 0.01;
  double eps = 0.1;
  Mode mode = Mode::physical;
  Scheme scheme = Scheme::strang;

  /// Throws UsageError unless tau > 0, eps > 0, and thresholding runs in
  /// rescaled mode.
  void validate() const;
  /// eps seen by the heat substep: eps (physical) or 1 (rescaled).
  double heat_eps() const noexcept { return mode == Mode::physical ? eps : 1.0; }
  /// Duration of the nonlinear substep: tau (physical) or tau / eps^2.
  double flow_time() const noexcept { return mode == Mode::physical ? tau : tau / (eps * eps); }

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// S_L(tau/2) S_N S_L(tau/2).
MatrixField strang_step(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan);

struct ThresholdStep {
  MatrixField field;
  std::size_t near_singular_nodes = 0;
};

/// S_L(tau/2) P S_L(tau/2) with P the pointwise polar projection.
ThresholdStep threshold_step(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan);

/// Dispatches on p.scheme; `near_singular` (optional) accumulates the
/// projection's near-singular node count.
MatrixField advance(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan,
                    std::size_t* near_singular = nullptr);

/// Modified energy of the scheme in p. Rescaled mode evaluates E~ with
/// step tau / eps^2 and divides by eps^2 so it is on the scale of
/// gl_energy_rescaled.
EnergyBreakdown scheme_modified_energy(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan);

/// Ginzburg-Landau energy matching p.mode.
double scheme_gl_energy(const MatrixField& u, const SchemeParams& p, const SpectralPlan& plan);

DiagnosticsRecord diagnose(const MatrixField& u, double t, const SchemeParams& p, const SpectralPlan& plan);

/// floor(t_max / tau), tolerant of representation error in the ratio.
std::size_t step_count(double t_max, double tau);

struct TimelineMetadata {
  SchemeParams params;
  int dim = 2;
  int n = 0;
  double length = 0.0;
  int m = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t near_singular_nodes = 0;
  double wall_seconds = 0.0;
};

struct Timeline {
  std::vector<DiagnosticsRecord> records;
  TimelineMetadata meta;
};

/// Called after step `step` (0 = initial data) with the current field.
using StepObserver = std::function<void(std::size_t step, double t, const MatrixField& u)>;

struct RunResult {
  MatrixField final_field;
  Timeline timeline;
};

/// Iterates step_count(t_max, tau) steps, recording at step 0, every
/// `record_every` steps, and at the last step. Throws NumericalError naming
/// the step if a record or kernel produces non-finite values.
RunResult run(const MatrixField& u0, const SchemeParams& p, double t_max, int record_every,
              const SpectralPlan& plan, const StepObserver& observer = {});

struct ConvergenceRow {
  double tau = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the last row
};

/// Strang solutions at tau_j = tau0 2^{-j}, j < levels, compared with a
/// reference at tau0 2^{-reference_level} (default levels + 2). Errors are
/// sqrt(l2_difference); orders are log2(e_j / e_{j+1}).
std::vector<ConvergenceRow> convergence_study(const MatrixField& u0, const SchemeParams& p_base, double t_final,
                                              int levels, const SpectralPlan& plan, int reference_level = -1);

struct Comparison {
  Timeline strang;
  Timeline threshold;
  std::vector<double> times;
  /// l2_difference(U_strang, U_threshold) at each record time.
  std::vector<double> difference;
};

using PairObserver =
    std::function<void(std::size_t step, double t, const MatrixField& strang, const MatrixField& threshold)>;

/// Runs both schemes in rescaled mode from the same initial data.
Comparison compare_methods(const MatrixField& u0, const SchemeParams& p, double t_max, int record_every,
                           const SpectralPlan& plan, const PairObserver& observer = {});

/// Structural checks of a finished timeline: maximum principle and
/// determinant bound when the initial data satisfied ||U0||_F <= sqrt(m),
/// and (if requested) monotone modified energy. Returns one message per
/// violation.
std::vector<std::string> audit_timeline(const Timeline& timeline, bool admissible_start, bool require_energy_decay);

inline constexpr double kBoundSlack = 1e-10;
inline constexpr double kEnergySlack = 1e-10;

}  // namespace macflow
