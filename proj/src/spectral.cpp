#include "macflow/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

namespace macflow {

namespace {

// The FFTW planner is not reentrant; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

struct SpectralPlan::Impl {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (r2c != nullptr) fftw_destroy_plan(r2c);
    if (c2r != nullptr) fftw_destroy_plan(c2r);
  }
};

SpectralPlan::SpectralPlan(const Grid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
  const int n = grid.n();
  const int half = n / 2 + 1;
  const int rows = grid.dim() == 2 ? n : 1;
  impl_->real_size = grid.node_count();
  impl_->complex_size = static_cast<std::size_t>(rows) * half;

  const double scale = 2.0 * std::numbers::pi / grid.length();
  k_squared_.resize(impl_->complex_size);
  multiplicity_.resize(impl_->complex_size);
  for (int r = 0; r < rows; ++r) {
    const double k0 = grid.dim() == 2 ? scale * wavenumber(r) : 0.0;
    for (int c = 0; c < half; ++c) {
      const double k1 = scale * wavenumber(c);
      const std::size_t q = static_cast<std::size_t>(r) * half + c;
      k_squared_[q] = k0 * k0 + k1 * k1;
      multiplicity_[q] = (c == 0 || c == n / 2) ? 1.0 : 2.0;
    }
  }

  auto real = fftw_buffer<double>(impl_->real_size);
  auto cplx = fftw_buffer<fftw_complex>(impl_->complex_size);
  std::lock_guard lock(planner_mutex());
  // FFTW_ESTIMATE keeps plan selection, and hence rounding, reproducible.
  if (grid.dim() == 1) {
    impl_->r2c = fftw_plan_dft_r2c_1d(n, real.get(), cplx.get(), FFTW_ESTIMATE);
    impl_->c2r = fftw_plan_dft_c2r_1d(n, cplx.get(), real.get(), FFTW_ESTIMATE);
  } else {
    impl_->r2c = fftw_plan_dft_r2c_2d(n, n, real.get(), cplx.get(), FFTW_ESTIMATE);
    impl_->c2r = fftw_plan_dft_c2r_2d(n, n, cplx.get(), real.get(), FFTW_ESTIMATE);
  }
  if (impl_->r2c == nullptr || impl_->c2r == nullptr) throw NumericalError("FFTW plan creation failed");
}

SpectralPlan::~SpectralPlan() = default;
SpectralPlan::SpectralPlan(SpectralPlan&&) noexcept = default;
SpectralPlan& SpectralPlan::operator=(SpectralPlan&&) noexcept = default;

int SpectralPlan::wavenumber(int j) const noexcept {
  const int n = grid_.n();
  return j < n / 2 ? j : j - n;
}

void SpectralPlan::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != impl_->real_size || out.size() != impl_->complex_size) {
    throw UsageError("spectral forward: buffer size mismatch");
  }
  auto real = fftw_buffer<double>(impl_->real_size);
  auto cplx = fftw_buffer<fftw_complex>(impl_->complex_size);
  std::copy(in.begin(), in.end(), real.get());
  fftw_execute_dft_r2c(impl_->r2c, real.get(), cplx.get());
  const double inv = 1.0 / static_cast<double>(impl_->real_size);
  for (std::size_t q = 0; q < impl_->complex_size; ++q) {
    out[q] = std::complex<double>(cplx[q][0] * inv, cplx[q][1] * inv);
  }
}

void SpectralPlan::backward(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != impl_->complex_size || out.size() != impl_->real_size) {
    throw UsageError("spectral backward: buffer size mismatch");
  }
  auto real = fftw_buffer<double>(impl_->real_size);
  auto cplx = fftw_buffer<fftw_complex>(impl_->complex_size);
  for (std::size_t q = 0; q < impl_->complex_size; ++q) {
    cplx[q][0] = in[q].real();
    cplx[q][1] = in[q].imag();
  }
  fftw_execute_dft_c2r(impl_->c2r, cplx.get(), real.get());
  std::copy(real.get(), real.get() + impl_->real_size, out.begin());
}

void require_plan_matches(const MatrixField& u, const SpectralPlan& plan) {
  if (!(u.grid() == plan.grid())) throw UsageError("spectral plan built for a different grid");
}

MatrixField heat_propagate(const MatrixField& u, double t, double eps, const SpectralPlan& plan) {
  if (!(t >= 0.0)) throw UsageError("heat_propagate: negative time");
  if (!(eps > 0.0)) throw UsageError("heat_propagate: eps must be positive");
  require_plan_matches(u, plan);
  if (t == 0.0) return u;

  const auto k2 = plan.k_squared();
  std::vector<double> multiplier(k2.size());
  const double rate = t * eps * eps;
  for (std::size_t q = 0; q < k2.size(); ++q) multiplier[q] = std::exp(-rate * k2[q]);

  const std::size_t nodes = u.node_count();
  const std::size_t block = u.block();
  MatrixField out(u.grid(), u.matrix_size());
  std::vector<double> scalar(nodes);
  std::vector<std::complex<double>> spec(plan.spectrum_size());
  for (std::size_t e = 0; e < block; ++e) {
    for (std::size_t k = 0; k < nodes; ++k) scalar[k] = u.data()[k * block + e];
    plan.forward(scalar, spec);
    for (std::size_t q = 0; q < spec.size(); ++q) spec[q] *= multiplier[q];
    plan.backward(spec, scalar);
    for (std::size_t k = 0; k < nodes; ++k) out.data()[k * block + e] = scalar[k];
  }
  return out;
}

double linear_energy_form(const MatrixField& u, double tau, double eps, const SpectralPlan& plan) {
  if (!(tau > 0.0)) throw UsageError("linear_energy_form: tau must be positive");
  if (!(eps > 0.0)) throw UsageError("linear_energy_form: eps must be positive");
  const double rate = tau * eps * eps;
  return spectral_quadratic_form(u, plan, [&](double k2) { return -std::expm1(-rate * k2) / (2.0 * tau); });
}

double h1_seminorm_sq(const MatrixField& u, const SpectralPlan& plan) {
  return spectral_quadratic_form(u, plan, [](double k2) { return k2; });
}

}  // namespace macflow
