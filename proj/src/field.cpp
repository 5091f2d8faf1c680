#include "macflow/field.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace macflow {

Grid::Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
  if (dim != 1 && dim != 2) throw UsageError("grid: dimension must be 1 or 2, got " + std::to_string(dim));
  if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n))) {
    throw UsageError("grid: points per axis must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) throw UsageError("grid: length must be positive and finite");
}

std::size_t Grid::node_count() const noexcept {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

double Grid::cell_volume() const noexcept {
  const double h = spacing();
  return dim_ == 1 ? h : h * h;
}

double Grid::volume() const noexcept { return dim_ == 1 ? length_ : length_ * length_; }

MatrixField::MatrixField(Grid grid, int m) : grid_(grid), m_(m) {
  if (m < 1) throw UsageError("field: matrix size must be >= 1");
  data_.assign(grid_.node_count() * block(), 0.0);
}

MatrixField::MatrixField(Grid grid, int m, std::vector<double> data) : grid_(grid), m_(m) {
  if (m < 1) throw UsageError("field: matrix size must be >= 1");
  if (data.size() != grid_.node_count() * block()) {
    throw UsageError("field: expected " + std::to_string(grid_.node_count() * block()) +
                     " values, got " + std::to_string(data.size()));
  }
  data_ = std::move(data);
  if (!all_finite()) throw UsageError("field: non-finite entry");
}

MatrixField MatrixField::constant(const Grid& grid, const SmallMat& value) {
  MatrixField f(grid, value.size());
  for (std::size_t k = 0; k < f.node_count(); ++k) f.set(k, value);
  return f;
}

SmallMat MatrixField::at(std::size_t k) const { return SmallMat::unchecked(m_, node(k)); }

void MatrixField::set(std::size_t k, const SmallMat& value) {
  if (value.size() != m_) throw UsageError("field: matrix size mismatch in set");
  std::ranges::copy(value.entries(), node(k).begin());
}

bool MatrixField::all_finite() const noexcept {
  return std::ranges::all_of(data_, [](double x) { return std::isfinite(x); });
}

bool DiagnosticsRecord::all_finite() const noexcept {
  return std::isfinite(t) && std::isfinite(energy) && std::isfinite(modified_energy) &&
         std::isfinite(max_frobenius) && std::isfinite(max_abs_det) && std::isfinite(h1_seminorm_sq);
}

void require_compatible(const MatrixField& a, const MatrixField& b, const char* op) {
  if (!(a.grid() == b.grid()) || a.matrix_size() != b.matrix_size()) {
    throw UsageError(std::string(op) + ": fields live on different grids or matrix sizes");
  }
}

double max_frobenius(const MatrixField& u) {
  double best = 0.0;
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    double acc = 0.0;
    for (double x : u.node(k)) acc += x * x;
    best = std::max(best, std::sqrt(acc));
  }
  return best;
}

double max_abs_det(const MatrixField& u) {
  double best = 0.0;
  for (std::size_t k = 0; k < u.node_count(); ++k) best = std::max(best, std::abs(determinant(u.at(k))));
  return best;
}

double l2_difference(const MatrixField& a, const MatrixField& b) {
  require_compatible(a, b, "l2_difference");
  const auto x = a.data();
  const auto y = b.data();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    acc += d * d;
  }
  return a.grid().cell_volume() * acc;
}

GrayImage det_sign_image(const MatrixField& u) {
  if (u.grid().dim() != 2) throw UsageError("det_sign_image: requires a 2D field");
  const int n = u.grid().n();
  GrayImage img{n, n, std::vector<std::uint8_t>(u.node_count())};
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    const double det = determinant(u.at(k));
    img.pixels[k] = det > 1e-12 ? 255 : (det < -1e-12 ? 0 : 128);
  }
  return img;
}

}  // namespace macflow
