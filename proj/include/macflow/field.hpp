#pragma once

// Matrix-valued grid functions on the periodic box [-L/2, L/2]^d.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "macflow/smallmat.hpp"

namespace macflow {

/// Uniform periodic grid, d in {1, 2}, n a power of two >= 8.
///
/// Nodes are x_j = -L/2 + j h with h = L / n. Because n is a power of two,
/// n * h == L exactly. In 2D the linear node index is iy * n + ix.
class Grid {
 public:
  Grid(int dim, int n, double length = 2.0 * std::numbers::pi);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  double coordinate(int j) const noexcept { return -0.5 * length_ + j * spacing(); }
  std::size_t node_count() const noexcept;
  /// h^d, the quadrature weight of one node.
  double cell_volume() const noexcept;
  /// L^d.
  double volume() const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  int n_;
  double length_;
};

class MatrixField {
 public:
  /// Zero field.
  MatrixField(Grid grid, int m);
  /// Takes node-major, row-major-within-node data; validates length and
  /// finiteness.
  MatrixField(Grid grid, int m, std::vector<double> data);

  static MatrixField constant(const Grid& grid, const SmallMat& value);

  const Grid& grid() const noexcept { return grid_; }
  int matrix_size() const noexcept { return m_; }
  std::size_t node_count() const noexcept { return grid_.node_count(); }
  std::size_t block() const noexcept { return static_cast<std::size_t>(m_) * m_; }

  std::span<const double> node(std::size_t k) const noexcept {
    return {data_.data() + k * block(), block()};
  }
  std::span<double> node(std::size_t k) noexcept { return {data_.data() + k * block(), block()}; }

  SmallMat at(std::size_t k) const;
  void set(std::size_t k, const SmallMat& value);

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const MatrixField&, const MatrixField&) = default;

 private:
  Grid grid_;
  int m_;
  std::vector<double> data_;
};

/// Applies `f` (SmallMat -> SmallMat) at every node.
template <class F>
MatrixField map_nodes(const MatrixField& u, F&& f) {
  MatrixField out(u.grid(), u.matrix_size());
  for (std::size_t k = 0; k < u.node_count(); ++k) out.set(k, f(u.at(k)));
  return out;
}

/// One time sample of run diagnostics.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double modified_energy = 0.0;
  double max_frobenius = 0.0;
  double max_abs_det = 0.0;
  double h1_seminorm_sq = 0.0;

  bool all_finite() const noexcept;
  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

/// 8-bit single-channel image, row-major, row index = iy.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

double max_frobenius(const MatrixField& u);
double max_abs_det(const MatrixField& u);

/// h^d * sum over nodes of ||A - B||_F^2 (squared L2 distance).
double l2_difference(const MatrixField& a, const MatrixField& b);

/// 255 where det > 1e-12, 0 where det < -1e-12, 128 otherwise. 2D only.
GrayImage det_sign_image(const MatrixField& u);

void require_compatible(const MatrixField& a, const MatrixField& b, const char* op);

}  // namespace macflow
