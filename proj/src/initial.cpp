#include "macflow/initial.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "macflow/rng.hpp"

namespace macflow {

namespace {

void require_planar_2x2(const Grid& grid, int m, const char* name) {
  if (grid.dim() != 2 || m != 2) {
    throw UsageError(std::string(name) + " initial data requires d = 2 and m = 2 (got d = " +
                     std::to_string(grid.dim()) + ", m = " + std::to_string(m) + ")");
  }
}

double rotation_angle(double x, double y) { return 0.5 * std::numbers::pi * std::sin(x + y); }

}  // namespace

MatrixField ic_random(const Grid& grid, int m, std::uint64_t seed) {
  MatrixField u(grid, m);
  auto data = u.data();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = 0.1 * counter_uniform(seed, i);
  return u;
}

MatrixField ic_structured(const Grid& grid, int m) {
  require_planar_2x2(grid, m, "structured");
  MatrixField u(grid, 2);
  const int n = grid.n();
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coordinate(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coordinate(ix);
      const double alpha = rotation_angle(x, y);
      const double r = std::hypot(x, y);
      const double theta = std::atan2(x, y);
      const double chi = r < 2.0 * std::numbers::pi * (0.3 + 0.06 * std::sin(6.0 * theta)) ? 1.0 : 0.0;
      const double c = std::cos(alpha);
      const double s = std::sin(alpha);
      auto v = u.node(static_cast<std::size_t>(iy) * n + ix);
      v[0] = c;
      v[1] = -chi * s + (1.0 - chi) * s;
      v[2] = s;
      v[3] = chi * c - (1.0 - chi) * c;
    }
  }
  return u;
}

MatrixField ic_rotation(const Grid& grid, int m) {
  require_planar_2x2(grid, m, "rotation");
  MatrixField u(grid, 2);
  const int n = grid.n();
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coordinate(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double alpha = rotation_angle(grid.coordinate(ix), y);
      auto v = u.node(static_cast<std::size_t>(iy) * n + ix);
      v[0] = std::cos(alpha);
      v[1] = -std::sin(alpha);
      v[2] = std::sin(alpha);
      v[3] = std::cos(alpha);
    }
  }
  return u;
}

}  // namespace macflow
