#pragma once

// Initial-condition generators.

#include <cstdint>

#include "macflow/field.hpp"

namespace macflow {

/// Every entry i.i.d. uniform on [0, 0.1]; entry e of node k uses counter
/// k * m^2 + e of the seed's stream.
MatrixField ic_random(const Grid& grid, int m, std::uint64_t seed);

/// Flower-shaped inclusion: a rotation field by angle
/// alpha = (pi/2) sin(x + y) inside r < 2 pi (0.3 + 0.06 sin 6 theta) and
/// the matching reflection outside, theta = atan2(x, y). 2D, m = 2.
MatrixField ic_structured(const Grid& grid, int m = 2);

/// Smooth rotation field [[cos a, -sin a], [sin a, cos a]],
/// a = (pi/2) sin(x + y). 2D, m = 2.
MatrixField ic_rotation(const Grid& grid, int m = 2);

}  // namespace macflow
