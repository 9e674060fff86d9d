#pragma once

#include "mixmi/gaussian.hpp"

#include <cstddef>
#include <vector>

namespace mixmi {

/// Minimum-cost matching between the rows and columns of a rectangular cost
/// matrix. Every row is matched when rows <= cols, every column otherwise.
struct Matching {
  std::vector<std::ptrdiff_t> row_to_col;  // -1 for unmatched rows
  double cost = 0.0;
};

/// Hungarian method (shortest augmenting paths with potentials), O(n^2 m).
Matching solve_assignment(const Matrix& cost);

}  // namespace mixmi
