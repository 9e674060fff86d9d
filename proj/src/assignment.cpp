#include "mixmi/assignment.hpp"

#include "mixmi/error.hpp"

#include <limits>

namespace mixmi {

namespace {

// Rows <= cols. Classic potentials formulation; u, v, p, way are 1-based
// with index 0 as the virtual source column.
std::vector<std::ptrdiff_t> hungarian_rows_le_cols(const Matrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto m = static_cast<std::size_t>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::ptrdiff_t> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<std::ptrdiff_t>(j - 1);
  }
  return row_to_col;
}

}  // namespace

Matching solve_assignment(const Matrix& cost) {
  if (!cost.allFinite()) throw Error(ErrorKind::InvalidArgument, "assignment costs must be finite");
  Matching out;
  if (cost.rows() == 0 || cost.cols() == 0) {
    out.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    return out;
  }
  if (cost.rows() <= cost.cols()) {
    out.row_to_col = hungarian_rows_le_cols(cost);
  } else {
    const auto col_to_row = hungarian_rows_le_cols(cost.transpose());
    out.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    for (std::size_t c = 0; c < col_to_row.size(); ++c) {
      out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<std::ptrdiff_t>(c);
    }
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r) {
    if (out.row_to_col[r] >= 0) out.cost += cost(static_cast<Eigen::Index>(r), out.row_to_col[r]);
  }
  return out;
}

}  // namespace mixmi
