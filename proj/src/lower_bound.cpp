#include "mixmi/lower_bound.hpp"

#include "mixmi/divergence.hpp"
#include "mixmi/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mixmi {

namespace {

void check_label(const LabeledMixture& mixture, int c) {
  if (c < 1 || c > mixture.num_classes()) {
    throw Error(ErrorKind::InvalidArgument, "class label " + std::to_string(c) + " out of range");
  }
}

double log_q_unchecked(const LabeledMixture& mixture, std::size_t c, std::size_t c2, double alpha) {
  const auto& probs = mixture.class_marginal().probs;
  const double log_pc = std::log(probs[c]);
  const double log_pc2 = std::log(probs[c2]);
  std::vector<double> terms;
  terms.reserve(mixture.class_members(c).size() * mixture.class_members(c2).size());
  for (std::size_t i : mixture.class_members(c)) {
    const double wi = std::log(mixture.weight(i)) - log_pc;
    for (std::size_t j : mixture.class_members(c2)) {
      const double wj = std::log(mixture.weight(j)) - log_pc2;
      const double ca = i == j ? 0.0 : chernoff_gaussian(mixture.component(i), mixture.component(j), alpha);
      terms.push_back(alpha * wi + (1.0 - alpha) * wj - ca);
    }
  }
  return log_sum_exp(terms);
}

// ln sum_c' P_c' min(1, Q_cc') for one row, filling q_row with Q_cc'.
double log_row_sum(const LabeledMixture& mixture, std::size_t c, double alpha, double* q_row) {
  const auto& probs = mixture.class_marginal().probs;
  std::vector<double> terms(probs.size());
  for (std::size_t c2 = 0; c2 < probs.size(); ++c2) {
    const double log_q = log_q_unchecked(mixture, c, c2, alpha);
    if (q_row) q_row[c2] = std::exp(log_q);
    terms[c2] = std::log(probs[c2]) + std::min(0.0, log_q);
  }
  return log_sum_exp(terms);
}

double assemble(const LabeledMixture& mixture, const std::vector<double>& row_logs) {
  const auto& probs = mixture.class_marginal().probs;
  double value = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) value -= probs[c] * row_logs[c];
  return std::max(0.0, value);
}

double golden_section(const auto& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double log_q_value(const LabeledMixture& mixture, int c, int c2, double alpha) {
  check_label(mixture, c);
  check_label(mixture, c2);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
  }
  return log_q_unchecked(mixture, static_cast<std::size_t>(c - 1), static_cast<std::size_t>(c2 - 1), alpha);
}

double q_value(const LabeledMixture& mixture, int c, int c2, double alpha) {
  return std::exp(log_q_value(mixture, c, c2, alpha));
}

LowerBoundResult lower_bound_mi(const LabeledMixture& mixture, std::span<const double> alphas) {
  const auto k = static_cast<std::size_t>(mixture.num_classes());
  if (alphas.size() != k) {
    throw Error(ErrorKind::InvalidArgument, "expected one alpha per class");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
  }
  LowerBoundResult out;
  out.alphas.assign(alphas.begin(), alphas.end());
  out.q_matrix = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  // Row-major scratch so each worker writes a contiguous row.
  std::vector<double> q(k * k);
  std::vector<double> row_logs(k);
  detail::parallel_for(k, [&](std::size_t c) {
    row_logs[c] = log_row_sum(mixture, c, alphas[c], q.data() + c * k);
  });
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      out.q_matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = q[r * k + c];
    }
  }
  out.value = assemble(mixture, row_logs);
  return out;
}

LowerBoundResult lower_bound_mi(const LabeledMixture& mixture, double alpha) {
  const std::vector<double> alphas(static_cast<std::size_t>(mixture.num_classes()), alpha);
  return lower_bound_mi(mixture, alphas);
}

LowerBoundResult lower_bound_mi_auto(const LabeledMixture& mixture, const AlphaSearch& search) {
  if (!(search.lo > 0.0 && search.hi < 1.0 && search.lo < search.hi) || search.grid_points < 3) {
    throw Error(ErrorKind::InvalidArgument, "alpha search window must satisfy 0 < lo < hi < 1");
  }
  const auto k = static_cast<std::size_t>(mixture.num_classes());
  std::vector<double> alphas(k, 0.5);

  detail::parallel_for(k, [&](std::size_t c) {
    auto objective = [&](double a) { return log_row_sum(mixture, c, a, nullptr); };
    const int n = search.grid_points;
    const double step = (search.hi - search.lo) / (n - 1);
    double best_alpha = 0.5;
    double best_value = objective(0.5);
    int best_index = -1;
    for (int g = 0; g < n; ++g) {
      const double a = search.lo + g * step;
      const double v = objective(a);
      if (v < best_value) {
        best_value = v;
        best_alpha = a;
        best_index = g;
      }
    }
    if (best_index >= 0) {
      const double lo = search.lo + std::max(0, best_index - 1) * step;
      const double hi = search.lo + std::min(n - 1, best_index + 1) * step;
      const double refined = golden_section(objective, lo, hi, search.tol);
      if (objective(refined) < best_value) best_alpha = refined;
    }
    alphas[c] = best_alpha;
  });
  return lower_bound_mi(mixture, alphas);
}

}  // namespace mixmi
