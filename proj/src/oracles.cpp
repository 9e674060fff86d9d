#include "mixmi/oracles.hpp"

#include "mixmi/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace mixmi {

namespace {

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / total;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }
};

std::vector<std::uint64_t> stratum_sizes(const LabeledMixture& mixture, std::uint64_t n) {
  const auto& active = mixture.active_components();
  std::vector<std::uint64_t> sizes(mixture.size(), 0);
  std::uint64_t assigned = 0;
  for (std::size_t i : active) {
    const auto floor_share = static_cast<std::uint64_t>(std::floor(mixture.weight(i) * static_cast<double>(n)));
    sizes[i] = std::max<std::uint64_t>(1, floor_share);
    assigned += sizes[i];
  }
  std::vector<std::size_t> by_weight(active.begin(), active.end());
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](std::size_t a, std::size_t b) { return mixture.weight(a) > mixture.weight(b); });
  for (std::size_t t = 0; assigned < n; t = (t + 1) % by_weight.size()) {
    ++sizes[by_weight[t]];
    ++assigned;
  }
  return sizes;
}

struct Grid {
  int dim = 0;
  int points = 0;
  std::vector<double> lo, step;

  double weight(int index) const { return (index == 0 || index == points - 1) ? 0.5 : 1.0; }
};

Grid make_grid(const LabeledMixture& mixture, int points_per_axis) {
  const Eigen::Index d = mixture.dim();
  if (d > 2) {
    throw Error(ErrorKind::Unsupported, "quadrature oracle supports dimension <= 2, got " + std::to_string(d));
  }
  if (points_per_axis < 3) {
    throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 3 points per axis");
  }
  double max_sd = 0.0;
  for (std::size_t i : mixture.active_components()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(mixture.component(i).cov(), Eigen::EigenvaluesOnly);
    max_sd = std::max(max_sd, std::sqrt(eig.eigenvalues().maxCoeff()));
  }
  Grid grid;
  grid.dim = static_cast<int>(d);
  grid.points = points_per_axis;
  for (Eigen::Index k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : mixture.active_components()) {
      lo = std::min(lo, mixture.component(i).mean()[k]);
      hi = std::max(hi, mixture.component(i).mean()[k]);
    }
    lo -= 8.0 * max_sd;
    hi += 8.0 * max_sd;
    grid.lo.push_back(lo);
    grid.step.push_back((hi - lo) / (points_per_axis - 1));
  }
  return grid;
}

// Integrates integrand(log joint per class, log marginal) over the grid.
template <class Integrand>
double integrate(const LabeledMixture& mixture, const Grid& grid, Integrand integrand) {
  const auto k = static_cast<std::size_t>(mixture.num_classes());
  const std::size_t rows = static_cast<std::size_t>(grid.points);
  std::vector<double> row_sums(rows, 0.0);
  detail::parallel_for(rows, [&](std::size_t r) {
    std::vector<double> terms(mixture.size());
    std::vector<double> class_terms;
    std::vector<double> log_joint(k);
    double x[2] = {grid.lo[0] + static_cast<double>(r) * grid.step[0], 0.0};
    const int inner = grid.dim == 2 ? grid.points : 1;
    double sum = 0.0;
    for (int q = 0; q < inner; ++q) {
      if (grid.dim == 2) x[1] = grid.lo[1] + q * grid.step[1];
      mixture.weighted_log_densities(x, terms);
      const double log_marginal = log_sum_exp(terms);
      for (std::size_t c = 0; c < k; ++c) {
        class_terms.clear();
        for (std::size_t i : mixture.class_members(c)) class_terms.push_back(terms[i]);
        log_joint[c] = log_sum_exp(class_terms);
      }
      const double w = grid.dim == 2 ? grid.weight(q) : 1.0;
      sum += w * integrand(log_joint, log_marginal);
    }
    row_sums[r] = grid.weight(static_cast<int>(r)) * sum;
  });
  double cell = 1.0;
  for (double h : grid.step) cell *= h;
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total * cell;
}

}  // namespace

OracleResult mc_mutual_information(const LabeledMixture& mixture, std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least one sample");
  const std::vector<std::uint64_t> sizes = stratum_sizes(mixture, n_samples);

  struct Task {
    std::size_t component;
    std::uint64_t chunk;
    std::uint64_t count;
  };
  std::vector<Task> tasks;
  for (std::size_t i : mixture.active_components()) {
    for (std::uint64_t start = 0, chunk = 0; start < sizes[i]; start += kMcChunkSize, ++chunk) {
      tasks.push_back(Task{i, chunk, std::min(kMcChunkSize, sizes[i] - start)});
    }
  }

  std::vector<Moments> partial(tasks.size());
  detail::parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(task.component), static_cast<std::uint32_t>(task.chunk)};
    Rng rng(seq);
    const GaussianComponent& g = mixture.component(task.component);
    const auto& members = mixture.class_members(mixture.class_index(task.component));
    std::vector<double> x(static_cast<std::size_t>(mixture.dim()));
    std::vector<double> terms(mixture.size());
    std::vector<double> class_terms(members.size());
    Moments moments;
    for (std::uint64_t s = 0; s < task.count; ++s) {
      g.sample_into(rng, x.data());
      mixture.weighted_log_densities(x.data(), terms);
      for (std::size_t k = 0; k < members.size(); ++k) class_terms[k] = terms[members[k]];
      moments.add(log_sum_exp(terms) - log_sum_exp(class_terms));
    }
    partial[t] = moments;
  });

  std::vector<Moments> per_component(mixture.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) per_component[tasks[t].component].merge(partial[t]);

  double penalty = 0.0;
  double variance = 0.0;
  std::uint64_t total = 0;
  for (std::size_t i : mixture.active_components()) {
    const Moments& m = per_component[i];
    const double w = mixture.weight(i);
    penalty += w * m.mean;
    if (m.count > 1) {
      const double sample_var = m.m2 / static_cast<double>(m.count - 1);
      variance += w * w * sample_var / static_cast<double>(m.count);
    }
    total += m.count;
  }
  OracleResult out;
  out.value = label_entropy(mixture.class_marginal()) - penalty;
  out.std_error = std::sqrt(variance);
  out.samples_or_grid = total;
  out.seed = seed;
  return out;
}

OracleResult quadrature_mutual_information(const LabeledMixture& mixture, int points_per_axis) {
  const Grid grid = make_grid(mixture, points_per_axis);
  const auto& probs = mixture.class_marginal().probs;
  std::vector<double> log_probs(probs.size());
  for (std::size_t c = 0; c < probs.size(); ++c) log_probs[c] = std::log(probs[c]);

  const double value = integrate(mixture, grid, [&](const std::vector<double>& log_joint, double log_marginal) {
    double s = 0.0;
    for (std::size_t c = 0; c < log_joint.size(); ++c) {
      if (!std::isfinite(log_joint[c])) continue;
      const double p = std::exp(log_joint[c]);
      if (p == 0.0) continue;
      s += p * (log_joint[c] - log_probs[c] - log_marginal);
    }
    return s;
  });
  OracleResult out;
  out.value = value;
  out.std_error = 0.0;
  std::uint64_t count = 1;
  for (int k = 0; k < grid.dim; ++k) count *= static_cast<std::uint64_t>(grid.points);
  out.samples_or_grid = count;
  return out;
}

double quadrature_bayes_error(const LabeledMixture& mixture, int points_per_axis) {
  const Grid grid = make_grid(mixture, points_per_axis);
  return integrate(mixture, grid, [](const std::vector<double>& log_joint, double log_marginal) {
    if (!std::isfinite(log_marginal)) return 0.0;
    const auto top = std::max_element(log_joint.begin(), log_joint.end());
    double rest = 0.0;
    for (auto it = log_joint.begin(); it != log_joint.end(); ++it) {
      if (it != top) rest += std::exp(*it);
    }
    return rest;
  });
}

}  // namespace mixmi
