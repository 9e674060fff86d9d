#include "mixmi/upper_bound.hpp"

#include "mixmi/assignment.hpp"
#include "mixmi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace mixmi {

namespace {

constexpr double kFeasibilityTolerance = 1e-10;
// Largest per-step change of ln(phi) in the exponentiated-gradient update.
constexpr double kMaxLogStep = 30.0;
constexpr int kMaxHalvings = 60;
constexpr double kMaxStep = 1e3;

double safe_log(double x) { return std::log(std::max(x, kPhiFloor)); }

}  // namespace

double VariationalAssignment::constraint_violation(const LabeledMixture& mixture) const {
  std::vector<double> sums(mixture.size(), 0.0);
  for (std::size_t m = 0; m < num_batches(); ++m) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double p = phi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c));
      const std::ptrdiff_t i = slot(m, c);
      if (!(p >= 0.0)) return std::numeric_limits<double>::infinity();
      if (i < 0) {
        if (p != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      if (mixture.class_index(static_cast<std::size_t>(i)) != c) {
        return std::numeric_limits<double>::infinity();
      }
      sums[static_cast<std::size_t>(i)] += p;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    worst = std::max(worst, std::abs(sums[i] - mixture.weight(i)));
  }
  return worst;
}

VariationalAssignment build_batches_full(const LabeledMixture& mixture, std::size_t cap) {
  const auto k = static_cast<std::size_t>(mixture.num_classes());
  std::size_t total = 1;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t n = mixture.class_members(c).size();
    if (total > cap / n) {
      throw Error(ErrorKind::Unsupported,
                  "full variational bound needs more than " + std::to_string(cap) +
                      " batches; use matched mode instead");
    }
    total *= n;
  }

  const auto& probs = mixture.class_marginal().probs;
  VariationalAssignment out;
  out.mode = AssignmentMode::Full;
  out.num_classes = k;
  out.slots.resize(total * k);
  out.phi = Matrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(k));

  std::vector<std::size_t> digit(k, 0);
  std::vector<double> share(k);
  for (std::size_t m = 0; m < total; ++m) {
    double product = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t i = mixture.class_members(c)[digit[c]];
      out.slots[m * k + c] = static_cast<std::ptrdiff_t>(i);
      share[c] = mixture.weight(i) / probs[c];
      product *= share[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      // w_i * prod_{c' != c} w_j / P_c'
      double others = 1.0;
      for (std::size_t c2 = 0; c2 < k; ++c2) {
        if (c2 != c) others *= share[c2];
      }
      const std::size_t i = static_cast<std::size_t>(out.slots[m * k + c]);
      out.phi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = mixture.weight(i) * others;
    }
    for (std::size_t c = k; c-- > 0;) {
      if (++digit[c] < mixture.class_members(c).size()) break;
      digit[c] = 0;
    }
  }
  return out;
}

VariationalAssignment build_batches_matched(const LabeledMixture& mixture, const DivergenceMatrices& div) {
  const auto k = static_cast<std::size_t>(mixture.num_classes());
  const auto& anchor = mixture.class_members(0);
  std::size_t batches = 0;
  for (std::size_t c = 0; c < k; ++c) batches = std::max(batches, mixture.class_members(c).size());

  VariationalAssignment out;
  out.mode = AssignmentMode::Matched;
  out.num_classes = k;
  out.slots.assign(batches * k, -1);
  out.phi = Matrix::Zero(static_cast<Eigen::Index>(batches), static_cast<Eigen::Index>(k));

  auto place = [&](std::size_t m, std::size_t c, std::size_t i) {
    out.slots[m * k + c] = static_cast<std::ptrdiff_t>(i);
    out.phi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = mixture.weight(i);
  };
  for (std::size_t r = 0; r < anchor.size(); ++r) place(r, 0, anchor[r]);

  for (std::size_t c = 1; c < k; ++c) {
    const auto& members = mixture.class_members(c);
    Matrix cost(static_cast<Eigen::Index>(anchor.size()), static_cast<Eigen::Index>(members.size()));
    for (std::size_t r = 0; r < anchor.size(); ++r) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        const auto a = static_cast<Eigen::Index>(anchor[r]);
        const auto b = static_cast<Eigen::Index>(members[j]);
        cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = div.kl(a, b) + div.kl(b, a);
      }
    }
    const Matching matching = solve_assignment(cost);
    std::vector<bool> used(members.size(), false);
    for (std::size_t r = 0; r < anchor.size(); ++r) {
      const std::ptrdiff_t j = matching.row_to_col[r];
      if (j < 0) continue;
      place(r, c, members[static_cast<std::size_t>(j)]);
      used[static_cast<std::size_t>(j)] = true;
    }
    std::size_t extra = anchor.size();
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (!used[j]) place(extra++, c, members[j]);
    }
  }
  return out;
}

AssignmentMode auto_assignment_mode(const LabeledMixture& mixture) {
  std::size_t total = 1;
  for (int c = 0; c < mixture.num_classes(); ++c) {
    const std::size_t n = mixture.class_members(static_cast<std::size_t>(c)).size();
    if (total > kAutoMatchedThreshold / n) return AssignmentMode::Matched;
    total *= n;
  }
  return total > kAutoMatchedThreshold ? AssignmentMode::Matched : AssignmentMode::Full;
}

UpperBoundProblem::UpperBoundProblem(const LabeledMixture& mixture, const VariationalAssignment& assignment,
                                     const Matrix& kl)
    : num_batches_(assignment.num_batches()),
      num_classes_(assignment.num_classes),
      h_c_(mixmi::label_entropy(mixture.class_marginal())) {
  if (num_classes_ != static_cast<std::size_t>(mixture.num_classes())) {
    throw Error(ErrorKind::InvalidArgument, "assignment class count does not match mixture");
  }
  if (assignment.phi.rows() != static_cast<Eigen::Index>(num_batches_) ||
      assignment.phi.cols() != static_cast<Eigen::Index>(num_classes_)) {
    throw Error(ErrorKind::InvalidArgument, "phi shape does not match batch layout");
  }
  const std::size_t k = num_classes_;
  e_.assign(num_batches_ * k * k, 0.0);
  live_.assign(num_batches_ * k, 0);
  for (std::size_t m = 0; m < num_batches_; ++m) {
    for (std::size_t c = 0; c < k; ++c) {
      const std::ptrdiff_t i = assignment.slot(m, c);
      if (i < 0) continue;
      if (static_cast<std::size_t>(i) >= mixture.size()) {
        throw Error(ErrorKind::InvalidArgument, "batch slot refers to a missing component");
      }
      live_[m * k + c] = 1;
      for (std::size_t c2 = 0; c2 < k; ++c2) {
        const std::ptrdiff_t j = assignment.slot(m, c2);
        if (j < 0) continue;
        e_[(m * k + c) * k + c2] = i == j ? 1.0 : std::exp(-kl(i, j));
      }
    }
  }
}

double UpperBoundProblem::batch_term(const Matrix& phi, std::size_t m) const {
  const std::size_t k = num_classes_;
  const auto row = static_cast<Eigen::Index>(m);
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double pc = phi(row, static_cast<Eigen::Index>(c));
    if (!live_[m * k + c] || pc <= 0.0) continue;
    double s = 0.0;
    for (std::size_t c2 = 0; c2 < k; ++c2) {
      if (live_[m * k + c2]) s += phi(row, static_cast<Eigen::Index>(c2)) * exp_neg_kl(m, c, c2);
    }
    total += pc * (safe_log(s) - safe_log(pc));
  }
  return total;
}

double UpperBoundProblem::objective(const Matrix& phi) const {
  double f = 0.0;
  for (std::size_t m = 0; m < num_batches_; ++m) f += batch_term(phi, m);
  return h_c_ - f;
}

double UpperBoundProblem::gradient_entry(const Matrix& phi, std::size_t m, std::size_t c) const {
  const std::size_t k = num_classes_;
  const auto row = static_cast<Eigen::Index>(m);
  if (!live_[m * k + c]) return 0.0;
  auto s_of = [&](std::size_t a) {
    double s = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (live_[m * k + b]) s += phi(row, static_cast<Eigen::Index>(b)) * exp_neg_kl(m, a, b);
    }
    return s;
  };
  const double pc = phi(row, static_cast<Eigen::Index>(c));
  const double sc = s_of(c);
  double g = -(safe_log(sc) - safe_log(pc)) - pc / std::max(sc, kPhiFloor) + 1.0;
  for (std::size_t c2 = 0; c2 < k; ++c2) {
    if (c2 == c || !live_[m * k + c2]) continue;
    const double p2 = phi(row, static_cast<Eigen::Index>(c2));
    if (p2 <= 0.0) continue;
    g -= p2 * exp_neg_kl(m, c2, c) / s_of(c2);
  }
  return g;
}

Matrix UpperBoundProblem::gradient(const Matrix& phi) const {
  Matrix g = Matrix::Zero(phi.rows(), phi.cols());
  for (std::size_t m = 0; m < num_batches_; ++m) {
    for (std::size_t c = 0; c < num_classes_; ++c) {
      g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = gradient_entry(phi, m, c);
    }
  }
  return g;
}

Matrix UpperBoundProblem::batch_hessian(const Matrix& phi, std::size_t m) const {
  const std::size_t k = num_classes_;
  const auto row = static_cast<Eigen::Index>(m);
  std::vector<double> p(k), s(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    p[a] = live_[m * k + a] ? std::max(phi(row, static_cast<Eigen::Index>(a)), kPhiFloor) : 0.0;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) s[a] += p[b] * exp_neg_kl(m, a, b);
  }
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    if (!live_[m * k + a]) continue;
    for (std::size_t b = 0; b < k; ++b) {
      if (!live_[m * k + b]) continue;
      double v = 0.0;
      if (a == b) {
        v = (s[a] - p[a]) * (s[a] - p[a]) / (s[a] * s[a] * p[a]);
        for (std::size_t c = 0; c < k; ++c) {
          if (c != a && live_[m * k + c]) {
            const double e = exp_neg_kl(m, c, a);
            v += p[c] * e * e / (s[c] * s[c]);
          }
        }
      } else {
        v = (p[a] - s[a]) / (s[a] * s[a]) * exp_neg_kl(m, a, b) +
            (p[b] - s[b]) / (s[b] * s[b]) * exp_neg_kl(m, b, a);
        // Third-party classes couple a and b through their own S; the term
        // vanishes for two classes.
        for (std::size_t c = 0; c < k; ++c) {
          if (c != a && c != b && live_[m * k + c]) {
            v += p[c] * exp_neg_kl(m, c, a) * exp_neg_kl(m, c, b) / (s[c] * s[c]);
          }
        }
      }
      h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
    }
  }
  return h;
}

double upper_bound_objective(const LabeledMixture& mixture, const VariationalAssignment& assignment,
                             const DivergenceMatrices& div) {
  return UpperBoundProblem(mixture, assignment, div.kl).objective(assignment.phi);
}

namespace {

// The exponentiated-gradient iterates only approach the faces of the simplex
// asymptotically. When the optimum is the one-to-one matching itself, that
// vertex (embedded in the full layout) is checked directly.
void adopt_matched_vertex(const LabeledMixture& mixture, const DivergenceMatrices& div,
                          const UpperBoundProblem& problem, UpperBoundResult& result) {
  VariationalAssignment& a = result.assignment;
  const std::size_t k = a.num_classes;
  if (a.mode != AssignmentMode::Full || k < 2) return;
  const VariationalAssignment matched = build_batches_matched(mixture, div);
  std::set<std::vector<std::ptrdiff_t>> wanted;
  for (std::size_t m = 0; m < matched.num_batches(); ++m) {
    std::vector<std::ptrdiff_t> tuple(matched.slots.begin() + static_cast<std::ptrdiff_t>(m * k),
                                      matched.slots.begin() + static_cast<std::ptrdiff_t>((m + 1) * k));
    if (std::find(tuple.begin(), tuple.end(), -1) != tuple.end()) return;
    wanted.insert(std::move(tuple));
  }
  Matrix vertex = Matrix::Zero(a.phi.rows(), a.phi.cols());
  std::vector<std::ptrdiff_t> tuple(k);
  std::size_t found = 0;
  for (std::size_t m = 0; m < a.num_batches(); ++m) {
    for (std::size_t c = 0; c < k; ++c) tuple[c] = a.slot(m, c);
    if (!wanted.contains(tuple)) continue;
    ++found;
    for (std::size_t c = 0; c < k; ++c) {
      vertex(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) =
          mixture.weight(static_cast<std::size_t>(tuple[c]));
    }
  }
  if (found != wanted.size()) return;
  const double value = problem.objective(vertex);
  if (value < result.value) {
    a.phi = std::move(vertex);
    result.value = value;
    result.objective_trace.push_back(value);
  }
}

}  // namespace

UpperBoundResult minimize_upper_bound(const LabeledMixture& mixture, const VariationalAssignment& start,
                                      const DivergenceMatrices& div, const UpperBoundOptions& options) {
  const double violation = start.constraint_violation(mixture);
  if (!(violation <= kFeasibilityTolerance)) {
    throw Error(ErrorKind::InvalidArgument,
                "starting phi violates the weight constraints (max violation " +
                    std::to_string(violation) + ")");
  }
  if (!(options.tol >= 0.0) || options.max_iter < 0) {
    throw Error(ErrorKind::InvalidArgument, "tolerance and iteration limit must be non-negative");
  }

  const UpperBoundProblem problem(mixture, start, div.kl);
  const std::size_t k = start.num_classes;

  // One block per component: the (batch, class) slots holding it.
  struct Block {
    std::size_t cls;
    std::vector<std::size_t> batches;
    double step = 1.0;
  };
  std::vector<std::ptrdiff_t> block_of(mixture.size(), -1);
  std::vector<Block> blocks;
  for (std::size_t i : mixture.active_components()) {
    block_of[i] = static_cast<std::ptrdiff_t>(blocks.size());
    blocks.push_back(Block{mixture.class_index(i), {}, 1.0});
  }
  for (std::size_t m = 0; m < start.num_batches(); ++m) {
    for (std::size_t c = 0; c < k; ++c) {
      const std::ptrdiff_t i = start.slot(m, c);
      if (i >= 0 && block_of[static_cast<std::size_t>(i)] >= 0) {
        blocks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])].batches.push_back(m);
      }
    }
  }
  std::erase_if(blocks, [](const Block& b) { return b.batches.size() < 2; });

  UpperBoundResult result;
  result.assignment = start;
  Matrix& phi = result.assignment.phi;
  double current = problem.objective(phi);
  result.objective_trace.push_back(current);
  if (blocks.empty()) {
    result.value = current;
    result.converged = true;
    return result;
  }

  std::vector<double> grad, log_phi, proposal;
  Matrix previous;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    previous = phi;
    for (Block& block : blocks) {
      const std::size_t c = block.cls;
      const auto col = static_cast<Eigen::Index>(c);
      const std::size_t n = block.batches.size();
      grad.resize(n);
      log_phi.resize(n);
      proposal.resize(n);

      double local = 0.0;
      double weight = 0.0;
      double mean_grad = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t m = block.batches[t];
        const double p = phi(static_cast<Eigen::Index>(m), col);
        local += problem.batch_term(phi, m);
        grad[t] = problem.gradient_entry(phi, m, c);
        weight += p;
        if (p > 0.0) mean_grad += p * grad[t];
      }
      if (weight <= 0.0) continue;
      mean_grad /= weight;

      bool accepted = false;
      for (int halving = 0; halving < kMaxHalvings && !accepted; ++halving) {
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
          const double p = phi(static_cast<Eigen::Index>(block.batches[t]), col);
          if (p <= 0.0) {
            log_phi[t] = -std::numeric_limits<double>::infinity();
            continue;
          }
          const double delta = std::clamp(-block.step * (grad[t] - mean_grad), -kMaxLogStep, kMaxLogStep);
          log_phi[t] = std::log(p) + delta;
          peak = std::max(peak, log_phi[t]);
        }
        double norm = 0.0;
        for (std::size_t t = 0; t < n; ++t) norm += std::exp(log_phi[t] - peak);
        for (std::size_t t = 0; t < n; ++t) {
          const auto row = static_cast<Eigen::Index>(block.batches[t]);
          proposal[t] = phi(row, col);
          phi(row, col) = weight * std::exp(log_phi[t] - peak) / norm;
        }
        double candidate = 0.0;
        for (std::size_t t = 0; t < n; ++t) candidate += problem.batch_term(phi, block.batches[t]);
        // F is maximized (I_ub = H - F is minimized).
        if (candidate >= local) {
          accepted = true;
          block.step = std::min(2.0 * block.step, kMaxStep);
        } else {
          for (std::size_t t = 0; t < n; ++t) {
            phi(static_cast<Eigen::Index>(block.batches[t]), col) = proposal[t];
          }
          block.step *= 0.5;
        }
      }
      if (!accepted) block.step = 1.0;
    }

    const double next = problem.objective(phi);
    result.iterations = iter + 1;
    if (next > current) {
      // Summation round-off only; keep the previous point.
      phi = previous;
      result.converged = true;
      break;
    }
    result.objective_trace.push_back(next);
    const double decrease = current - next;
    current = next;
    if (decrease <= options.tol * std::max(std::abs(current), 1e-12)) {
      result.converged = true;
      break;
    }
  }
  result.value = current;
  adopt_matched_vertex(mixture, div, problem, result);
  return result;
}

}  // namespace mixmi
