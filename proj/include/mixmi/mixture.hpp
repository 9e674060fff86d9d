#pragma once

#include "mixmi/gaussian.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixmi {

inline constexpr double kWeightSumTolerance = 1e-10;

/// Class probabilities P_c, indexed by zero-based class index.
struct ClassMarginal {
  std::vector<double> probs;

  std::size_t num_classes() const { return probs.size(); }
};

/// Entropy of the class label in nats, with 0 ln 0 = 0.
double label_entropy(const ClassMarginal& marginal);

/// Weighted, class-labelled Gaussian mixture. Labels are 1-based, matching
/// the serialized form; class_index() gives the 0-based index used for
/// vectors such as ClassMarginal::probs.
///
/// Zero-weight components are kept for round-tripping but are not "active":
/// every bound and oracle skips them.
class LabeledMixture {
 public:
  LabeledMixture(std::vector<GaussianComponent> components, std::vector<double> weights,
                 std::vector<int> labels, int num_classes);

  std::size_t size() const { return components_.size(); }
  Eigen::Index dim() const { return components_.front().dim(); }
  int num_classes() const { return num_classes_; }

  const GaussianComponent& component(std::size_t i) const { return components_[i]; }
  const std::vector<GaussianComponent>& components() const { return components_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t class_index(std::size_t i) const { return static_cast<std::size_t>(labels_[i] - 1); }
  bool active(std::size_t i) const { return weights_[i] > 0.0; }

  /// Active component indices, ascending.
  const std::vector<std::size_t>& active_components() const { return active_; }
  /// Active component indices of zero-based class `c`, ascending.
  const std::vector<std::size_t>& class_members(std::size_t c) const { return members_[c]; }

  const ClassMarginal& class_marginal() const { return marginal_; }

  /// ln pr(x), or ln pr(x, c) when `label` is given (not renormalized by P_c).
  double log_density(const Eigen::Ref<const Vector>& x, std::optional<int> label = {}) const;

  /// ln(w_i) + ln pr_i(x) for every component (-inf for zero weights).
  /// `x` holds dim() values; `out` holds size() values.
  void weighted_log_densities(const double* x, std::span<double> out) const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<int> labels_;
  int num_classes_;
  std::vector<std::size_t> active_;
  std::vector<std::vector<std::size_t>> members_;
  ClassMarginal marginal_;
};

/// Parses {"num_classes": K, "components": [{"weight", "label", "mean", "cov"}]}.
LabeledMixture load_mixture(std::string_view json_text);
LabeledMixture load_mixture_file(const std::filesystem::path& path);
std::string save_mixture(const LabeledMixture& mixture);

/// ln(sum exp(v)), -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

}  // namespace mixmi
