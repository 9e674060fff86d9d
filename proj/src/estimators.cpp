#include "mixmi/estimators.hpp"

#include <cmath>
#include <vector>

namespace mixmi {

double pairwise_ratio_mi(const LabeledMixture& mixture, const Matrix& numerator_div,
                         const Matrix& denominator_div) {
  const auto& active = mixture.active_components();
  std::vector<double> all_terms;
  std::vector<double> class_terms;
  all_terms.reserve(active.size());

  double penalty = 0.0;
  for (std::size_t i : active) {
    const auto r = static_cast<Eigen::Index>(i);
    all_terms.clear();
    for (std::size_t j : active) {
      all_terms.push_back(std::log(mixture.weight(j)) - numerator_div(r, static_cast<Eigen::Index>(j)));
    }
    class_terms.clear();
    for (std::size_t k : mixture.class_members(mixture.class_index(i))) {
      class_terms.push_back(std::log(mixture.weight(k)) - denominator_div(r, static_cast<Eigen::Index>(k)));
    }
    penalty += mixture.weight(i) * (log_sum_exp(all_terms) - log_sum_exp(class_terms));
  }
  return label_entropy(mixture.class_marginal()) - penalty;
}

MiEstimate estimate_mi(const LabeledMixture& mixture, const DivergenceMatrices& div,
                       EstimatorMethod method) {
  const Matrix* d = &div.kl;
  if (method == EstimatorMethod::Chernoff) d = &div.chernoff;
  if (method == EstimatorMethod::Combined) d = &div.combined;
  return MiEstimate{pairwise_ratio_mi(mixture, *d, *d), method, div.alpha};
}

}  // namespace mixmi
