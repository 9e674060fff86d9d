#include "mixmi/mixture.hpp"

#include "mixmi/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mixmi {

using nlohmann::json;

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

double label_entropy(const ClassMarginal& marginal) {
  double h = 0.0;
  for (double p : marginal.probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

LabeledMixture::LabeledMixture(std::vector<GaussianComponent> components, std::vector<double> weights,
                               std::vector<int> labels, int num_classes)
    : components_(std::move(components)),
      weights_(std::move(weights)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (components_.empty()) throw Error(ErrorKind::Validation, "mixture has no components");
  if (weights_.size() != components_.size() || labels_.size() != components_.size()) {
    throw Error(ErrorKind::Validation, "components, weights and labels differ in length");
  }
  if (num_classes_ < 1) throw Error(ErrorKind::Validation, "num_classes must be at least 1");

  const Eigen::Index d = components_.front().dim();
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const std::string where = "component " + std::to_string(i) + ": ";
    if (components_[i].dim() != d) {
      throw Error(ErrorKind::Validation, where + "dimension differs from component 0");
    }
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorKind::Validation, where + "weight must be finite and non-negative");
    }
    if (labels_[i] < 1 || labels_[i] > num_classes_) {
      throw Error(ErrorKind::Validation, where + "label " + std::to_string(labels_[i]) +
                                             " outside [1, " + std::to_string(num_classes_) + "]");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total << ", expected 1";
    throw Error(ErrorKind::Validation, msg.str());
  }

  members_.resize(static_cast<std::size_t>(num_classes_));
  marginal_.probs.assign(static_cast<std::size_t>(num_classes_), 0.0);
  log_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    log_weights_[i] = weights_[i] > 0.0 ? std::log(weights_[i]) : -std::numeric_limits<double>::infinity();
    if (weights_[i] > 0.0) {
      active_.push_back(i);
      members_[class_index(i)].push_back(i);
      marginal_.probs[class_index(i)] += weights_[i];
    }
  }
  for (int c = 0; c < num_classes_; ++c) {
    if (members_[static_cast<std::size_t>(c)].empty()) {
      throw Error(ErrorKind::Validation,
                  "class " + std::to_string(c + 1) + " has no component with nonzero weight");
    }
  }
}

void LabeledMixture::weighted_log_densities(const double* x, std::span<double> out) const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    out[i] = weights_[i] > 0.0 ? log_weights_[i] + components_[i].log_density_unchecked(x)
                               : -std::numeric_limits<double>::infinity();
  }
}

double LabeledMixture::log_density(const Eigen::Ref<const Vector>& x, std::optional<int> label) const {
  if (x.size() != dim()) {
    throw Error(ErrorKind::InvalidArgument, "point dimension " + std::to_string(x.size()) +
                                                " does not match mixture dimension " +
                                                std::to_string(dim()));
  }
  if (label && (*label < 1 || *label > num_classes_)) {
    throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(*label) + " out of range");
  }
  const Vector contiguous = x;
  std::vector<double> terms(components_.size());
  weighted_log_densities(contiguous.data(), terms);
  if (label) {
    const auto& members = members_[static_cast<std::size_t>(*label - 1)];
    std::vector<double> subset;
    subset.reserve(members.size());
    for (std::size_t i : members) subset.push_back(terms[i]);
    return log_sum_exp(subset);
  }
  return log_sum_exp(terms);
}

namespace {

Vector parse_vector(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) {
    throw Error(ErrorKind::Parse, where + "mean must be a non-empty array of numbers");
  }
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_number()) throw Error(ErrorKind::Parse, where + "mean entries must be numbers");
    v[static_cast<Eigen::Index>(k)] = node[k].get<double>();
  }
  return v;
}

Matrix parse_matrix(const json& node, Eigen::Index d, const std::string& where) {
  if (!node.is_array() || static_cast<Eigen::Index>(node.size()) != d) {
    throw Error(ErrorKind::Parse, where + "cov must be a " + std::to_string(d) + "x" +
                                      std::to_string(d) + " array of arrays");
  }
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = node[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw Error(ErrorKind::Parse, where + "cov row " + std::to_string(r) + " has wrong length");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorKind::Parse, where + "cov entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

LabeledMixture load_mixture(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "mixture document must be a JSON object");
  if (!doc.contains("num_classes") || !doc["num_classes"].is_number_integer()) {
    throw Error(ErrorKind::Parse, "missing integer field 'num_classes'");
  }
  if (!doc.contains("components") || !doc["components"].is_array()) {
    throw Error(ErrorKind::Parse, "missing array field 'components'");
  }
  const int num_classes = doc["num_classes"].get<int>();

  std::vector<GaussianComponent> components;
  std::vector<double> weights;
  std::vector<int> labels;
  const json& items = doc["components"];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "component " + std::to_string(i) + ": ";
    const json& item = items[i];
    if (!item.is_object()) throw Error(ErrorKind::Parse, where + "must be an object");
    if (!item.contains("weight") || !item["weight"].is_number()) {
      throw Error(ErrorKind::Parse, where + "missing numeric 'weight'");
    }
    if (!item.contains("label") || !item["label"].is_number_integer()) {
      throw Error(ErrorKind::Parse, where + "missing integer 'label'");
    }
    if (!item.contains("mean")) throw Error(ErrorKind::Parse, where + "missing 'mean'");
    if (!item.contains("cov")) throw Error(ErrorKind::Parse, where + "missing 'cov'");
    Vector mean = parse_vector(item["mean"], where);
    Matrix cov = parse_matrix(item["cov"], mean.size(), where);
    try {
      components.emplace_back(std::move(mean), std::move(cov));
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    weights.push_back(item["weight"].get<double>());
    labels.push_back(item["label"].get<int>());
  }
  return LabeledMixture(std::move(components), std::move(weights), std::move(labels), num_classes);
}

LabeledMixture load_mixture_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_mixture(buffer.str());
}

std::string save_mixture(const LabeledMixture& mixture) {
  json doc;
  doc["num_classes"] = mixture.num_classes();
  json items = json::array();
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    const GaussianComponent& g = mixture.component(i);
    json mean = json::array();
    for (Eigen::Index k = 0; k < g.dim(); ++k) mean.push_back(g.mean()[k]);
    json cov = json::array();
    for (Eigen::Index r = 0; r < g.dim(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < g.dim(); ++c) row.push_back(g.cov()(r, c));
      cov.push_back(std::move(row));
    }
    items.push_back({{"weight", mixture.weight(i)},
                     {"label", mixture.label(i)},
                     {"mean", std::move(mean)},
                     {"cov", std::move(cov)}});
  }
  doc["components"] = std::move(items);
  return doc.dump(2);
}

}  // namespace mixmi
