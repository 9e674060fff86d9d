#include "mixmi/scenarios.hpp"

#include "mixmi/error.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <string>

namespace mixmi {

void ScenarioSpec::validate() const {
  if (id != ScenarioId::UniformBoundary && id != ScenarioId::OneGroup && id != ScenarioId::MultiGroup) {
    throw Error(ErrorKind::InvalidArgument, "unknown scenario id");
  }
  if (components_per_class < 1) throw Error(ErrorKind::InvalidArgument, "components_per_class must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::InvalidArgument, "sigma must be > 0");
  if (!(boundary_length >= 0.0)) throw Error(ErrorKind::InvalidArgument, "boundary_length must be >= 0");
  if (!std::isfinite(offset)) throw Error(ErrorKind::InvalidArgument, "offset must be finite");
  if (group_count < 1) throw Error(ErrorKind::InvalidArgument, "group_count must be >= 1");
  if (!(one_group_spread >= 0.0) || !(group_spread >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "spreads must be >= 0");
  }
}

namespace {

double evenly(double length, int index, int count) {
  return count == 1 ? 0.5 * length : length * index / (count - 1);
}

}  // namespace

LabeledMixture generate(const ScenarioSpec& spec) {
  spec.validate();
  const int n = spec.components_per_class;
  Rng rng(spec.seed);
  std::normal_distribution<double> normal;

  std::vector<GaussianComponent> components;
  std::vector<double> weights;
  std::vector<int> labels;
  const Matrix cov = spec.sigma * spec.sigma * Matrix::Identity(2, 2);
  const double weight = 1.0 / (2.0 * n);

  for (int label = 1; label <= 2; ++label) {
    const double x0 = label == 1 ? -spec.offset : spec.offset;
    for (int k = 0; k < n; ++k) {
      Vector mean(2);
      switch (spec.id) {
        case ScenarioId::UniformBoundary:
          mean << x0, evenly(spec.boundary_length, k, n);
          break;
        case ScenarioId::OneGroup: {
          const double dx = normal(rng);
          const double dy = normal(rng);
          mean << x0 + spec.one_group_spread * dx, 0.5 * spec.boundary_length + spec.one_group_spread * dy;
          break;
        }
        case ScenarioId::MultiGroup: {
          const double y0 = evenly(spec.boundary_length, k % spec.group_count, spec.group_count);
          const double dx = normal(rng);
          const double dy = normal(rng);
          mean << x0 + spec.group_spread * dx, y0 + spec.group_spread * dy;
          break;
        }
      }
      components.emplace_back(std::move(mean), cov);
      weights.push_back(weight);
      labels.push_back(label);
    }
  }
  return LabeledMixture(std::move(components), std::move(weights), std::move(labels), 2);
}

ScenarioSpec scenario_from_json(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "scenario config must be a JSON object");

  ScenarioSpec spec;
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw Error(ErrorKind::Parse, "'" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw Error(ErrorKind::Parse, "'" + key + "' must be an integer");
    return v.get<long long>();
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario") {
      if (value.is_string()) {
        const std::string name = value.get<std::string>();
        if (name == "uniform_boundary") spec.id = ScenarioId::UniformBoundary;
        else if (name == "one_group") spec.id = ScenarioId::OneGroup;
        else if (name == "multi_group") spec.id = ScenarioId::MultiGroup;
        else throw Error(ErrorKind::Parse, "unknown scenario name '" + name + "'");
      } else {
        const long long id = integer(value, key);
        if (id < 1 || id > 3) throw Error(ErrorKind::Parse, "'scenario' must be 1, 2 or 3");
        spec.id = static_cast<ScenarioId>(id);
      }
    } else if (key == "components_per_class") {
      spec.components_per_class = static_cast<int>(integer(value, key));
    } else if (key == "sigma") {
      spec.sigma = number(value, key);
    } else if (key == "seed") {
      const long long seed = integer(value, key);
      if (seed < 0) throw Error(ErrorKind::Parse, "'seed' must be non-negative");
      spec.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "boundary_length") {
      spec.boundary_length = number(value, key);
    } else if (key == "offset") {
      spec.offset = number(value, key);
    } else if (key == "group_count") {
      spec.group_count = static_cast<int>(integer(value, key));
    } else if (key == "one_group_spread") {
      spec.one_group_spread = number(value, key);
    } else if (key == "group_spread") {
      spec.group_spread = number(value, key);
    } else {
      throw Error(ErrorKind::Parse, "unknown scenario key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorKind::InvalidArgument, "log spacing needs n >= 1 and 0 < lo <= hi");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = n == 1 ? lo : std::exp(a + (b - a) * k / (n - 1));
  }
  out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<MiReport> sigma_sweep(const ScenarioSpec& templ, std::span<const double> sigmas,
                                  const ReportOptions& options) {
  for (double s : sigmas) {
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "every sigma must be > 0");
  }
  std::vector<MiReport> rows(sigmas.size());
  detail::parallel_for(sigmas.size(), [&](std::size_t r) {
    ScenarioSpec spec = templ;
    spec.sigma = sigmas[r];
    rows[r] = compute_report(generate(spec), options);
  });
  return rows;
}

}  // namespace mixmi
