// mixmi: bounds and estimates of I(x; C) for Gaussian-mixture classification
// problems. Talks to the library through its C interface only.

#include "mixmi/mixmi.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Computation, validation and file errors; maps to exit code 2.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mixmi_status status, const std::string& what) {
  if (status != MIXMI_OK) {
    throw Failure(what + ": " + mixmi_status_string(status) + ": " + mixmi_last_error());
  }
}

struct MixtureDeleter {
  void operator()(mixmi_mixture* m) const { mixmi_mixture_free(m); }
};
using Mixture = std::unique_ptr<mixmi_mixture, MixtureDeleter>;

Mixture load_model(const std::string& path) {
  mixmi_mixture* raw = nullptr;
  check(mixmi_mixture_from_file(path.c_str(), &raw), path);
  return Mixture(raw);
}

/// 12 significant digits, independent of the locale.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  if (ec != std::errc()) throw Failure("cannot format number");
  return std::string(buf.data(), end);
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += cells[k];
  }
  return out + '\n';
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Failure("cannot open " + out + " for writing");
  file << text;
  if (!file) throw Failure("failed writing " + out);
}

struct CommonFlags {
  double alpha = 0.5;
  std::string lb_alpha = "fixed";
  std::string ub_mode = "auto";
  std::string oracle = "none";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int max_iter = 500;
  int grid_points = 401;
  std::string out = "-";

  void attach(CLI::App& app, const std::string& default_oracle) {
    oracle = default_oracle;
    app.add_option("--alpha", alpha, "Chernoff alpha for the estimators and the fixed lower bound")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--lb-alpha", lb_alpha, "Lower-bound alpha: 'fixed' uses --alpha, 'auto' searches per class")
        ->capture_default_str()
        ->check(CLI::IsMember({"fixed", "auto"}));
    app.add_option("--ub-mode", ub_mode, "Variational upper-bound batches: full, matched or auto")
        ->capture_default_str()
        ->check(CLI::IsMember({"full", "matched", "auto"}));
    app.add_option("--oracle", oracle, "Reference value: mc, quadrature (d <= 2) or none")
        ->capture_default_str()
        ->check(CLI::IsMember({"mc", "quadrature", "none"}));
    app.add_option("--samples", samples, "Monte Carlo sample count")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--tol", tol, "Relative-decrease stopping tolerance of the upper-bound optimizer")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--max-iter", max_iter, "Iteration limit of the upper-bound optimizer")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--grid-points", grid_points, "Quadrature points per axis")
        ->capture_default_str()
        ->check(CLI::Range(3, 100000));
    app.add_option("--out", out, "Output file, or - for stdout")->capture_default_str();
  }

  mixmi_options options() const {
    mixmi_options o;
    mixmi_options_default(&o);
    o.alpha = alpha;
    o.auto_lower_alpha = lb_alpha == "auto";
    o.ub_mode = ub_mode == "full" ? MIXMI_UB_FULL : ub_mode == "matched" ? MIXMI_UB_MATCHED : MIXMI_UB_AUTO;
    o.oracle = oracle == "mc" ? MIXMI_ORACLE_MC : oracle == "quadrature" ? MIXMI_ORACLE_QUADRATURE : MIXMI_ORACLE_NONE;
    o.samples = samples;
    o.seed = seed;
    o.tol = tol;
    o.max_iter = max_iter;
    o.grid_points = grid_points;
    return o;
  }
};

const std::vector<std::string> kValueColumns = {"H_C",     "I_lb_Calpha", "I_ub_KL", "I_hat_KL", "I_hat_Calpha",
                                                "I_hat_D", "I_lb_2H",     "I_ub_2H", "I_mc",     "I_mc_se",
                                                "Pe_fano", "Pe_hu"};

std::vector<std::string> value_cells(const mixmi_report& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {num(r.h_c),
          num(r.i_lb_calpha),
          num(r.i_ub_kl),
          num(r.i_hat_kl),
          num(r.i_hat_calpha),
          num(r.i_hat_d),
          num(r.i_lb_2h),
          num(r.i_ub_2h),
          num(r.has_oracle ? r.oracle_value : nan),
          num(r.has_oracle ? r.oracle_std_error : nan),
          num(r.has_pe ? r.pe_fano : nan),
          num(r.has_pe ? r.pe_hu : nan)};
}

const char* mode_name(mixmi_ub_mode m) {
  switch (m) {
    case MIXMI_UB_FULL: return "full";
    case MIXMI_UB_MATCHED: return "matched";
    default: return "auto";
  }
}

std::string report_json(const mixmi_report& r, const CommonFlags& flags, const std::vector<double>& alphas,
                        const std::string& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["model"] = model;
  ordered_json values;
  values["H_C"] = r.h_c;
  values["I_lb_Calpha"] = r.i_lb_calpha;
  values["I_ub_KL"] = r.i_ub_kl;
  values["I_hat_KL"] = r.i_hat_kl;
  values["I_hat_Calpha"] = r.i_hat_calpha;
  values["I_hat_D"] = r.i_hat_d;
  values["I_lb_2H"] = r.i_lb_2h;
  values["I_ub_2H"] = r.i_ub_2h;
  doc["nats"] = values;
  if (r.has_oracle) {
    doc["oracle"] = {{"kind", flags.oracle},
                     {"value", r.oracle_value},
                     {"std_error", r.oracle_std_error},
                     {"samples_or_grid", r.oracle_samples}};
  }
  if (r.has_bayes_error) doc["bayes_error"] = r.bayes_error;
  if (r.has_pe) doc["pe"] = {{"fano_lower_at_I_ub_KL", r.pe_fano}, {"hu_upper_at_I_lb_Calpha", r.pe_hu}};
  doc["upper_bound"] = {{"mode", mode_name(r.ub_mode_used)},
                        {"iterations", r.ub_iterations},
                        {"converged", r.ub_converged != 0}};
  doc["lower_bound_alphas"] = alphas;
  doc["timings_ms"] = {{"divergences", r.time_divergences_ms},
                       {"estimators", r.time_estimators_ms},
                       {"lower_bound", r.time_lower_bound_ms},
                       {"upper_bound", r.time_upper_bound_ms},
                       {"oracle", r.time_oracle_ms}};
  doc["config"] = {{"alpha", flags.alpha},       {"lb_alpha", flags.lb_alpha},       {"ub_mode", flags.ub_mode},
                   {"oracle", flags.oracle},     {"samples", flags.samples},         {"seed", flags.seed},
                   {"tol", flags.tol},           {"max_iter", flags.max_iter},       {"grid_points", flags.grid_points}};
  return doc.dump(2) + "\n";
}

// ---- report -------------------------------------------------------------

struct ReportCommand {
  CommonFlags flags;
  std::string model;
  std::string format = "json";
  std::string dump_divergences;
  std::string dump_phi;
  std::string dump_trace;

  void attach(CLI::App& app) {
    app.add_option("model", model, "Mixture JSON file")->required();
    flags.attach(app, "none");
    app.add_option("--format", format, "Output format: json (with timings) or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--dump-divergences", dump_divergences,
                   "Write the KL, Chernoff and combined matrices to PREFIXkl.csv, PREFIXchernoff.csv, PREFIXcombined.csv");
    app.add_option("--dump-phi", dump_phi, "Write the optimized variational parameters as CSV");
    app.add_option("--dump-trace", dump_trace, "Write the upper-bound objective trace as CSV");
  }

  void run() const {
    Mixture m = load_model(model);
    const mixmi_options opt = flags.options();
    mixmi_report r;
    check(mixmi_compute_report(m.get(), &opt, &r), "report");
    std::vector<double> alphas(mixmi_mixture_num_classes(m.get()));
    check(mixmi_lower_bound_alphas(m.get(), &opt, alphas.data(), alphas.size()), "lower-bound alphas");

    std::string text;
    if (format == "json") {
      text = report_json(r, flags, alphas, model);
    } else {
      text = join(kValueColumns) + join(value_cells(r));
    }
    if (!dump_divergences.empty()) {
      check(mixmi_write_divergence_csv(m.get(), flags.alpha, dump_divergences.c_str()), "divergence dump");
    }
    if (!dump_phi.empty() || !dump_trace.empty()) {
      check(mixmi_write_upper_bound_csv(m.get(), &opt, dump_phi.empty() ? nullptr : dump_phi.c_str(),
                                        dump_trace.empty() ? nullptr : dump_trace.c_str()),
            "upper-bound dump");
    }
    emit(text, flags.out);
  }
};

// ---- sweep --------------------------------------------------------------

struct SweepCommand {
  CommonFlags flags;
  std::string config;
  int scenario = 1;
  int nc = 20;
  int sigma_count = 30;
  double sigma_min = 0.01;
  double sigma_max = 10.0;
  std::vector<double> sigma_list;
  bool paper_scale = false;
  std::uint64_t scenario_seed = 1;
  double boundary_length = 10.0;
  double offset = 0.5;
  int group_count = 5;
  double one_group_spread = 1.0;
  double group_spread = 0.5;

  CLI::App* app = nullptr;

  void attach(CLI::App& a) {
    app = &a;
    flags.attach(a, "mc");
    a.add_option("--config", config,
                 "Scenario JSON (keys: scenario, components_per_class, sigma, seed, boundary_length, offset, "
                 "group_count, one_group_spread, group_spread); explicit flags override it");
    a.add_option("--scenario", scenario, "1 = uniform boundary, 2 = one group, 3 = multiple groups")
        ->capture_default_str()
        ->check(CLI::Range(1, 3));
    a.add_option("--nc", nc, "Components per class")->capture_default_str()->check(CLI::PositiveNumber);
    a.add_option("--sigmas", sigma_count, "Number of log-spaced sigma values")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    a.add_option("--sigma-min", sigma_min, "Smallest sigma")->capture_default_str()->check(CLI::PositiveNumber);
    a.add_option("--sigma-max", sigma_max, "Largest sigma")->capture_default_str()->check(CLI::PositiveNumber);
    a.add_option("--sigma-list", sigma_list, "Explicit sigma values (comma separated); overrides the log grid")
        ->delimiter(',');
    a.add_flag("--paper-scale", paper_scale, "100 components per class and 10^6 Monte Carlo samples");
    a.add_option("--scenario-seed", scenario_seed, "Seed for the randomly placed scenario centers")
        ->capture_default_str();
    a.add_option("--boundary-length", boundary_length, "Length of the class boundary")->capture_default_str();
    a.add_option("--offset", offset, "Horizontal distance of the centers from the boundary")->capture_default_str();
    a.add_option("--group-count", group_count, "Number of clusters in scenario 3")->capture_default_str();
    a.add_option("--one-group-spread", one_group_spread, "Center spread in scenario 2")->capture_default_str();
    a.add_option("--group-spread", group_spread, "Center spread within a cluster in scenario 3")
        ->capture_default_str();
  }

  bool given(const std::string& name) const { return app->count(name) > 0; }

  mixmi_scenario_spec spec() const {
    mixmi_scenario_spec s;
    mixmi_scenario_spec_default(&s);
    if (!config.empty()) {
      std::ifstream in(config, std::ios::binary);
      if (!in) throw Failure("cannot open " + config);
      std::stringstream text;
      text << in.rdbuf();
      check(mixmi_scenario_spec_from_json(text.str().c_str(), &s), config);
    }
    const bool from_file = !config.empty();
    auto pick = [&](const std::string& flag) { return !from_file || given(flag); };
    if (pick("--scenario")) s.scenario = static_cast<mixmi_scenario_id>(scenario);
    if (pick("--nc")) s.components_per_class = nc;
    if (paper_scale && !given("--nc")) s.components_per_class = 100;
    if (pick("--scenario-seed")) s.seed = scenario_seed;
    if (pick("--boundary-length")) s.boundary_length = boundary_length;
    if (pick("--offset")) s.offset = offset;
    if (pick("--group-count")) s.group_count = group_count;
    if (pick("--one-group-spread")) s.one_group_spread = one_group_spread;
    if (pick("--group-spread")) s.group_spread = group_spread;
    return s;
  }

  void run() const {
    const mixmi_scenario_spec s = spec();
    std::vector<double> sigmas = sigma_list;
    if (sigmas.empty()) {
      if (sigma_max < sigma_min) throw Failure("--sigma-max must not be below --sigma-min");
      sigmas.resize(static_cast<std::size_t>(sigma_count));
      check(mixmi_log_spaced(sigma_min, sigma_max, sigmas.size(), sigmas.data()), "sigma grid");
    }
    mixmi_options opt = flags.options();
    if (paper_scale && !given("--samples")) opt.samples = 1000000;

    std::vector<mixmi_report> rows(sigmas.size());
    check(mixmi_sigma_sweep(&s, sigmas.data(), sigmas.size(), &opt, rows.data()), "sweep");

    std::vector<std::string> header{"sigma"};
    header.insert(header.end(), kValueColumns.begin(), kValueColumns.end());
    std::string text = join(header);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<std::string> cells{num(sigmas[k])};
      const auto values = value_cells(rows[k]);
      cells.insert(cells.end(), values.begin(), values.end());
      text += join(cells);
    }
    emit(text, flags.out);
  }
};

// ---- pe -----------------------------------------------------------------

const std::vector<std::string> kMiColumns = {"I_lb_Calpha", "I_ub_KL", "I_hat_KL", "I_hat_Calpha",
                                             "I_hat_D",     "I_lb_2H", "I_ub_2H",  "I_mc"};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, std::size_t line) {
  if (text == "nan" || text.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Failure("line " + std::to_string(line) + ": '" + text + "' is not a number");
  }
  return v;
}

struct PeCommand {
  CommonFlags flags;
  std::string input;
  bool fano = false;

  void attach(CLI::App& app) {
    app.add_option("input", input, "Mixture JSON file or a CSV written by 'sweep'")->required();
    app.add_flag("--fano", fano, "Also emit the Fano lower bound for every column");
    flags.attach(app, "none");
  }

  static bool is_csv(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  }

  std::vector<std::string> header(bool with_sigma) const {
    std::vector<std::string> h;
    if (with_sigma) h.emplace_back("sigma");
    for (const auto& c : kMiColumns) h.push_back("Pe_hu_" + c);
    if (fano) {
      for (const auto& c : kMiColumns) h.push_back("Pe_fano_" + c);
    }
    return h;
  }

  std::vector<std::string> pe_cells(const std::array<double, 2>& probs, const std::vector<double>& mi) const {
    std::vector<std::string> hu, fa;
    for (double v : mi) {
      if (std::isnan(v)) {
        hu.emplace_back("nan");
        fa.emplace_back("nan");
        continue;
      }
      double pe = 0.0;
      check(mixmi_pe_hu_upper(v, probs.data(), 2, &pe), "Hu bound");
      hu.push_back(num(pe));
      if (fano) {
        check(mixmi_pe_fano_lower(v, probs.data(), 2, &pe), "Fano bound");
        fa.push_back(num(pe));
      }
    }
    if (fano) hu.insert(hu.end(), fa.begin(), fa.end());
    return hu;
  }

  std::string from_csv() const {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw Failure("cannot open " + input);
    std::string line;
    if (!std::getline(in, line)) throw Failure(input + ": empty file");
    const auto names = split_csv_line(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = k;
    for (const std::string& need : {std::string("H_C")}) {
      if (!index.contains(need)) throw Failure(input + ": missing column " + need);
    }
    const bool with_sigma = index.contains("sigma");
    std::string text = join(header(with_sigma));
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != names.size()) {
        throw Failure(input + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " fields, expected " + std::to_string(names.size()));
      }
      const double h_bits = parse_number(cells[index["H_C"]], line_no) / std::log(2.0);
      if (!(h_bits >= 0.0 && h_bits <= 1.0 + 1e-12)) {
        throw Failure(input + ": line " + std::to_string(line_no) + ": H_C is not a binary label entropy");
      }
      double p_min = 0.0;
      check(mixmi_inverse_binary_entropy(std::min(h_bits, 1.0), &p_min), "class prior");
      const std::array<double, 2> probs{p_min, 1.0 - p_min};
      std::vector<double> mi;
      for (const auto& c : kMiColumns) {
        mi.push_back(index.contains(c) ? parse_number(cells[index[c]], line_no)
                                       : std::numeric_limits<double>::quiet_NaN());
      }
      std::vector<std::string> row;
      if (with_sigma) row.push_back(cells[index["sigma"]]);
      const auto pe = pe_cells(probs, mi);
      row.insert(row.end(), pe.begin(), pe.end());
      text += join(row);
    }
    return text;
  }

  std::string from_model() const {
    Mixture m = load_model(input);
    if (mixmi_mixture_num_classes(m.get()) != 2) {
      throw Failure("error-probability bounds need exactly 2 classes");
    }
    std::array<double, 2> probs{};
    check(mixmi_mixture_class_probs(m.get(), probs.data(), 2), "class probabilities");
    const mixmi_options opt = flags.options();
    mixmi_report r;
    check(mixmi_compute_report(m.get(), &opt, &r), "report");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> mi{r.i_lb_calpha, r.i_ub_kl, r.i_hat_kl, r.i_hat_calpha,
                                 r.i_hat_d,     r.i_lb_2h, r.i_ub_2h,  r.has_oracle ? r.oracle_value : nan};
    return join(header(false)) + join(pe_cells(probs, mi));
  }

  void run() const { emit(is_csv(input) ? from_csv() : from_model(), flags.out); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds and estimates of the mutual information between Gaussian-mixture data and class labels.\n"
               "All information quantities are in nats."};
  app.set_version_flag("--version", std::string(mixmi_version()));
  app.require_subcommand(1);

  ReportCommand report;
  report.attach(*app.add_subcommand("report", "Every bound and estimate for one mixture file"));
  SweepCommand sweep;
  sweep.attach(*app.add_subcommand("sweep", "Scenario sweep over sigma, written as CSV"));
  PeCommand pe;
  pe.attach(*app.add_subcommand("pe", "Error-probability bounds from a mixture file or a sweep CSV"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("report")) report.run();
    else if (app.got_subcommand("sweep")) sweep.run();
    else pe.run();
  } catch (const std::exception& e) {
    std::cerr << "mixmi: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
