#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/config.hpp"
#include "cli/svg.hpp"
#include "sqznb/budget.hpp"
#include "sqznb/error.hpp"
#include "sqznb/estimate.hpp"
#include "sqznb/interferometer.hpp"
#include "sqznb/squeezing.hpp"

namespace sqznb::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json state_json(const SqueezedState& s) {
  return Json{{"v_plus", s.v_plus()}, {"v_minus", s.v_minus()}};
}

Json chain_json(const LossChain& chain) {
  Json arr = Json::array();
  for (const auto& e : chain.elements()) arr.push_back({{"label", e.label}, {"efficiency", e.efficiency}});
  return arr;
}

const char* averaging_name(PhaseAveraging a) {
  return a == PhaseAveraging::kGaussian ? "gaussian" : "small_angle";
}

PhaseAveraging averaging_from(bool gaussian) {
  return gaussian ? PhaseAveraging::kGaussian : PhaseAveraging::kSmallAngle;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_json(const fs::path& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

void ensure_parent(const std::string& prefix) {
  const auto parent = fs::path(prefix).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

LossChain parse_losses(const std::vector<std::string>& specs) {
  LossChain chain;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--loss expects label=efficiency, got '" + spec + "'");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(spec.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw UsageError("--loss: bad efficiency in '" + spec + "'");
    }
    if (used != spec.size() - eq - 1) throw UsageError("--loss: bad efficiency in '" + spec + "'");
    chain.add(spec.substr(0, eq), value);
  }
  return chain;
}

// ---------------------------------------------------------------- propagate

struct PropagateArgs {
  double inject_db = 0.0;
  double eta = 1.0;
  bool has_eta = false;
  std::vector<std::string> losses;
  double phase_mrad = 0.0;
  bool gaussian = false;
};

int cmd_propagate(const PropagateArgs& a, std::ostream& out) {
  if (a.has_eta == !a.losses.empty()) throw UsageError("give exactly one of --eta or --loss");
  const auto noise = PhaseNoise::from_mrad(a.phase_mrad, averaging_from(a.gaussian));
  Propagation p;
  Json chain = Json::array();
  if (a.has_eta) {
    // A zero efficiency is legal here, unlike inside a LossChain.
    p = propagate(a.inject_db, a.eta, noise);
    chain.push_back({{"label", "eta"}, {"efficiency", a.eta}});
  } else {
    const auto losses = parse_losses(a.losses);
    p = propagate(a.inject_db, losses, noise);
    chain = chain_json(losses);
  }
  emit(out, Json{{"command", "propagate"},
                 {"inject_db", a.inject_db},
                 {"efficiency", p.efficiency},
                 {"chain", chain},
                 {"phase_noise_mrad", a.phase_mrad},
                 {"phase_averaging", averaging_name(noise.averaging())},
                 {"injected", state_json(p.injected)},
                 {"after_loss", state_json(p.after_loss)},
                 {"detected", state_json(p.detected)},
                 {"detected_db", p.detected_db}});
  return kExitOk;
}

// -------------------------------------------------------------- budget/project

std::vector<double> checked(std::vector<double> values, const std::vector<double>& grid, const std::string& what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !(values[i] > 0.0)) {
      throw NumericalError("non-finite " + what + " at " + format_double(grid[i]) + " Hz");
    }
  }
  return values;
}

std::vector<NoiseComponent> load_components(const RunConfig& rc, const std::vector<double>& grid) {
  std::vector<NoiseComponent> out;
  for (const auto& c : rc.components) {
    TabulatedASD table;
    try {
      table = ingest_asd(c.file);
      out.push_back({c.label, checked(resample(table, grid), grid, c.label)});
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    } catch (const RangeError& e) {
      throw ConfigError(std::string("component '") + c.label + "': " + e.what());
    }
  }
  return out;
}

NoiseBudget budget_with(const std::vector<double>& grid, const QuantumNoiseCurve& quantum,
                        const std::vector<NoiseComponent>& components) {
  std::vector<NoiseComponent> all{{"quantum", quantum.asd}};
  all.insert(all.end(), components.begin(), components.end());
  return compose(grid, std::move(all));
}

Json improvement_json(const Improvement& imp, std::pair<double, double> band) {
  Json j{{"band_hz", {band.first, band.second}},
         {"points", imp.points},
         {"median_db", imp.median_db},
         {"max_db", imp.max_db},
         {"max_at_hz", imp.max_at_hz}};
  j["equivalent_power_increase"] =
      imp.max_db >= 0.0 ? Json(equivalent_power_increase(imp.max_db)) : Json(nullptr);
  return j;
}

Json config_json(const RunConfig& rc) {
  const auto& c = rc.interferometer;
  const auto& s = rc.squeezer;
  return Json{{"interferometer",
               {{"label", c.label},
                {"arm_length_m", c.arm_length},
                {"mirror_mass_kg", c.mirror_mass},
                {"arm_power_w", c.arm_power},
                {"wavelength_m", c.wavelength},
                {"cavity_pole_hz", c.cavity_pole}}},
              {"squeezer",
               {{"inject_db", s.inject_db},
                {"efficiency", s.chain.total()},
                {"chain", chain_json(s.chain)},
                {"phase_noise_mrad", s.phase_noise.theta_rms() * 1e3},
                {"phase_averaging", averaging_name(s.phase_noise.averaging())},
                {"angle_policy", s.policy.name()},
                {"angle_rad", s.policy.angle()}}},
              {"grid",
               {{"f_min_hz", rc.grid.f_min},
                {"f_max_hz", rc.grid.f_max},
                {"points", rc.grid.points},
                {"spacing", rc.grid.spacing == GridSpacing::kLog ? "log" : "linear"}}}};
}

std::string file_name(const fs::path& p) { return p.filename().string(); }

struct BudgetArgs {
  std::string config;
  std::string out;
  bool svg = false;
};

int cmd_budget(const BudgetArgs& a, std::ostream& out) {
  const auto rc = load_run_config(a.config);
  const auto grid = rc.grid.build();

  SqueezerSetup reference_setup = rc.squeezer;
  reference_setup.policy = AnglePolicy::none();
  const auto q_ref = quantum_noise_curve(rc.interferometer, reference_setup, grid);
  const auto q_sqz = quantum_noise_curve(rc.interferometer, rc.squeezer, grid);
  const auto components = load_components(rc, grid);
  const auto reference = budget_with(grid, q_ref, components);
  const auto squeezed = budget_with(grid, q_sqz, components);

  ensure_parent(a.out);
  Json files = Json::array();
  auto write_curve = [&](const std::string& suffix, const std::vector<double>& values) {
    const auto path = with_suffix(a.out, suffix);
    write_asd_csv(path, grid, values);
    files.push_back(file_name(path));
  };
  write_curve("-total.csv", squeezed.total);
  write_curve("-reference-total.csv", reference.total);
  write_curve("-quantum.csv", q_sqz.asd);
  write_curve("-quantum-unsqueezed.csv", q_ref.asd);
  for (const auto& c : components) write_curve("-" + c.label + ".csv", c.asd);

  if (a.svg) {
    std::vector<PlotSeries> series{{"total, no squeezing", grid, reference.total, false},
                                   {"total, squeezed", grid, squeezed.total, false},
                                   {"quantum, squeezed", grid, q_sqz.asd, true}};
    for (const auto& c : components) series.push_back({c.label, grid, c.asd, true});
    const auto path = with_suffix(a.out, ".svg");
    write_loglog_svg(path, rc.interferometer.label + " strain noise budget", "Frequency [Hz]",
                     "Strain [1/sqrt(Hz)]", series);
    files.push_back(file_name(path));
  }

  const auto summary_path = with_suffix(a.out, "-summary.json");
  files.push_back(file_name(summary_path));
  const auto predicted = propagate(rc.squeezer.inject_db, rc.squeezer.chain, rc.squeezer.phase_noise);
  Json summary{{"command", "budget"},
               {"config", config_json(rc)},
               {"components", Json::array()},
               {"predicted_detected_db", predicted.detected_db},
               {"improvement", improvement_json(improvement_db(reference, squeezed, rc.band), rc.band)},
               {"secondary_improvement",
                improvement_json(improvement_db(reference, squeezed, rc.secondary_band), rc.secondary_band)},
               {"files", files}};
  for (const auto& c : rc.components) {
    summary["components"].push_back({{"label", c.label}, {"file", c.file.generic_string()}});
  }
  write_json(summary_path, summary);
  emit(out, summary);
  return kExitOk;
}

struct ProjectArgs {
  std::string config;
  std::string out;
  std::string mode = "all";
};

int cmd_project(const ProjectArgs& a, std::ostream& out) {
  const auto rc = load_run_config(a.config);
  const auto grid = rc.grid.build();
  const auto components = load_components(rc, grid);

  const double fixed_angle =
      rc.squeezer.policy.kind() == AnglePolicy::Kind::kFixed ? rc.squeezer.policy.angle() : kPhaseQuadrature;
  struct Mode {
    std::string name;
    AnglePolicy policy;
  };
  const std::vector<Mode> all_modes{{"none", AnglePolicy::none()},
                                    {"fixed", AnglePolicy::fixed(fixed_angle)},
                                    {"fd-optimal", AnglePolicy::fd_optimal()}};
  std::vector<Mode> modes;
  for (const auto& m : all_modes) {
    if (a.mode == "all" || a.mode == m.name) modes.push_back(m);
  }
  if (modes.empty()) throw UsageError("--mode must be none, fixed, fd-optimal or all");

  auto curve_for = [&](const AnglePolicy& policy) {
    SqueezerSetup s = rc.squeezer;
    s.policy = policy;
    return quantum_noise_curve(rc.interferometer, s, grid);
  };
  const auto q_none = curve_for(AnglePolicy::none());
  const auto budget_none = budget_with(grid, q_none, components);

  ensure_parent(a.out);
  Json files = Json::array();
  Json results = Json::object();
  std::vector<PlotSeries> series;
  std::vector<double> fixed_asd, fd_asd;
  for (const auto& m : modes) {
    const auto q = m.policy.kind() == AnglePolicy::Kind::kNone ? q_none : curve_for(m.policy);
    const auto total = budget_with(grid, q, components);
    const auto q_path = with_suffix(a.out, "-quantum-" + m.name + ".csv");
    const auto t_path = with_suffix(a.out, "-total-" + m.name + ".csv");
    write_asd_csv(q_path, grid, q.asd);
    write_asd_csv(t_path, grid, total.total);
    files.push_back(file_name(q_path));
    files.push_back(file_name(t_path));

    double min_ratio = INFINITY, max_ratio = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < rc.band.first || grid[i] > rc.band.second) continue;
      const double r = q_none.asd[i] / q.asd[i];
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
    }
    const auto quantum_only = compose(grid, {{"quantum", q_none.asd}});
    const auto quantum_mode = compose(grid, {{"quantum", q.asd}});
    results[m.name] = Json{
        {"angle_policy", m.policy.name()},
        {"quantum_asd_ratio_in_band", {{"min", min_ratio}, {"max", max_ratio}}},
        {"quantum_improvement", improvement_json(improvement_db(quantum_only, quantum_mode, rc.band), rc.band)},
        {"total_improvement", improvement_json(improvement_db(budget_none, total, rc.band), rc.band)},
        {"asd_at_f_min", q.asd.front()},
        {"asd_at_f_max", q.asd.back()}};
    if (m.name == "fixed") fixed_asd = q.asd;
    if (m.name == "fd-optimal") fd_asd = q.asd;
    series.push_back({"quantum, " + m.name, grid, q.asd, true});
    series.push_back({"total, " + m.name, grid, total.total, false});
  }
  for (const auto& c : components) series.push_back({c.label, grid, c.asd, true});

  const auto svg_path = with_suffix(a.out, ".svg");
  write_loglog_svg(svg_path, rc.interferometer.label + " quantum noise projection", "Frequency [Hz]",
                   "Strain [1/sqrt(Hz)]", series);
  files.push_back(file_name(svg_path));
  const auto summary_path = with_suffix(a.out, "-summary.json");
  files.push_back(file_name(summary_path));

  const auto predicted = propagate(rc.squeezer.inject_db, rc.squeezer.chain, rc.squeezer.phase_noise);
  Json summary{{"command", "project"},
               {"config", config_json(rc)},
               {"predicted_detected_db", predicted.detected_db},
               {"band_hz", {rc.band.first, rc.band.second}},
               {"modes", results}};
  if (!fixed_asd.empty() && !fd_asd.empty()) {
    bool below = true;
    for (std::size_t i = 0; i < grid.size(); ++i) below = below && fd_asd[i] <= fixed_asd[i] * (1.0 + 1e-12);
    summary["fd_optimal_below_fixed"] = below;
  }
  summary["files"] = files;
  write_json(summary_path, summary);
  emit(out, summary);
  return kExitOk;
}

// ----------------------------------------------------------------- estimate

int cmd_fit(double injected, double detected, double phase_mrad, bool gaussian, std::ostream& out) {
  const auto noise = PhaseNoise::from_mrad(phase_mrad, averaging_from(gaussian));
  const auto fit = fit_efficiency(injected, detected, noise);
  emit(out, Json{{"command", "fit"},
                 {"inject_db", injected},
                 {"detected_db", detected},
                 {"phase_noise_mrad", phase_mrad},
                 {"phase_averaging", averaging_name(noise.averaging())},
                 {"efficiency", fit.estimate},
                 {"residual_db", fit.residual},
                 {"iterations", fit.iterations},
                 {"bracket", {fit.bracket.first, fit.bracket.second}}});
  return kExitOk;
}

struct UncertaintyArgs {
  double inject_db = 10.3;
  double inject_sigma_db = 0.2;
  double eta = 0.44;
  double eta_sigma = 0.02;
  double phase_mrad = 37.0;
  double phase_sigma_mrad = 6.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  bool gaussian = false;
};

int cmd_uncertainty(const UncertaintyArgs& a, std::ostream& out) {
  UncertaintyInputs in;
  in.inject_db = {a.inject_db, a.inject_sigma_db};
  in.efficiency = {a.eta, a.eta_sigma};
  in.theta_rms = {a.phase_mrad * 1e-3, a.phase_sigma_mrad * 1e-3};
  in.averaging = averaging_from(a.gaussian);
  const auto r = mc_uncertainty(in, a.samples, a.seed);
  emit(out, Json{{"command", "uncertainty"},
                 {"inputs",
                  {{"inject_db", {{"value", a.inject_db}, {"sigma", a.inject_sigma_db}}},
                   {"efficiency", {{"value", a.eta}, {"sigma", a.eta_sigma}}},
                   {"phase_noise_mrad", {{"value", a.phase_mrad}, {"sigma", a.phase_sigma_mrad}}}}},
                 {"phase_averaging", averaging_name(in.averaging)},
                 {"samples", r.samples},
                 {"seed", r.seed},
                 {"generator", "splitmix64-counter/box-muller"},
                 {"nominal_db", r.nominal_db},
                 {"mean_db", r.mean_db},
                 {"sigma_db", r.sigma_db},
                 {"linear_sigma_db", r.linear_sigma_db},
                 {"clamped", {{"inject_db", r.clamped_inject},
                              {"efficiency", r.clamped_efficiency},
                              {"phase_noise", r.clamped_theta}}}});
  return kExitOk;
}

int cmd_optimize(double eta, double phase_mrad, bool gaussian, std::ostream& out) {
  const auto noise = PhaseNoise::from_mrad(phase_mrad, averaging_from(gaussian));
  const auto best = optimal_inject_db(eta, noise);
  emit(out, Json{{"command", "optimize"},
                 {"efficiency", eta},
                 {"phase_noise_mrad", phase_mrad},
                 {"phase_averaging", averaging_name(noise.averaging())},
                 {"search_range_db", {0.0, kMaxInjectDb}},
                 {"inject_db", best.inject_db},
                 {"detected_db", best.detected_db},
                 {"iterations", best.iterations}});
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Squeezed-light quantum noise budgets for interferometric detectors", "sqznb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sqznb 0.1.0");

  PropagateArgs prop;
  auto* propagate_cmd = app.add_subcommand("propagate", "Degrade injected squeezing through loss and phase noise");
  propagate_cmd->add_option("--inject-db", prop.inject_db, "Squeezing leaving the squeezer [dB]")->required();
  auto* eta_opt = propagate_cmd->add_option("--eta", prop.eta, "Total detection efficiency");
  auto* loss_opt = propagate_cmd->add_option("--loss", prop.losses, "Loss element label=efficiency (repeatable)");
  eta_opt->excludes(loss_opt);
  propagate_cmd->add_option("--phase-mrad", prop.phase_mrad, "RMS phase noise [mrad]");
  propagate_cmd->add_flag("--gaussian-phase", prop.gaussian, "Exact Gaussian phase-noise average");

  BudgetArgs budget;
  auto* budget_cmd = app.add_subcommand("budget", "Noise budget with and without squeezing");
  budget_cmd->add_option("config", budget.config, "Run config (JSON)")->required();
  budget_cmd->add_option("--out", budget.out, "Output file prefix")->required();
  budget_cmd->add_flag("--svg", budget.svg, "Also write <prefix>.svg");

  ProjectArgs project;
  auto* project_cmd = app.add_subcommand("project", "Quantum noise projection for each squeeze-angle policy");
  project_cmd->add_option("config", project.config, "Run config (JSON)")->required();
  project_cmd->add_option("--out", project.out, "Output file prefix")->required();
  project_cmd->add_option("--mode", project.mode, "none, fixed, fd-optimal or all")
      ->check(CLI::IsMember({"none", "fixed", "fd-optimal", "all"}));

  double fit_injected = 0.0, fit_detected = 0.0, fit_phase = 0.0;
  bool fit_gaussian = false;
  auto* fit_cmd = app.add_subcommand("fit", "Detection efficiency from injected and detected squeezing");
  fit_cmd->add_option("--injected", fit_injected, "Injected squeezing [dB]")->required();
  fit_cmd->add_option("--detected", fit_detected, "Detected squeezing [dB]")->required();
  fit_cmd->add_option("--phase-mrad", fit_phase, "RMS phase noise [mrad]");
  fit_cmd->add_flag("--gaussian-phase", fit_gaussian, "Exact Gaussian phase-noise average");

  UncertaintyArgs unc;
  auto* unc_cmd = app.add_subcommand("uncertainty", "Monte Carlo uncertainty of the detected squeezing");
  unc_cmd->add_option("--inject-db", unc.inject_db, "Injected squeezing [dB]")->capture_default_str();
  unc_cmd->add_option("--inject-sigma-db", unc.inject_sigma_db, "1-sigma of injected squeezing [dB]")->capture_default_str();
  unc_cmd->add_option("--eta", unc.eta, "Detection efficiency")->capture_default_str();
  unc_cmd->add_option("--eta-sigma", unc.eta_sigma, "1-sigma of detection efficiency")->capture_default_str();
  unc_cmd->add_option("--phase-mrad", unc.phase_mrad, "RMS phase noise [mrad]")->capture_default_str();
  unc_cmd->add_option("--phase-sigma-mrad", unc.phase_sigma_mrad, "1-sigma of phase noise [mrad]")->capture_default_str();
  unc_cmd->add_option("--mc-samples", unc.samples, "Monte Carlo samples")->capture_default_str();
  unc_cmd->add_option("--seed", unc.seed, "Random seed")->capture_default_str();
  unc_cmd->add_flag("--gaussian-phase", unc.gaussian, "Exact Gaussian phase-noise average");

  double opt_eta = 1.0, opt_phase = 0.0;
  bool opt_gaussian = false;
  auto* opt_cmd = app.add_subcommand("optimize", "Injected squeezing that maximizes detected squeezing");
  opt_cmd->add_option("--eta", opt_eta, "Detection efficiency")->required();
  opt_cmd->add_option("--phase-mrad", opt_phase, "RMS phase noise [mrad]")->required();
  opt_cmd->add_flag("--gaussian-phase", opt_gaussian, "Exact Gaussian phase-noise average");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*propagate_cmd) {
      prop.has_eta = eta_opt->count() > 0;
      return cmd_propagate(prop, out);
    }
    if (*budget_cmd) return cmd_budget(budget, out);
    if (*project_cmd) return cmd_project(project, out);
    if (*fit_cmd) return cmd_fit(fit_injected, fit_detected, fit_phase, fit_gaussian, out);
    if (*unc_cmd) return cmd_uncertainty(unc, out);
    if (*opt_cmd) return cmd_optimize(opt_eta, opt_phase, opt_gaussian, out);
  } catch (const InfeasibleError& e) {
    err << "sqznb: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NoOptimumError& e) {
    err << "sqznb: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "sqznb: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "sqznb: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sqznb::cli
