#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqznb/error.hpp"

namespace sqznb::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

std::pair<double, double> band(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + " must be a [low, high] pair of numbers");
  }
  const double lo = v[0].get<double>();
  const double hi = v[1].get<double>();
  if (!(lo > 0.0 && lo < hi)) throw ConfigError(where + " needs 0 < low < high");
  return {lo, hi};
}

InterferometerConfig parse_interferometer(const json& j) {
  const std::string where = "interferometer";
  reject_unknown(j, where,
                 {"label", "arm_length_m", "mirror_mass_kg", "arm_power_w", "wavelength_m",
                  "cavity_pole_hz", "finesse", "bounces"});
  InterferometerConfig c;
  c.label = j.value("label", std::string("ifo"));
  c.arm_length = number(j, where, "arm_length_m");
  c.mirror_mass = number(j, where, "mirror_mass_kg");
  c.arm_power = number(j, where, "arm_power_w");
  c.wavelength = number_or(j, where, "wavelength_m", 1064e-9);

  const int pole_sources = j.contains("cavity_pole_hz") + j.contains("finesse") + j.contains("bounces");
  if (pole_sources != 1) {
    throw ConfigError(where + ": give exactly one of cavity_pole_hz, finesse, bounces");
  }
  if (j.contains("cavity_pole_hz")) {
    c.cavity_pole = number(j, where, "cavity_pole_hz");
  } else {
    const double finesse = j.contains("finesse")
                               ? number(j, where, "finesse")
                               : InterferometerConfig::finesse_from_bounces(number(j, where, "bounces"));
    c.cavity_pole = InterferometerConfig::pole_from_finesse(finesse, c.arm_length);
  }
  c.validate();
  return c;
}

SqueezerSetup parse_squeezer(const json& j) {
  const std::string where = "squeezer";
  reject_unknown(j, where,
                 {"inject_db", "efficiency", "losses", "phase_noise_mrad", "angle_policy",
                  "angle_rad", "phase_averaging"});
  SqueezerSetup s;
  s.inject_db = number_or(j, where, "inject_db", 0.0);

  if (j.contains("efficiency") && j.contains("losses")) {
    throw ConfigError(where + ": give either efficiency or losses, not both");
  }
  if (j.contains("efficiency")) {
    s.chain = LossChain::single(number(j, where, "efficiency"));
  } else if (j.contains("losses")) {
    const auto& losses = j.at("losses");
    if (!losses.is_array()) throw ConfigError(where + ".losses must be an array");
    for (std::size_t i = 0; i < losses.size(); ++i) {
      const std::string item = where + ".losses[" + std::to_string(i) + "]";
      reject_unknown(losses[i], item, {"label", "efficiency"});
      s.chain.add(losses[i].value("label", "loss" + std::to_string(i)),
                  number(losses[i], item, "efficiency"));
    }
  }

  PhaseAveraging averaging = PhaseAveraging::kSmallAngle;
  const std::string mode = j.value("phase_averaging", std::string("small_angle"));
  if (mode == "gaussian") {
    averaging = PhaseAveraging::kGaussian;
  } else if (mode != "small_angle") {
    throw ConfigError(where + ".phase_averaging must be small_angle or gaussian");
  }
  s.phase_noise = PhaseNoise::from_mrad(number_or(j, where, "phase_noise_mrad", 0.0), averaging);

  const std::string policy = j.value("angle_policy", std::string("none"));
  s.policy = AnglePolicy::parse(policy, number_or(j, where, "angle_rad", kPhaseQuadrature));
  s.validate();
  return s;
}

GridSpec parse_grid(const json& j) {
  const std::string where = "grid";
  reject_unknown(j, where, {"f_min_hz", "f_max_hz", "points", "spacing"});
  GridSpec g;
  g.f_min = number_or(j, where, "f_min_hz", g.f_min);
  g.f_max = number_or(j, where, "f_max_hz", g.f_max);
  if (j.contains("points")) {
    if (!j.at("points").is_number_unsigned()) throw ConfigError("grid.points must be a positive integer");
    g.points = j.at("points").get<std::size_t>();
  }
  const std::string spacing = j.value("spacing", std::string("log"));
  if (spacing == "linear") {
    g.spacing = GridSpacing::kLinear;
  } else if (spacing != "log") {
    throw ConfigError("grid.spacing must be log or linear");
  }
  if (!(g.f_min > 0.0 && g.f_min < g.f_max)) throw ConfigError("grid needs 0 < f_min_hz < f_max_hz");
  if (g.points < 2) throw ConfigError("grid.points must be >= 2");
  return g;
}

}  // namespace

bool is_valid_label(const std::string& label) {
  if (label.empty()) return false;
  for (char ch : label) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '_' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    reject_unknown(j, "config",
                   {"interferometer", "squeezer", "grid", "components", "band_hz",
                    "secondary_band_hz", "description"});
    RunConfig rc;
    if (!j.contains("interferometer")) throw ConfigError("config: missing 'interferometer'");
    rc.interferometer = parse_interferometer(j.at("interferometer"));
    if (j.contains("squeezer")) rc.squeezer = parse_squeezer(j.at("squeezer"));
    if (j.contains("grid")) rc.grid = parse_grid(j.at("grid"));
    if (j.contains("band_hz")) rc.band = band(j.at("band_hz"), "band_hz");
    if (j.contains("secondary_band_hz")) {
      rc.secondary_band = band(j.at("secondary_band_hz"), "secondary_band_hz");
    }
    if (j.contains("components")) {
      const auto& comps = j.at("components");
      if (!comps.is_array()) throw ConfigError("components must be an array");
      std::set<std::string> seen;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string where = "components[" + std::to_string(i) + "]";
        reject_unknown(comps[i], where, {"label", "file"});
        if (!comps[i].contains("label") || !comps[i].at("label").is_string() ||
            !comps[i].contains("file") || !comps[i].at("file").is_string()) {
          throw ConfigError(where + " needs string 'label' and 'file'");
        }
        ComponentSpec spec{comps[i].at("label").get<std::string>(),
                           base_dir / comps[i].at("file").get<std::string>()};
        if (!is_valid_label(spec.label)) {
          throw ConfigError(where + ": label must match [A-Za-z0-9_-]+");
        }
        if (spec.label.starts_with("quantum") || spec.label.starts_with("total") ||
            spec.label.starts_with("reference") || !seen.insert(spec.label).second) {
          throw ConfigError(where + ": label '" + spec.label + "' is reserved or duplicated");
        }
        if (!std::filesystem::is_regular_file(spec.file)) {
          throw ConfigError(where + ": file not found: " + spec.file.string());
        }
        rc.components.push_back(std::move(spec));
      }
    }
    const auto in_grid = [&](std::pair<double, double> b) {
      return b.first >= rc.grid.f_min && b.second <= rc.grid.f_max;
    };
    if (!in_grid(rc.band)) throw ConfigError("band_hz lies outside the grid");
    if (!in_grid(rc.secondary_band)) throw ConfigError("secondary_band_hz lies outside the grid");
    return rc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.parent_path());
}

}  // namespace sqznb::cli
