#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqznb/budget.hpp"
#include "sqznb/interferometer.hpp"

namespace sqznb::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double f_min = 10.0;
  double f_max = 10000.0;
  std::size_t points = 1000;
  GridSpacing spacing = GridSpacing::kLog;

  std::vector<double> build() const { return make_grid(f_min, f_max, points, spacing); }
};

struct ComponentSpec {
  std::string label;
  std::filesystem::path file;  // resolved against the config directory
};

struct RunConfig {
  InterferometerConfig interferometer;
  SqueezerSetup squeezer;
  GridSpec grid;
  std::vector<ComponentSpec> components;
  std::pair<double, double> band{400.0, 3000.0};
  std::pair<double, double> secondary_band{150.0, 300.0};
};

// Loads and validates a JSON run config. Unknown keys, missing fields,
// out-of-domain values and missing component files raise ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);

// Labels double as file name parts: [A-Za-z0-9_-]+.
bool is_valid_label(const std::string& label);

}  // namespace sqznb::cli
