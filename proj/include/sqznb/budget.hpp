#pragma once

// Strain noise budgets: tabulated ASD curves, resampling onto a common
// frequency grid, quadrature-sum composition and improvement metrics.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqznb {

// Header line of the two-column ASD CSV format.
inline constexpr std::string_view kAsdCsvHeader = "frequency_hz,asd_strain_per_sqrt_hz";

struct AsdRow {
  double frequency;  // Hz
  double asd;        // 1/sqrt(Hz)
};

struct TabulatedASD {
  std::vector<AsdRow> rows;
  std::string label;
  std::string source;

  // At least two rows, strictly increasing frequencies, positive finite values.
  // Throws ValidationError naming the 0-based row on failure.
  void validate() const;
  double f_min() const { return rows.front().frequency; }
  double f_max() const { return rows.back().frequency; }
};

// CSV reader. Errors carry the 1-based line number of the offending line.
TabulatedASD ingest_asd(const std::filesystem::path& path);
TabulatedASD parse_asd(std::istream& in, std::string label = {}, std::string source = {});

// Writes the header then one `frequency,asd` line per point using the
// shortest decimal form that round-trips to the same double.
void write_asd_csv(std::ostream& out, std::span<const double> frequencies,
                   std::span<const double> asd);
void write_asd_csv(const std::filesystem::path& path, std::span<const double> frequencies,
                   std::span<const double> asd);

// Shortest round-trip decimal form of `value`.
std::string format_double(double value);

// Log-log linear interpolation; exact at knots. Throws RangeError for any
// grid point outside [f_min, f_max].
std::vector<double> resample(const TabulatedASD& table, std::span<const double> grid);

enum class GridSpacing { kLog, kLinear };

// `points` >= 2 frequencies from f_min to f_max inclusive.
std::vector<double> make_grid(double f_min, double f_max, std::size_t points,
                              GridSpacing spacing = GridSpacing::kLog);

struct NoiseComponent {
  std::string label;
  std::vector<double> asd;
};

struct NoiseBudget {
  std::vector<double> grid;
  std::vector<NoiseComponent> components;
  std::vector<double> total;

  const NoiseComponent* find(std::string_view label) const;
};

// Root-sum-square of the components at every grid point.
NoiseBudget compose(std::vector<double> grid, std::vector<NoiseComponent> components);

struct Improvement {
  double median_db = 0.0;  // 20 log10 of the median reference/squeezed ratio
  double max_db = 0.0;     // largest point-wise improvement
  double max_at_hz = 0.0;
  std::size_t points = 0;  // grid points inside the band
};

// Compares the totals over grid points with f_lo <= f <= f_hi. Throws
// RangeError if the band is not inside the grid, InvalidArgument on grid mismatch.
Improvement improvement_db(const NoiseBudget& reference, const NoiseBudget& squeezed,
                           std::pair<double, double> band);

// Fractional arm-power increase giving the same shot-noise reduction:
// 10^(improvement_db / 10) - 1.
double equivalent_power_increase(double improvement_db);

}  // namespace sqznb
