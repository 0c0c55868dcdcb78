#include "sqznb/budget.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include "sqznb/error.hpp"

namespace sqznb {

namespace {

bool parse_field(std::string_view text, double& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string where(const std::string& source, std::size_t line) {
  return (source.empty() ? std::string("<input>") : source) + ":" + std::to_string(line) + ": ";
}

}  // namespace

void TabulatedASD::validate() const {
  if (rows.size() < 2) {
    throw ValidationError("tabulated ASD '" + label + "' needs at least 2 rows, has " +
                          std::to_string(rows.size()));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.frequency > 0.0) || !std::isfinite(r.frequency) || !(r.asd > 0.0) ||
        !std::isfinite(r.asd)) {
      throw ValidationError("row " + std::to_string(i) + " of '" + label +
                            "' has a non-positive or non-finite value");
    }
    if (i > 0 && !(r.frequency > rows[i - 1].frequency)) {
      throw ValidationError("row " + std::to_string(i) + " of '" + label +
                            "': frequencies must be strictly increasing");
    }
  }
}

TabulatedASD parse_asd(std::istream& in, std::string label, std::string source) {
  TabulatedASD table;
  table.label = std::move(label);
  table.source = std::move(source);

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

    if (!have_header) {
      if (line != kAsdCsvHeader) {
        throw ParseError(where(table.source, line_no) + "expected header '" +
                             std::string(kAsdCsvHeader) + "'",
                         line_no);
      }
      have_header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(where(table.source, line_no) + "expected two comma-separated fields",
                       line_no);
    }
    AsdRow row{};
    const std::string_view view(line);
    if (!parse_field(view.substr(0, comma), row.frequency) ||
        !parse_field(view.substr(comma + 1), row.asd)) {
      throw ParseError(where(table.source, line_no) + "malformed number", line_no);
    }
    if (!(row.frequency > 0.0) || !std::isfinite(row.frequency) || !(row.asd > 0.0) ||
        !std::isfinite(row.asd)) {
      throw ValidationError(where(table.source, line_no) + "values must be positive and finite",
                            line_no);
    }
    if (!table.rows.empty() && !(row.frequency > table.rows.back().frequency)) {
      throw ValidationError(where(table.source, line_no) +
                                "frequency does not increase over the previous row",
                            line_no);
    }
    table.rows.push_back(row);
  }
  if (!have_header) throw ParseError(where(table.source, 0) + "empty file", 0);
  if (table.rows.size() < 2) {
    throw ValidationError(where(table.source, line_no) + "at least 2 data rows are required",
                          line_no);
  }
  return table;
}

TabulatedASD ingest_asd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_asd(in, path.stem().string(), path.string());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_asd_csv(std::ostream& out, std::span<const double> frequencies,
                   std::span<const double> asd) {
  if (frequencies.size() != asd.size()) {
    throw InvalidArgument("frequency and ASD columns differ in length");
  }
  out << kAsdCsvHeader << '\n';
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    out << format_double(frequencies[i]) << ',' << format_double(asd[i]) << '\n';
  }
}

void write_asd_csv(const std::filesystem::path& path, std::span<const double> frequencies,
                   std::span<const double> asd) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_asd_csv(out, frequencies, asd);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<double> resample(const TabulatedASD& table, std::span<const double> grid) {
  table.validate();
  std::vector<double> out;
  out.reserve(grid.size());
  const auto& rows = table.rows;
  for (double f : grid) {
    if (!(f >= table.f_min() && f <= table.f_max())) {
      throw RangeError("frequency " + format_double(f) + " Hz is outside the span [" +
                       format_double(table.f_min()) + ", " + format_double(table.f_max()) +
                       "] Hz of '" + table.label + "'");
    }
    auto hi = std::lower_bound(rows.begin(), rows.end(), f,
                               [](const AsdRow& r, double x) { return r.frequency < x; });
    if (hi->frequency == f) {
      out.push_back(hi->asd);
      continue;
    }
    auto lo = hi - 1;
    const double t = std::log(f / lo->frequency) / std::log(hi->frequency / lo->frequency);
    out.push_back(std::exp(std::log(lo->asd) + t * std::log(hi->asd / lo->asd)));
  }
  return out;
}

std::vector<double> make_grid(double f_min, double f_max, std::size_t points, GridSpacing spacing) {
  if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
  if (!(f_min > 0.0) || !(f_max > f_min) || !std::isfinite(f_max)) {
    throw InvalidArgument("grid needs 0 < f_min < f_max");
  }
  std::vector<double> grid(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / last;
    grid[i] = spacing == GridSpacing::kLog ? f_min * std::pow(f_max / f_min, t)
                                           : f_min + (f_max - f_min) * t;
  }
  grid.front() = f_min;
  grid.back() = f_max;
  return grid;
}

const NoiseComponent* NoiseBudget::find(std::string_view label) const {
  for (const auto& c : components) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

NoiseBudget compose(std::vector<double> grid, std::vector<NoiseComponent> components) {
  if (components.empty()) throw InvalidArgument("a noise budget needs at least one component");
  std::vector<double> total(grid.size(), 0.0);
  for (const auto& c : components) {
    if (c.asd.size() != grid.size()) {
      throw InvalidArgument("component '" + c.label + "' has " + std::to_string(c.asd.size()) +
                            " values for a grid of " + std::to_string(grid.size()));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) total[i] += c.asd[i] * c.asd[i];
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    total[i] = std::sqrt(total[i]);
    if (!std::isfinite(total[i]) || !(total[i] > 0.0)) {
      throw NumericalError("non-finite total noise at " + format_double(grid[i]) + " Hz");
    }
  }
  return NoiseBudget{std::move(grid), std::move(components), std::move(total)};
}

Improvement improvement_db(const NoiseBudget& reference, const NoiseBudget& squeezed,
                           std::pair<double, double> band) {
  const auto& grid = reference.grid;
  if (grid != squeezed.grid) throw InvalidArgument("budgets are defined on different grids");
  const auto [lo, hi] = band;
  if (grid.empty() || !(lo <= hi) || lo < grid.front() || hi > grid.back()) {
    throw RangeError("band [" + format_double(lo) + ", " + format_double(hi) +
                     "] Hz is not inside the grid");
  }
  std::vector<double> ratios;
  Improvement result;
  double best = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < lo || grid[i] > hi) continue;
    const double ratio = reference.total[i] / squeezed.total[i];
    ratios.push_back(ratio);
    if (ratio > best) {
      best = ratio;
      result.max_at_hz = grid[i];
    }
  }
  if (ratios.empty()) throw RangeError("band contains no grid points");
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  const double median = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  result.median_db = 20.0 * std::log10(median);
  result.max_db = 20.0 * std::log10(best);
  result.points = n;
  return result;
}

double equivalent_power_increase(double improvement_db) {
  if (!(improvement_db >= 0.0) || !std::isfinite(improvement_db)) {
    throw InvalidArgument("improvement must be a finite value >= 0 dB");
  }
  return std::pow(10.0, improvement_db / 10.0) - 1.0;
}

}  // namespace sqznb
