#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace sqznb::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Self-contained log-log line plot with decade grid lines and a legend.
// All coordinates must be positive.
void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, std::span<const PlotSeries> series);
void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      std::span<const PlotSeries> series);

}  // namespace sqznb::cli
