#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sqznb::cli {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo;  // log10 bounds, whole decades
  double hi;
  double px_lo;
  double px_hi;
  double map(double v) const { return px_lo + (std::log10(v) - lo) / (hi - lo) * (px_hi - px_lo); }
};

}  // namespace

void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, std::span<const PlotSeries> series) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = 0.0;
  double y_min = std::numeric_limits<double>::infinity(), y_max = 0.0;
  for (const auto& s : series) {
    for (double v : s.x) {
      if (!(v > 0.0)) throw std::invalid_argument("log plot needs positive x values");
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) {
      if (!(v > 0.0)) throw std::invalid_argument("log plot needs positive y values");
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (!(x_max > 0.0) || !(y_max > 0.0)) throw std::invalid_argument("nothing to plot");

  const Axis xa{std::floor(std::log10(x_min)), std::max(std::ceil(std::log10(x_max)), std::floor(std::log10(x_min)) + 1),
                kLeft, kWidth - kRight};
  const Axis ya{std::floor(std::log10(y_min)), std::max(std::ceil(std::log10(y_max)), std::floor(std::log10(y_min)) + 1),
                kHeight - kBottom, kTop};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";

  // Decade grid.
  for (int d = static_cast<int>(xa.lo); d <= static_cast<int>(xa.hi); ++d) {
    const double px = xa.map(std::pow(10.0, d));
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px) << "\" y2=\""
        << fmt(kHeight - kBottom) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kHeight - kBottom + 18)
        << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(ya.lo); d <= static_cast<int>(ya.hi); ++d) {
    const double py = ya.map(std::pow(10.0, d));
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kWidth - kRight)
        << "\" y2=\"" << fmt(py) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">1e" << d
        << "</text>\n";
  }
  out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(kWidth - kLeft - kRight)
      << "\" height=\"" << fmt(kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << fmt((kLeft + kWidth - kRight) / 2) << "\" y=\"" << fmt(kHeight - 18)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
      << "<text transform=\"translate(22," << fmt((kTop + kHeight - kBottom) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (k) out << ' ';
      out << fmt(xa.map(s.x[k])) << ',' << fmt(ya.map(s.y[k]));
    }
    out << "\"/>\n";

    const double ly = kTop + 16.0 + 16.0 * static_cast<double>(i);
    const double lx = kWidth - kRight - 230.0;
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 24) << "\" y2=\""
        << fmt(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
        << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly) << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      std::span<const PlotSeries> series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_loglog_svg(out, title, x_label, y_label, series);
}

}  // namespace sqznb::cli
