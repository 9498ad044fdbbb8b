#include "griff/svg.hpp"

#include <algorithm>
#include <sstream>

#include "griff/common.hpp"

namespace griff {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 48.0;

std::string xmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string lineChartSvg(const std::vector<SvgSeries>& series,
                         const std::string& x_label, const std::string& y_label,
                         int width, int height) {
  double x_min = 0.0, x_max = 1.0, y_max = 1.0;
  bool first = true;
  for (const SvgSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= 0.0) y_max = 1.0;

  double plot_w = width - kMarginLeft - kMarginRight;
  double plot_h = height - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto sy = [&](double y) { return kMarginTop + (1.0 - y / y_max) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // Axes.
  out << "  <line x1=\"" << formatFixed(kMarginLeft, 1) << "\" y1=\""
      << formatFixed(kMarginTop, 1) << "\" x2=\"" << formatFixed(kMarginLeft, 1)
      << "\" y2=\"" << formatFixed(kMarginTop + plot_h, 1)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << formatFixed(kMarginLeft, 1) << "\" y1=\""
      << formatFixed(kMarginTop + plot_h, 1) << "\" x2=\""
      << formatFixed(kMarginLeft + plot_w, 1) << "\" y2=\""
      << formatFixed(kMarginTop + plot_h, 1)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Gridlines and tick labels, four intervals on each axis.
  for (int i = 0; i <= 4; ++i) {
    double fy = y_max * i / 4.0;
    double y = sy(fy);
    if (i > 0) {
      out << "  <line x1=\"" << formatFixed(kMarginLeft, 1) << "\" y1=\""
          << formatFixed(y, 1) << "\" x2=\"" << formatFixed(kMarginLeft + plot_w, 1)
          << "\" y2=\"" << formatFixed(y, 1)
          << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    }
    out << "  <text x=\"" << formatFixed(kMarginLeft - 8.0, 1) << "\" y=\""
        << formatFixed(y + 4.0, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << formatFixed(fy, 2) << "</text>\n";
    double fx = x_min + (x_max - x_min) * i / 4.0;
    double x = sx(fx);
    out << "  <text x=\"" << formatFixed(x, 1) << "\" y=\""
        << formatFixed(kMarginTop + plot_h + 18.0, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << formatFixed(fx, 0) << "</text>\n";
  }

  // Axis labels.
  out << "  <text x=\"" << formatFixed(kMarginLeft + plot_w / 2.0, 1) << "\" y=\""
      << formatFixed(static_cast<double>(height) - 10.0, 1)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << xmlEscape(x_label) << "</text>\n";
  out << "  <text x=\"14.0\" y=\"" << formatFixed(kMarginTop + plot_h / 2.0, 1)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 14.0 " << formatFixed(kMarginTop + plot_h / 2.0, 1)
      << ")\">" << xmlEscape(y_label) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    if (series[s].points.empty()) continue;
    const char* color = kPalette[s % kPaletteSize];
    out << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[s].points.size(); ++i) {
      if (i > 0) out << ' ';
      out << formatFixed(sx(series[s].points[i].first), 2) << ','
          << formatFixed(sy(series[s].points[i].second), 2);
    }
    out << "\"/>\n";
    double ly = kMarginTop + 14.0 + 16.0 * static_cast<double>(s);
    out << "  <rect x=\"" << formatFixed(kMarginLeft + plot_w - 150.0, 1) << "\" y=\""
        << formatFixed(ly - 9.0, 1) << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/>\n";
    out << "  <text x=\"" << formatFixed(kMarginLeft + plot_w - 136.0, 1) << "\" y=\""
        << formatFixed(ly, 1) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << xmlEscape(series[s].label) << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace griff
