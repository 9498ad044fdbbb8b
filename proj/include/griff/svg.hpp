#pragma once

#include <string>
#include <utility>
#include <vector>

namespace griff {

/// One polyline of a chart.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

/// Renders a dependency-free line chart. The y axis always includes 0;
/// output is deterministic for identical input.
std::string lineChartSvg(const std::vector<SvgSeries>& series,
                         const std::string& x_label, const std::string& y_label,
                         int width = 800, int height = 480);

}  // namespace griff
