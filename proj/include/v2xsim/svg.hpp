#pragma once

#include <string>
#include <utility>
#include <vector>

namespace v2xsim {

// Minimal static SVG line/scatter chart. Input is already-aggregated data;
// rendering is a pure function of it.

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<std::pair<double, double>> points;
  bool scatter = false;  // draw markers only instead of a polyline
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;

  std::string render(int width = 900, int height = 540) const;
};

}  // namespace v2xsim
