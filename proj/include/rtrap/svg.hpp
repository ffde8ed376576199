#pragma once

#include <string>
#include <vector>

namespace rtrap {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool points = false;  // markers instead of a polyline
  double width = 1.0;
};

struct PlotSpec {
  std::string title;
  std::string xLabel;
  std::string yLabel;
  bool logY = false;
};

/// Static 800x600 line plot, no external assets.
std::string render_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace rtrap
