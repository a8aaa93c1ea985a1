#pragma once

// Static SVG charts. Output depends only on the input data.

#include <string>
#include <vector>

#include "bfbelp/scenario.hpp"

namespace bfbelp {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotCircle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
  std::string color = "#d62728";
  bool filled = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotCircle> circles;
  bool equal_aspect = false;
};

std::string render_svg(const Chart& chart);

/// file name -> SVG text for the standard figure set of one run.
std::vector<std::pair<std::string, std::string>> standard_charts(const SimLog& log);

}  // namespace bfbelp
