#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace acr {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 420;
};

// Standalone SVG line chart: one polyline per series, axes with five ticks
// each and a legend. Non-finite points are dropped.
std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series);

void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace acr
