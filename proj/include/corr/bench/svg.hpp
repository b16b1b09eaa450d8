#pragma once

#include <string>
#include <vector>

namespace corr::bench {

inline constexpr int kSvgWidth = 960;
inline constexpr int kSvgHeight = 540;

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

// On log axes non-positive values are drawn at the smallest positive value
// present (or 1e-16), so exact zeros stay visible.
std::string render_line_chart(const LineChart& chart);

struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> x_ticks;          // columns
  std::vector<std::string> y_ticks;          // rows, drawn bottom to top
  std::vector<std::vector<double>> values;   // values[row][col]
  bool log_scale = true;
};

std::string render_heatmap(const Heatmap& map);

}  // namespace corr::bench
