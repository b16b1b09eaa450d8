#include "corr/bench/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace corr::bench {

namespace {

constexpr double kLeft = 90.0;
constexpr double kRight = 210.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;
constexpr double kPlotW = kSvgWidth - kLeft - kRight;
constexpr double kPlotH = kSvgHeight - kTop - kBottom;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& text) {
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

std::string header(const std::string& title) {
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kSvgWidth, kSvgHeight);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kSvgWidth, kSvgHeight);
  s += fmt::format("<text x=\"{:.1f}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                   kLeft + kPlotW / 2, escape(title));
  return s;
}

std::string axis_labels(const std::string& x_label, const std::string& y_label) {
  std::string s = fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + kPlotW / 2,
      kSvgHeight - 20.0, escape(x_label));
  s += fmt::format(
      "<text x=\"20\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.1f})\">"
      "{1}</text>\n",
      kTop + kPlotH / 2, escape(y_label));
  return s;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  std::vector<double> ticks;  // in data units

  double map(double v) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return std::clamp(t, 0.0, 1.0);
  }
};

std::string tick_text(double v, bool log) {
  if (log) return fmt::format("1e{}", static_cast<int>(std::lround(std::log10(v))));
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) return fmt::format("{:.1e}", v);
  return fmt::format("{:.4g}", v);
}

Axis make_axis(double lo, double hi, bool log) {
  Axis ax;
  ax.log = log;
  if (log) {
    ax.lo = std::floor(std::log10(lo));
    ax.hi = std::ceil(std::log10(hi));
    if (ax.hi <= ax.lo) ax.hi = ax.lo + 1.0;
    const int decades = static_cast<int>(ax.hi - ax.lo);
    const int stride = std::max(1, (decades + 7) / 8);
    for (int e = static_cast<int>(ax.lo); e <= static_cast<int>(ax.hi); e += stride) {
      ax.ticks.push_back(std::pow(10.0, e));
    }
    return ax;
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  ax.lo = std::floor(lo / step) * step;
  ax.hi = std::ceil(hi / step) * step;
  for (double v = ax.lo; v <= ax.hi + 0.5 * step; v += step) {
    ax.ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return ax;
}

// Smallest positive value in the data, or 1e-16.
double positive_floor(const std::vector<Series>& series, bool use_x) {
  double floor_value = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (v > 0.0 && std::isfinite(v)) floor_value = std::min(floor_value, v);
    }
  }
  return std::isfinite(floor_value) ? floor_value : 1e-16;
}

// Viridis-like ramp through five stops.
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84},
                                                                  {59, 82, 139},
                                                                  {33, 145, 140},
                                                                  {94, 201, 98},
                                                                  {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto k = std::min<std::size_t>(3, static_cast<std::size_t>(t));
  const double f = t - static_cast<double>(k);
  std::array<int, 3> c{};
  for (std::size_t i = 0; i < 3; ++i) {
    c[i] = static_cast<int>(std::lround(stops[k][i] + f * (stops[k + 1][i] - stops[k][i])));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]);
}

}  // namespace

std::string render_line_chart(const LineChart& chart) {
  for (const auto& s : chart.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y differ in length");
  }
  const double x_floor = positive_floor(chart.series, true);
  const double y_floor = positive_floor(chart.series, false);
  const auto fix = [](double v, bool log, double floor_value) {
    return log && !(v > 0.0) ? floor_value : v;
  };

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = fix(s.x[i], chart.log_x, x_floor);
      const double y = fix(s.y[i], chart.log_y, y_floor);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = chart.log_x ? 1.0 : 0.0;
    x_hi = chart.log_x ? 10.0 : 1.0;
    y_lo = chart.log_y ? 1.0 : 0.0;
    y_hi = chart.log_y ? 10.0 : 1.0;
  }
  const Axis ax = make_axis(x_lo, x_hi, chart.log_x);
  const Axis ay = make_axis(y_lo, y_hi, chart.log_y);
  const auto px = [&](double v) { return kLeft + ax.map(v) * kPlotW; };
  const auto py = [&](double v) { return kTop + (1.0 - ay.map(v)) * kPlotH; };

  std::string s = header(chart.title);
  s += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"#333\"/>\n",
      kLeft, kTop, kPlotW, kPlotH);
  for (double t : ax.ticks) {
    const double x = px(t);
    s += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#ddd\"/>\n", x,
        kTop, kTop + kPlotH);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x,
                     kTop + kPlotH + 18.0, tick_text(t, ax.log));
  }
  for (double t : ay.ticks) {
    const double y = py(t);
    s += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#ddd\"/>\n",
        kLeft, y, kLeft + kPlotW);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
                     kLeft - 6.0, y + 4.0, tick_text(t, ay.log));
  }
  s += axis_labels(chart.x_label, chart.y_label);

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& ser = chart.series[k];
    const char* color = kPalette[k % kPalette.size()];
    std::string points;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      const double x = fix(ser.x[i], chart.log_x, x_floor);
      const double y = fix(ser.y[i], chart.log_y, y_floor);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      points += fmt::format("{}{:.1f},{:.1f}", points.empty() ? "" : " ", px(x), py(y));
      s += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.5\" fill=\"{}\"/>\n", px(x),
                       py(y), color);
    }
    if (!points.empty()) {
      s += fmt::format(
          "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", points,
          color);
    }
    const double ly = kTop + 14.0 + 20.0 * static_cast<double>(k);
    const double lx = kLeft + kPlotW + 16.0;
    s += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
        "stroke-width=\"2\"/>\n",
        lx, ly, lx + 22.0, ly, color);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 28.0, ly + 4.0,
                     escape(ser.label));
  }
  s += "</svg>\n";
  return s;
}

std::string render_heatmap(const Heatmap& map) {
  const std::size_t rows = map.y_ticks.size();
  const std::size_t cols = map.x_ticks.size();
  if (map.values.size() != rows) throw std::invalid_argument("heatmap row count mismatch");
  for (const auto& r : map.values) {
    if (r.size() != cols) throw std::invalid_argument("heatmap column count mismatch");
  }

  const auto scaled = [&](double v) {
    return map.log_scale ? std::log10(std::max(v, 1e-16)) : v;
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : map.values) {
    for (double v : r) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, scaled(v));
      hi = std::max(hi, scaled(v));
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi <= lo) hi = lo + 1.0;

  std::string s = header(map.title);
  const double cw = cols > 0 ? kPlotW / static_cast<double>(cols) : kPlotW;
  const double ch = rows > 0 ? kPlotH / static_cast<double>(rows) : kPlotH;
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = kTop + kPlotH - static_cast<double>(r + 1) * ch;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = map.values[r][c];
      const double x = kLeft + static_cast<double>(c) * cw;
      const std::string fill = std::isfinite(v) ? ramp((scaled(v) - lo) / (hi - lo)) : "#cccccc";
      s += fmt::format(
          "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\" "
          "stroke=\"white\"/>\n",
          x, y, cw, ch, fill);
      const bool dark = std::isfinite(v) && (scaled(v) - lo) / (hi - lo) < 0.6;
      s += fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" fill=\"{}\">{:.2e}</text>\n",
          x + cw / 2, y + ch / 2 + 4.0, dark ? "white" : "black", v);
    }
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
                     kLeft - 6.0, y + ch / 2 + 4.0, escape(map.y_ticks[r]));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + (static_cast<double>(c) + 0.5) * cw, kTop + kPlotH + 18.0,
                     escape(map.x_ticks[c]));
  }
  s += axis_labels(map.x_label, map.y_label);

  // Colour bar.
  const double bx = kLeft + kPlotW + 30.0;
  constexpr int kSteps = 32;
  for (int i = 0; i < kSteps; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / kSteps;
    const double y = kTop + kPlotH * (1.0 - static_cast<double>(i + 1) / kSteps);
    s += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"20\" height=\"{:.2f}\" fill=\"{}\"/>\n", bx, y,
        kPlotH / kSteps + 0.5, ramp(t));
  }
  const auto bar_text = [&](double v) {
    return fmt::format("{:.2e}", map.log_scale ? std::pow(10.0, v) : v);
  };
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", bx + 26.0, kTop + 10.0,
                   bar_text(hi));
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", bx + 26.0, kTop + kPlotH,
                   bar_text(lo));
  s += "</svg>\n";
  return s;
}

}  // namespace corr::bench
