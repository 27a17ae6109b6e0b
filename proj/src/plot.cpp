#include "zeno/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed2(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  if (ec != std::errc()) return "?";
  return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool all_positive = true;
  bool any = false;

  void add(double v) {
    if (!std::isfinite(v)) return;
    any = true;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (!(v > 0.0)) all_positive = false;
  }
};

void fit_axis(const Range& r, bool& log_axis, double& lo, double& hi) {
  if (!r.any) {
    log_axis = false;
    lo = 0.0;
    hi = 1.0;
    return;
  }
  log_axis = r.all_positive;
  if (log_axis) {
    lo = std::floor(std::log10(r.lo));
    hi = std::ceil(std::log10(r.hi));
    if (hi <= lo) {
      lo -= 1.0;
      hi += 1.0;
    }
    return;
  }
  lo = r.lo;
  hi = r.hi;
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

// "Nice" linear ticks: steps of 1, 2 or 5 times a power of ten.
std::vector<double> linear_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo_exp, double hi_exp) {
  const double span = hi_exp - lo_exp;
  const double stride = std::max(1.0, std::ceil(span / 10.0));
  std::vector<double> ticks;
  for (double e = lo_exp; e <= hi_exp + 1e-9; e += stride) ticks.push_back(e);
  return ticks;
}

}  // namespace

Chart chart_from_csv(const CsvTable& table, std::string title) {
  if (table.header.size() < 2) throw MalformedCsv("need an x column and at least one series");
  Chart chart;
  chart.title = std::move(title);
  chart.x_label = table.header[0];
  chart.y_label = table.header.size() == 2 ? table.header[1] : "value";
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    ChartSeries s;
    s.name = table.header[c];
    for (const auto& row : table.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[c]);
    }
    chart.series.push_back(std::move(s));
  }
  return chart;
}

double PlotGeometry::px(double x) const {
  const double v = log_x ? std::log10(x) : x;
  return kPlotLeft + (v - x_min) / (x_max - x_min) * (kPlotRight - kPlotLeft);
}

double PlotGeometry::py(double y) const {
  const double v = log_y ? std::log10(y) : y;
  return kPlotBottom - (v - y_min) / (y_max - y_min) * (kPlotBottom - kPlotTop);
}

PlotGeometry plot_geometry(const Chart& chart) {
  Range xr;
  Range yr;
  for (const ChartSeries& s : chart.series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      xr.add(s.x[k]);
      yr.add(s.y[k]);
    }
  }
  PlotGeometry g;
  fit_axis(xr, g.log_x, g.x_min, g.x_max);
  fit_axis(yr, g.log_y, g.y_min, g.y_max);
  return g;
}

std::string render_svg(const Chart& chart) {
  const PlotGeometry g = plot_geometry(chart);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(chart.title) + "</text>\n";
  out += "<rect x=\"" + fixed2(kPlotLeft) + "\" y=\"" + fixed2(kPlotTop) + "\" width=\"" +
         fixed2(kPlotRight - kPlotLeft) + "\" height=\"" + fixed2(kPlotBottom - kPlotTop) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  const auto xt = g.log_x ? log_ticks(g.x_min, g.x_max) : linear_ticks(g.x_min, g.x_max);
  for (double t : xt) {
    const double value = g.log_x ? std::pow(10.0, t) : t;
    const std::string x = fixed2(g.px(value));
    out += "<line x1=\"" + x + "\" y1=\"" + fixed2(kPlotBottom) + "\" x2=\"" + x + "\" y2=\"" + fixed2(kPlotTop) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + x + "\" y=\"" + fixed2(kPlotBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(g.log_x ? "1e" + tick_label(t) : tick_label(t)) + "</text>\n";
  }
  const auto yt = g.log_y ? log_ticks(g.y_min, g.y_max) : linear_ticks(g.y_min, g.y_max);
  for (double t : yt) {
    const double value = g.log_y ? std::pow(10.0, t) : t;
    const std::string y = fixed2(g.py(value));
    out += "<line x1=\"" + fixed2(kPlotLeft) + "\" y1=\"" + y + "\" x2=\"" + fixed2(kPlotRight) + "\" y2=\"" + y +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fixed2(kPlotLeft - 6) + "\" y=\"" + fixed2(g.py(value) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(g.log_y ? "1e" + tick_label(t) : tick_label(t)) + "</text>\n";
  }
  out += "<text x=\"" + fixed2(0.5 * (kPlotLeft + kPlotRight)) + "\" y=\"" + fixed2(kPlotBottom + 45) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape(chart.x_label) +
         (g.log_x ? " (log)" : "") + "</text>\n";
  out += "<text x=\"20\" y=\"" + fixed2(0.5 * (kPlotTop + kPlotBottom)) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
         fixed2(0.5 * (kPlotTop + kPlotBottom)) + ")\">" + escape(chart.y_label) + (g.log_y ? " (log)" : "") +
         "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const ChartSeries& s = chart.series[k];
    const char* color = kPalette[k % kPalette.size()];
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += fixed2(g.px(s.x[i])) + "," + fixed2(g.py(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + points +
           "\"/>\n";
    const double ly = kPlotTop + 10.0 + 18.0 * static_cast<double>(k);
    out += "<line x1=\"635\" y1=\"" + fixed2(ly) + "\" x2=\"660\" y2=\"" + fixed2(ly) + "\" stroke=\"" +
           std::string(color) + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"666\" y=\"" + fixed2(ly + 4) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace zeno
