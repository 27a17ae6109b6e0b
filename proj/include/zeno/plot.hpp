#pragma once

#include <string>
#include <vector>

#include "zeno/io.hpp"

namespace zeno {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
};

/// First column is x, every further column one series.
Chart chart_from_csv(const CsvTable& table, std::string title);

/// Data-to-pixel mapping of the plot area inside the fixed 800×600 viewBox.
struct PlotGeometry {
  bool log_x = false;
  bool log_y = false;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double px(double x) const;
  double py(double y) const;
};

inline constexpr double kSvgWidth = 800.0;
inline constexpr double kSvgHeight = 600.0;
inline constexpr double kPlotLeft = 90.0;
inline constexpr double kPlotRight = 620.0;
inline constexpr double kPlotTop = 50.0;
inline constexpr double kPlotBottom = 530.0;

/// Log axes when every finite value on that axis is positive; non-finite points are skipped.
PlotGeometry plot_geometry(const Chart& chart);

/// Deterministic SVG text: one polyline per series, no timestamps.
std::string render_svg(const Chart& chart);

}  // namespace zeno
