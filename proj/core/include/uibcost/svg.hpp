// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace uibcost::svg {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

// Line chart, x on a log scale (used for ridge-point sweeps). Plots are a
// convenience; the CSV output is the source of truth.
std::string line_plot(const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      bool log_x = true, bool log_y = false);

// Scatter with point labels (x log scale), used for Pareto charts.
struct LabeledPoint {
  double x = 0, y = 0;
  std::string label;
  bool highlight = false;  // frontier members
};

std::string scatter_plot(const std::vector<LabeledPoint>& points,
                         const std::string& x_label, const std::string& y_label);

}  // namespace uibcost::svg
