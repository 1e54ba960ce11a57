// SPDX-License-Identifier: Apache-2.0
#include "uibcost/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uibcost::svg {

namespace {

constexpr int kW = 760, kH = 480;
constexpr int kMarginL = 70, kMarginR = 30, kMarginT = 30, kMarginB = 55;

const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                         "#bcbd22", "#17becf"};

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, int pixel_lo, int pixel_hi) const {
    double a = v, l = lo, h = hi;
    if (log) { a = std::log10(std::max(v, 1e-12)); l = std::log10(std::max(lo, 1e-12)); h = std::log10(std::max(hi, 1e-12)); }
    if (h == l) h = l + 1;
    return pixel_lo + (a - l) / (h - l) * (pixel_hi - pixel_lo);
  }
};

std::string header() {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
     << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

std::string axes(const std::string& x_label, const std::string& y_label) {
  std::ostringstream os;
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kH - kMarginB << "\" x2=\""
     << kW - kMarginR << "\" y2=\"" << kH - kMarginB
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\""
     << kMarginL << "\" y2=\"" << kH - kMarginB << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (kMarginL + kW - kMarginR) / 2 << "\" y=\"" << kH - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << (kMarginT + kH - kMarginB) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (kMarginT + kH - kMarginB) / 2 << ")\">" << y_label << "</text>\n";
  return os.str();
}

}  // namespace

std::string line_plot(const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      bool log_x, bool log_y) {
  Axis x{1e300, -1e300, log_x}, y{1e300, -1e300, log_y};
  for (const Series& s : series)
    for (size_t i = 0; i < s.xs.size(); ++i) {
      x.lo = std::min(x.lo, log_x ? std::max(s.xs[i], 0.1) : s.xs[i]);
      x.hi = std::max(x.hi, s.xs[i]);
      y.lo = std::min(y.lo, s.ys[i]);
      y.hi = std::max(y.hi, s.ys[i]);
    }
  std::ostringstream os;
  os << header() << axes(x_label, y_label);
  int ci = 0;
  for (const Series& s : series) {
    const char* color = kColors[ci % 10];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.xs.size(); ++i) {
      const double px = x.map(log_x ? std::max(s.xs[i], 0.1) : s.xs[i],
                              kMarginL, kW - kMarginR);
      const double py = y.map(s.ys[i], kH - kMarginB, kMarginT);
      os << px << ',' << py << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kW - kMarginR - 5 << "\" y=\""
       << kMarginT + 16 * (ci + 1)
       << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
       << s.label << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

std::string scatter_plot(const std::vector<LabeledPoint>& points,
                         const std::string& x_label,
                         const std::string& y_label) {
  Axis x{1e300, -1e300, true}, y{1e300, -1e300, false};
  for (const LabeledPoint& p : points) {
    x.lo = std::min(x.lo, p.x);
    x.hi = std::max(x.hi, p.x);
    y.lo = std::min(y.lo, p.y);
    y.hi = std::max(y.hi, p.y);
  }
  const double pad = (y.hi - y.lo) * 0.08 + 0.1;
  y.lo -= pad;
  y.hi += pad;
  std::ostringstream os;
  os << header() << axes(x_label, y_label);
  for (const LabeledPoint& p : points) {
    const double px = x.map(p.x, kMarginL, kW - kMarginR);
    const double py = y.map(p.y, kH - kMarginB, kMarginT);
    os << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\""
       << (p.highlight ? 5 : 3) << "\" fill=\""
       << (p.highlight ? "#d62728" : "#1f77b4") << "\"/>\n";
    os << "<text x=\"" << px + 6 << "\" y=\"" << py - 5
       << "\" font-size=\"10\">" << p.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace uibcost::svg
