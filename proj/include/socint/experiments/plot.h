// Copyright 2026 The socint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCINT_EXPERIMENTS_PLOT_H_
#define SOCINT_EXPERIMENTS_PLOT_H_

// Static SVG line charts for quick looks at regret-vs-K and TV-vs-K.  The
// companion manifest describes the same plots for external tools.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socint/experiments/support.h"

namespace socint::experiments {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  std::vector<PlotSeries> series;
};

namespace internal {

inline std::string XmlEscape(const std::string& s) {
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

}  // namespace internal

inline std::string RenderSvg(const LineChart& chart) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 160, kTop = 40,
                   kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : chart.series) {
    for (auto [x, y] : s.points) {
      if (chart.log_x && x <= 0) continue;
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << internal::XmlEscape(chart.title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4
      << "\" text-anchor=\"end\">" << Fmt(std::round(y * 1e4) / 1e4) << "</text>\n";
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double label = chart.log_x ? std::pow(10.0, xv) : xv;
    o << "<text x=\"" << kLeft + pw * i / 4.0 << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << Fmt(std::round(label * 100) / 100)
      << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
    << "\" text-anchor=\"middle\">" << internal::XmlEscape(chart.x_label)
    << (chart.log_x ? " (log scale)" : "") << "</text>\n";
  o << "<text transform=\"translate(16," << kTop + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">"
    << internal::XmlEscape(chart.y_label) << "</text>\n";
  for (size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const char* color = kColors[s % 6];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (auto [x, y] : series.points) {
      if (chart.log_x && x <= 0) continue;
      o << (first ? "" : " ") << Fmt(px(x)) << ',' << Fmt(py(y));
      first = false;
    }
    o << "\"/>\n";
    for (auto [x, y] : series.points) {
      if (chart.log_x && x <= 0) continue;
      o << "<circle cx=\"" << Fmt(px(x)) << "\" cy=\"" << Fmt(py(y))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    o << "<line x1=\"" << kW - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
      << kW - kRight + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kW - kRight + 38 << "\" y=\"" << ly << "\">"
      << internal::XmlEscape(series.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace socint::experiments

#endif  // SOCINT_EXPERIMENTS_PLOT_H_
