// Copyright 2026 The hikm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hikm::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::pair<double, double> extent(const std::vector<ScatterSeries>& series, bool x_axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : x_axis ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  if (hi == lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterSeries>& series,
                        const PlotFrame& frame) {
  const auto [x0, x1] = frame.x_range.value_or(extent(series, true));
  const auto [y0, y1] = frame.y_range.value_or(extent(series, false));
  const double margin = 40.0;
  const double w = frame.width - 2 * margin;
  const double h = frame.height - 2 * margin;
  auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return margin + h - (y - y0) / (y1 - y0) * h; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(frame.width) + "\" height=\"" +
                    std::to_string(frame.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" +
         num(w) + "\" height=\"" + num(h) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg += "<text x=\"" + num(frame.width / 2.0) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" +
         escape(frame.title) + "</text>\n";
  svg += "<text x=\"" + num(frame.width / 2.0) + "\" y=\"" +
         num(frame.height - 8.0) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         escape(frame.x_label) + "</text>\n";
  svg += "<text x=\"12\" y=\"" + num(frame.height / 2.0) +
         "\" font-size=\"11\" transform=\"rotate(-90 12 " +
         num(frame.height / 2.0) + ")\" text-anchor=\"middle\">" +
         escape(frame.y_label) + "</text>\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) +
             "\" r=\"2\" fill=\"" + s.color + "\"/>\n";
    }
    if (s.line && std::isfinite(s.line->first)) {
      const auto [slope, intercept] = *s.line;
      svg += "<line x1=\"" + num(px(x0)) + "\" y1=\"" +
             num(py(slope * x0 + intercept)) + "\" x2=\"" + num(px(x1)) +
             "\" y2=\"" + num(py(slope * x1 + intercept)) +
             "\" stroke=\"#e6b800\" stroke-width=\"2\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string panels_svg(const std::vector<std::string>& panels, int panel_width,
                       int panel_height) {
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(panel_width * static_cast<int>(panels.size())) +
                    "\" height=\"" + std::to_string(panel_height) + "\">\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    svg += "<g transform=\"translate(" + std::to_string(panel_width * static_cast<int>(i)) +
           ",0)\">\n" + panels[i] + "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hikm::cli
