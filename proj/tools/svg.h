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

#ifndef HIKM_TOOLS_SVG_H_
#define HIKM_TOOLS_SVG_H_

#include <optional>
#include <string>
#include <vector>

namespace hikm::cli {

struct ScatterSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  // Optional fitted line y = slope * x + intercept.
  std::optional<std::pair<double, double>> line;
};

struct PlotFrame {
  std::string title;
  std::string x_label;
  std::string y_label;
  // Axis ranges; computed from the data when unset.
  std::optional<std::pair<double, double>> x_range;
  std::optional<std::pair<double, double>> y_range;
  int width = 420;
  int height = 420;
};

// Self-contained SVG document with one scatter panel.
std::string scatter_svg(const std::vector<ScatterSeries>& series,
                        const PlotFrame& frame);

// Several panels side by side, as one SVG document.
std::string panels_svg(const std::vector<std::string>& panels, int panel_width,
                       int panel_height);

}  // namespace hikm::cli

#endif  // HIKM_TOOLS_SVG_H_
