/*
 * Copyright 2026 The plateaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <map>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"
#include "plateaudit/project/tsne.h"

namespace plateaudit::project {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 560.0;
constexpr double kPlot = 520.0;
constexpr double kMargin = 20.0;

std::string F(double v) { return FormatFixed(v, 4); }

std::string Escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

// Tableau-20 ordering: strong tones first, then their light counterparts.
const std::vector<std::string>& CategoricalPalette() {
  static const std::vector<std::string> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
      "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
      "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};
  return palette;
}

std::string ScatterSvg(const Projection2D& projection, const std::vector<std::string>& labels,
                       const std::string& title) {
  const Eigen::Index n = projection.coords.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorCode::kInput, "label count does not match point count");
  }
  std::map<std::string, int> categories;
  for (const auto& l : labels) categories.emplace(l, 0);
  if (static_cast<int>(categories.size()) > kMaxScatterCategories) {
    throw Error(ErrorCode::kInput,
                std::to_string(categories.size()) + " categories exceed the palette of " +
                    std::to_string(kMaxScatterCategories) +
                    "; color by a column with fewer distinct values");
  }
  int next = 0;
  for (auto& [name, index] : categories) index = next++;

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (n > 0) {
    x0 = projection.coords.col(0).minCoeff();
    x1 = projection.coords.col(0).maxCoeff();
    y0 = projection.coords.col(1).minCoeff();
    y1 = projection.coords.col(1).maxCoeff();
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const auto px = [&](double v) { return kMargin + kPlot / 2 + (v - cx) / span * (kPlot - 10); };
  const auto py = [&](double v) {
    return kMargin + 20 + kPlot / 2 - (v - cy) / span * (kPlot - 10);
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + F(kWidth) +
                    "\" height=\"" + F(kHeight) + "\" viewBox=\"0 0 " + F(kWidth) + " " +
                    F(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + F(kWidth) + "\" height=\"" + F(kHeight) +
         "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + F(kWidth / 2) +
         "\" y=\"16\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
         Escape(title) + "</text>\n";
  svg += "<rect x=\"" + F(kMargin) + "\" y=\"" + F(kMargin + 20) + "\" width=\"" + F(kPlot) +
         "\" height=\"" + F(kPlot) + "\" fill=\"none\" stroke=\"#999999\"/>\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    svg += "<circle cx=\"" + F(px(projection.coords(i, 0))) + "\" cy=\"" +
           F(py(projection.coords(i, 1))) + "\" r=\"2.5\" fill=\"" +
           CategoricalPalette()[categories.at(labels[i])] + "\" fill-opacity=\"0.8\"/>\n";
  }
  double ly = kMargin + 30;
  for (const auto& [name, index] : categories) {
    const double lx = kMargin + kPlot + 20;
    svg += "<rect x=\"" + F(lx) + "\" y=\"" + F(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
           CategoricalPalette()[index] + "\"/>\n";
    svg += "<text x=\"" + F(lx + 16) + "\" y=\"" + F(ly) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + Escape(name) + "</text>\n";
    ly += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace plateaudit::project
