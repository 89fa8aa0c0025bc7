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

#include "plateaudit/imaging/heatmap.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"

namespace plateaudit::imaging {
namespace {

constexpr std::array<std::array<uint8_t, 3>, 5> kStops = {{
    {0x44, 0x01, 0x54},
    {0x3b, 0x52, 0x8b},
    {0x21, 0x91, 0x8c},
    {0x5e, 0xc9, 0x62},
    {0xfd, 0xe7, 0x25},
}};

constexpr double kCell = 36.0;
constexpr double kLeft = 28.0;
constexpr double kTop = 48.0;
constexpr double kLegendHeight = 56.0;
constexpr const char* kMissingColor = "#bdbdbd";

std::string EscapeXml(const std::string& text) {
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

std::string F(double v) { return FormatFixed(v, 4); }

std::string Rect(double x, double y, double w, double h, const std::string& fill) {
  return "<rect x=\"" + F(x) + "\" y=\"" + F(y) + "\" width=\"" + F(w) +
         "\" height=\"" + F(h) + "\" fill=\"" + fill + "\"/>\n";
}

std::string Text(double x, double y, const std::string& anchor, const std::string& body) {
  return "<text x=\"" + F(x) + "\" y=\"" + F(y) + "\" font-size=\"11\" text-anchor=\"" +
         anchor + "\" font-family=\"sans-serif\">" + EscapeXml(body) + "</text>\n";
}

}  // namespace

std::array<uint8_t, 3> RampColor(double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::kInput, "non-finite ramp position");
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * (kStops.size() - 1);
  const std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(pos), kStops.size() - 2);
  const double frac = pos - static_cast<double>(lo);
  std::array<uint8_t, 3> out{};
  for (int k = 0; k < 3; ++k) {
    const double v = kStops[lo][k] + frac * (kStops[lo + 1][k] - kStops[lo][k]);
    out[k] = static_cast<uint8_t>(std::lround(v));
  }
  return out;
}

std::string RampHex(double t) {
  const auto c = RampColor(t);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string PlateHeatmapSvg(const SiteValueMap& values, int sites_per_well,
                            const std::string& title) {
  if (sites_per_well < 1) throw Error(ErrorCode::kInput, "sites_per_well must be >= 1");
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& [site, v] : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInput, "non-finite value at well " + site.first.Label() +
                                         " site " + std::to_string(site.second));
    }
    if (site.second < 0 || site.second >= sites_per_well) {
      throw Error(ErrorCode::kInput, "site index " + std::to_string(site.second) +
                                         " out of range at well " + site.first.Label());
    }
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  // Square sub-grid when sites_per_well is a perfect square, else a strip.
  const int side = static_cast<int>(std::lround(std::sqrt(sites_per_well)));
  const int sub_rows = side * side == sites_per_well ? side : 1;
  const int sub_cols = side * side == sites_per_well ? side : sites_per_well;
  const double sw = kCell / sub_cols;
  const double sh = kCell / sub_rows;

  const double width = kLeft + kPlateCols * kCell + 12.0;
  const double height = kTop + kPlateRows * kCell + kLegendHeight;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + F(width) +
                    "\" height=\"" + F(height) + "\" viewBox=\"0 0 " + F(width) + " " +
                    F(height) + "\">\n";
  svg += Rect(0, 0, width, height, "#ffffff");
  svg += Text(width / 2, 16, "middle", title);
  for (int c = 0; c < kPlateCols; ++c) {
    svg += Text(kLeft + (c + 0.5) * kCell, kTop - 6, "middle", std::to_string(c + 1));
  }
  for (int r = 0; r < kPlateRows; ++r) {
    svg += Text(kLeft - 6, kTop + (r + 0.5) * kCell + 4, "end",
                std::string(1, static_cast<char>('A' + r)));
  }
  for (int r = 0; r < kPlateRows; ++r) {
    for (int c = 0; c < kPlateCols; ++c) {
      const WellAddress well = WellAddress::Make(r, c);
      for (int s = 0; s < sites_per_well; ++s) {
        const double x = kLeft + c * kCell + (s % sub_cols) * sw;
        const double y = kTop + r * kCell + (s / sub_cols) * sh;
        const auto it = values.find({well, s});
        std::string fill = kMissingColor;
        if (it != values.end()) {
          const double t = hi > lo ? (it->second - lo) / (hi - lo) : 0.5;
          fill = RampHex(t);
        }
        svg += Rect(x, y, sw, sh, fill);
      }
    }
  }
  // Grid lines between wells.
  for (int c = 0; c <= kPlateCols; ++c) {
    const double x = kLeft + c * kCell;
    svg += "<line x1=\"" + F(x) + "\" y1=\"" + F(kTop) + "\" x2=\"" + F(x) + "\" y2=\"" +
           F(kTop + kPlateRows * kCell) + "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
  }
  for (int r = 0; r <= kPlateRows; ++r) {
    const double y = kTop + r * kCell;
    svg += "<line x1=\"" + F(kLeft) + "\" y1=\"" + F(y) + "\" x2=\"" +
           F(kLeft + kPlateCols * kCell) + "\" y2=\"" + F(y) +
           "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
  }
  // Legend.
  const double ly = kTop + kPlateRows * kCell + 16;
  const int steps = 32;
  const double lw = kPlateCols * kCell / 2;
  for (int i = 0; i < steps; ++i) {
    svg += Rect(kLeft + i * lw / steps, ly, lw / steps, 12,
                RampHex(static_cast<double>(i) / (steps - 1)));
  }
  svg += Text(kLeft, ly + 28, "start", any ? "min " + F(lo) : "no data");
  svg += Text(kLeft + lw, ly + 28, "end", any ? "max " + F(hi) : "");
  svg += "</svg>\n";
  return svg;
}

}  // namespace plateaudit::imaging
