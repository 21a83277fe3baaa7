// Copyright 2026 The CoUAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "couav/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace couav {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

const char* colour(std::size_t i) { return kPalette[i % kPalette.size()]; }

struct Frame {
  double x0 = 0, y0 = 0, scale = 1, margin = 20, height = 0;

  std::string at(const Point2d& p) const {
    return fmt::format("{:.3f},{:.3f}", margin + (p.x() - x0) * scale,
                       height - margin - (p.y() - y0) * scale);
  }
};

std::string polyline(const Frame& f, std::span<const Point2d> pts, const char* stroke,
                     std::string_view extra) {
  std::string out = "<polyline fill=\"none\" stroke=\"";
  out += stroke;
  out += "\" ";
  out += extra;
  out += " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += f.at(pts[i]);
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string render_scene(const Instance& instance, const Waypoints& planned,
                         std::span<const std::vector<Point2d>> flown,
                         std::span<const RingRegion> rings) {
  double lo_x = 0, lo_y = 0, hi_x = instance.area.width, hi_y = instance.area.height;
  auto grow = [&](const Point2d& p) {
    lo_x = std::min(lo_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_x = std::max(hi_x, p.x());
    hi_y = std::max(hi_y, p.y());
  };
  for (const auto& path : planned) std::for_each(path.begin(), path.end(), grow);
  for (const auto& path : flown) std::for_each(path.begin(), path.end(), grow);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  Frame f;
  f.x0 = lo_x;
  f.y0 = lo_y;
  f.scale = 760.0 / span;
  const double width = 2 * f.margin + (hi_x - lo_x) * f.scale;
  f.height = 2 * f.margin + (hi_y - lo_y) * f.scale;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.3f} {:.3f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      std::ceil(width), std::ceil(f.height), width, f.height);
  const std::vector<Point2d> border{{0, 0},
                                    {instance.area.width, 0},
                                    {instance.area.width, instance.area.height},
                                    {0, instance.area.height},
                                    {0, 0}};
  out += polyline(f, border, "#999999", "stroke-width=\"1\"");
  for (const RingRegion& ring : rings) {
    std::vector<Point2d> hull(ring.outer.vertices().begin(), ring.outer.vertices().end());
    hull.push_back(hull.front());
    out += polyline(f, hull, "#bbbbbb", "stroke-width=\"1\" stroke-dasharray=\"2 3\"");
  }
  for (std::size_t j = 0; j < planned.size(); ++j) {
    out += polyline(f, planned[j], colour(j),
                    "stroke-width=\"1.5\" stroke-dasharray=\"6 4\" stroke-opacity=\"0.7\"");
  }
  for (std::size_t j = 0; j < flown.size(); ++j) {
    out += polyline(f, flown[j], colour(j), "stroke-width=\"1\"");
  }
  for (const Point2d& p : instance.targets) {
    const std::string at = f.at(p);
    const auto comma = at.find(',');
    out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>\n",
                       at.substr(0, comma), at.substr(comma + 1));
  }
  out += "</svg>\n";
  return out;
}

std::string render_chart(std::string_view title, std::string_view x_label,
                         std::span<const double> xs, std::span<const ChartSeries> series) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  double top = 0;
  for (const ChartSeries& s : series) {
    for (double v : s.values) top = std::max(top, v);
  }
  if (!(top > 0)) top = 1;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kW, kH, kW / 2, title);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                     kLeft, kTop, kTop + plot_h);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                     kLeft, kTop + plot_h, kLeft + plot_w);
  for (int t = 0; t <= 4; ++t) {
    const double v = top * t / 4;
    const double y = kTop + plot_h - plot_h * t / 4;
    out += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.0f}</text>\n", kLeft - 6, y + 4, v);
  }
  const double group = plot_w / std::max<std::size_t>(1, xs.size());
  const double bar = group * 0.8 / std::max<std::size_t>(1, series.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double gx = kLeft + i * group + group * 0.1;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = i < series[s].values.size() ? series[s].values[i] : 0.0;
      const double h = plot_h * v / top;
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
          gx + s * bar, kTop + plot_h - h, bar, h, colour(s));
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n",
                       gx + group * 0.4, kTop + plot_h + 16, xs[i]);
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, kH - 18, x_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double lx = kLeft + 10 + s * 110;
    out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                       lx, kH - 14.0, colour(s));
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 14, kH - 5.0,
                       series[s].name);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace couav
