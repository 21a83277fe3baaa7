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

// Self-contained SVG output: mission scenes (targets, rings, planned and
// flown paths) and grouped bar charts for benchmark sweeps.

#ifndef COUAV_SVG_HPP_
#define COUAV_SVG_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "couav/model.hpp"
#include "couav/planner.hpp"

namespace couav {

/// Planned paths are dashed, flown paths solid; one colour per UAV.
std::string render_scene(const Instance& instance, const Waypoints& planned,
                         std::span<const std::vector<Point2d>> flown = {},
                         std::span<const RingRegion> rings = {});

struct ChartSeries {
  std::string name;
  std::vector<double> values;  // one per x value
};

std::string render_chart(std::string_view title, std::string_view x_label,
                         std::span<const double> xs, std::span<const ChartSeries> series);

}  // namespace couav

#endif  // COUAV_SVG_HPP_
