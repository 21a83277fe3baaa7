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

// Discrete-time mission execution. Agents and the monitor exchange framed
// packets over an in-memory transport; UAV kinematics carry wind and GPS
// noise, and the monitor runs the step barrier, divergence correction and
// replanning, exception handling, collision prediction and energy tracking.

#ifndef COUAV_SIMULATOR_HPP_
#define COUAV_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "couav/energy.hpp"
#include "couav/geometry.hpp"
#include "couav/model.hpp"
#include "couav/planner.hpp"

namespace couav {

struct Gust {
  double start = 0;  // s
  double end = 0;    // s
  Point2d velocity = Point2d::Zero();
};

/// Instantaneous displacement of one UAV's true position.
struct PositionOffset {
  double t = 0;
  int uav = 0;
  Point2d delta = Point2d::Zero();
};

struct SimConfig {
  double dt = 0.1;
  double wind_sigma = 0.3;  // m/s per axis per tick
  std::optional<Gust> gust;
  double gps_sigma = 1.0;  // m per axis
  double div_correct = 3.0;
  double div_replan = 10.0;
  double collide_dist = 2.0;
  double collide_horizon = 2.0;
  std::uint64_t seed = 0;
  double status_period = 1.0;
  double arrival_tolerance = 0.1;
  double coverage_eps = kDefaultCoverageEps;  // judged on true positions
  double max_time = 0;  // 0: ten times the planned flight time plus ten minutes
  std::vector<PositionOffset> offsets;

  void validate() const;
};

struct UavState {
  Point2d true_pos = Point2d::Zero();
  Point2d reported_pos = Point2d::Zero();
  Point2d velocity = Point2d::Zero();
  double battery = 0;  // joules
  double cumulative_distance = 0;
  double cumulative_time = 0;
};

/// Distance from a reported position to a planned segment.
double segment_deviation(const Point2d& reported, const Point2d& a, const Point2d& b);

struct CollisionWarning {
  int first = 0;
  int second = 0;
  double distance = 0;
  double predicted_min = 0;  // over the horizon, constant velocities
  bool closing = false;
};

/// Pairs closer than `collide_dist` now or within `horizon` seconds under
/// linear extrapolation.
std::vector<CollisionWarning> collision_monitor(std::span<const Point2d> positions,
                                                std::span<const Point2d> velocities,
                                                double collide_dist, double horizon);

struct StatusSample {
  double t = 0;
  double flight_time = 0;
  double distance = 0;
  Point2d reported = Point2d::Zero();
  double battery = 1;  // fraction
  int step = 0;
};

struct UavSummary {
  double t = 0;       // flight time
  double d = 0;       // flown distance
  double energy = 0;  // predicted, joules
  std::size_t violations = 0;  // ticks without a neighbour in range
};

struct MissionTrace {
  double dt = 0;
  std::vector<nlohmann::ordered_json> records;
  std::vector<std::vector<Point2d>> paths;  // [uav][tick], true positions
  std::vector<std::vector<StatusSample>> status;
  std::vector<UavSummary> summary;
  std::map<std::string, int> events;
  std::vector<std::size_t> uncovered;
  std::size_t connectivity_violations = 0;  // (uav, tick) pairs
  double min_separation = std::numeric_limits<double>::infinity();
  double fleet_distance = 0;
  double duration = 0;
  bool completed = false;

  int count(const std::string& kind) const {
    auto it = events.find(kind);
    return it == events.end() ? 0 : it->second;
  }
  std::string to_ndjson() const;
  nlohmann::ordered_json summary_json() const;
};

/// Runs the waypoint plan. Every UAV starts on the ground at its first
/// waypoint. Throws when the waypoint lists do not match the fleet size.
MissionTrace run_mission(const Instance& instance, const Waypoints& waypoints,
                         const std::optional<EnergyModels>& models, const SimConfig& config,
                         const PlannerOptions& planner = {});

struct EnergyPoint {
  double t = 0;
  double flight_time = 0;
  double distance = 0;
  double energy = 0;
};

/// Predicted cumulative energy at every status sample.
std::vector<std::vector<EnergyPoint>> energy_integrate(const MissionTrace& trace,
                                                       const EnergyModels& models);

}  // namespace couav

#endif  // COUAV_SIMULATOR_HPP_
