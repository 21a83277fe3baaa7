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

// Problem formulation: fleet and instance types, slotted trajectories, and
// the speed / connectivity / coverage constraint checks plus the min-max cost.

#ifndef COUAV_MODEL_HPP_
#define COUAV_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "couav/geometry.hpp"

namespace couav {

inline constexpr double kDefaultCoverageEps = 0.5;  // metres
inline constexpr double kConstraintSlack = 1e-6;    // metres

struct FleetConfig {
  int m = 1;                    // number of UAVs
  double w = 10.0;              // transmission range, metres
  double d_max = 1.0;           // metres per time slot
  double cruise_speed = 4.0;    // m/s
  double battery_capacity = 0;  // joules per UAV

  void validate() const;
};

struct Area {
  double width = 0;
  double height = 0;
};

struct Instance {
  Area area;
  std::vector<Point2d> targets;
  FleetConfig fleet;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-UAV waypoint polylines. When every list has the same length, entry k
/// of each list is a formation keyframe reached by all UAVs together.
using Waypoints = std::vector<std::vector<Point2d>>;

struct Trajectory {
  int uav_id = 0;
  std::vector<Point2d> slots;  // position at slot t = slots[t]
};

struct PlanReport {
  std::vector<double> per_uav_distance;    // L_j
  double fleet_cost = 0;                   // L_fleet = max_j L_j
  int rounds = 0;                          // K
  std::vector<double> per_round_boundary;  // outer-boundary perimeter per round
  std::vector<double> per_round_cost;      // boundary + 2 * excursions per round
  double transfer = 0;
  double adjust = 0;
  double lower_bound = 0;
};

/// Walks each UAV's polyline independently, advancing d_max per slot and
/// restarting the count at every waypoint. Shorter paths hover at their end
/// so all trajectories share one slot count.
std::vector<Trajectory> discretize(const Waypoints& waypoints, const FleetConfig& fleet);

/// Keyframe-synchronised variant: all UAVs reach waypoint k at the same slot
/// and move proportionally in between (the longest leg sets the slot count).
/// Requires equal waypoint counts.
std::vector<Trajectory> discretize_synchronized(const Waypoints& waypoints,
                                                const FleetConfig& fleet);

struct SlotViolation {
  int uav = 0;
  std::size_t slot = 0;
  double distance = 0;  // offending step length or nearest-neighbour distance
};

std::vector<SlotViolation> check_speed(std::span<const Trajectory> trajs, double d_max);

/// Count form of the connectivity constraint: every UAV needs at least one
/// other UAV within `w` at every slot. Single-UAV fleets pass.
std::vector<SlotViolation> check_connectivity(std::span<const Trajectory> trajs, double w);

/// Optional link-to-station check; not part of the default validation.
std::vector<SlotViolation> check_station_link(std::span<const Trajectory> trajs,
                                              const Point2d& station, double range);

/// Indices of targets that no inter-slot segment passes within `eps_cov`.
std::vector<std::size_t> check_coverage(std::span<const Trajectory> trajs,
                                        std::span<const Point2d> targets,
                                        double eps_cov = kDefaultCoverageEps);

struct FleetCost {
  std::vector<double> per_uav;
  double fleet = 0;
};

FleetCost fleet_cost(std::span<const Trajectory> trajs);

struct ValidationReport {
  std::vector<SlotViolation> speed;
  std::vector<SlotViolation> connectivity;
  std::vector<std::size_t> uncovered;
  FleetCost cost;
  std::size_t slots = 0;

  bool clean() const { return speed.empty() && connectivity.empty() && uncovered.empty(); }
};

/// Discretises `waypoints` (synchronised when keyframe-aligned) and runs all
/// three constraint checks. Throws when the UAV count does not match.
ValidationReport validate_waypoints(const Instance& instance, const Waypoints& waypoints,
                                    double eps_cov = kDefaultCoverageEps);

}  // namespace couav

#endif  // COUAV_MODEL_HPP_
