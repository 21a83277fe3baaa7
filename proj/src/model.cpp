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

#include "couav/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace couav {
namespace {

constexpr double kZeroLength = 1e-12;

std::size_t steps_for(double length, double d_max) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / d_max - 1e-9)));
}

void check_waypoints(const Waypoints& waypoints, const FleetConfig& fleet) {
  if (waypoints.empty()) throw Error("no waypoint lists");
  if (!(fleet.d_max > 0)) throw Error("d_max must be positive");
  for (const auto& list : waypoints) {
    if (list.empty()) throw Error("empty waypoint list");
  }
}

void pad_to_common_length(std::vector<Trajectory>& trajs) {
  std::size_t horizon = 0;
  for (const auto& t : trajs) horizon = std::max(horizon, t.slots.size());
  for (auto& t : trajs) t.slots.resize(horizon, t.slots.back());
}

}  // namespace

void FleetConfig::validate() const {
  if (m < 1) throw Error("fleet.m must be at least 1");
  if (!(w > 0)) throw Error("fleet.w must be positive");
  if (!(d_max > 0)) throw Error("fleet.d_max must be positive");
  if (!(cruise_speed > 0)) throw Error("fleet.speed must be positive");
  if (!(battery_capacity >= 0)) throw Error("fleet.battery_j must be non-negative");
}

void Instance::validate() const {
  fleet.validate();
  if (!(area.width > 0) || !(area.height > 0)) throw Error("area dimensions must be positive");
  if (targets.empty()) throw Error("instance has no targets");
  const double tol = coincidence_tolerance<double>();
  for (const auto& p : targets) {
    if (!is_finite<double>(p)) throw Error("non-finite target coordinate");
    if (p.x() < -tol || p.y() < -tol || p.x() > area.width + tol || p.y() > area.height + tol) {
      throw Error("target outside the area");
    }
  }
}

std::vector<Trajectory> discretize(const Waypoints& waypoints, const FleetConfig& fleet) {
  check_waypoints(waypoints, fleet);
  std::vector<Trajectory> trajs;
  for (std::size_t j = 0; j < waypoints.size(); ++j) {
    Trajectory traj{static_cast<int>(j), {waypoints[j].front()}};
    for (std::size_t k = 1; k < waypoints[j].size(); ++k) {
      const Point2d& a = waypoints[j][k - 1];
      const Point2d& b = waypoints[j][k];
      const double len = (b - a).norm();
      if (len <= kZeroLength) continue;
      const std::size_t steps = steps_for(len, fleet.d_max);
      for (std::size_t s = 1; s < steps; ++s) {
        traj.slots.push_back(a + (static_cast<double>(s) * fleet.d_max / len) * (b - a));
      }
      traj.slots.push_back(b);
    }
    trajs.push_back(std::move(traj));
  }
  pad_to_common_length(trajs);
  return trajs;
}

std::vector<Trajectory> discretize_synchronized(const Waypoints& waypoints,
                                                const FleetConfig& fleet) {
  check_waypoints(waypoints, fleet);
  const std::size_t frames = waypoints.front().size();
  for (const auto& list : waypoints) {
    if (list.size() != frames) throw Error("waypoint lists are not keyframe-aligned");
  }
  std::vector<Trajectory> trajs;
  for (std::size_t j = 0; j < waypoints.size(); ++j) {
    trajs.push_back({static_cast<int>(j), {waypoints[j].front()}});
  }
  for (std::size_t k = 1; k < frames; ++k) {
    double longest = 0;
    for (const auto& list : waypoints) longest = std::max(longest, (list[k] - list[k - 1]).norm());
    if (longest <= kZeroLength) continue;
    const std::size_t steps = steps_for(longest, fleet.d_max);
    for (std::size_t j = 0; j < waypoints.size(); ++j) {
      const Point2d& a = waypoints[j][k - 1];
      const Point2d& b = waypoints[j][k];
      for (std::size_t s = 1; s < steps; ++s) {
        trajs[j].slots.push_back(a + (static_cast<double>(s) / static_cast<double>(steps)) * (b - a));
      }
      trajs[j].slots.push_back(b);
    }
  }
  return trajs;
}

std::vector<SlotViolation> check_speed(std::span<const Trajectory> trajs, double d_max) {
  std::vector<SlotViolation> out;
  for (const auto& traj : trajs) {
    for (std::size_t t = 0; t + 1 < traj.slots.size(); ++t) {
      const double step = (traj.slots[t + 1] - traj.slots[t]).norm();
      if (step > d_max + kConstraintSlack) out.push_back({traj.uav_id, t, step});
    }
  }
  return out;
}

std::vector<SlotViolation> check_connectivity(std::span<const Trajectory> trajs, double w) {
  std::vector<SlotViolation> out;
  if (trajs.empty()) return out;
  const std::size_t horizon = trajs.front().slots.size();
  for (const auto& traj : trajs) {
    if (traj.slots.size() != horizon) throw Error("trajectory length mismatch");
  }
  if (trajs.size() < 2) return out;
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < trajs.size(); ++j) {
        if (i != j) nearest = std::min(nearest, (trajs[i].slots[t] - trajs[j].slots[t]).norm());
      }
      if (nearest > w + kConstraintSlack) out.push_back({trajs[i].uav_id, t, nearest});
    }
  }
  return out;
}

std::vector<SlotViolation> check_station_link(std::span<const Trajectory> trajs,
                                              const Point2d& station, double range) {
  std::vector<SlotViolation> out;
  if (trajs.empty()) return out;
  const std::size_t horizon = trajs.front().slots.size();
  for (std::size_t t = 0; t < horizon; ++t) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& traj : trajs) nearest = std::min(nearest, (traj.slots.at(t) - station).norm());
    if (nearest > range + kConstraintSlack) out.push_back({-1, t, nearest});
  }
  return out;
}

std::vector<std::size_t> check_coverage(std::span<const Trajectory> trajs,
                                        std::span<const Point2d> targets, double eps_cov) {
  if (!(eps_cov > 0)) throw Error("coverage tolerance must be positive");
  std::vector<std::size_t> uncovered;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    bool covered = false;
    for (const auto& traj : trajs) {
      if (traj.slots.size() == 1) {
        covered = (traj.slots.front() - targets[i]).norm() <= eps_cov;
      }
      for (std::size_t t = 0; !covered && t + 1 < traj.slots.size(); ++t) {
        covered = segment_distance<double>(targets[i], traj.slots[t], traj.slots[t + 1]) <= eps_cov;
      }
      if (covered) break;
    }
    if (!covered) uncovered.push_back(i);
  }
  return uncovered;
}

FleetCost fleet_cost(std::span<const Trajectory> trajs) {
  FleetCost cost;
  for (const auto& traj : trajs) {
    const double len = polyline_length<double>(traj.slots);
    cost.per_uav.push_back(len);
    cost.fleet = std::max(cost.fleet, len);
  }
  return cost;
}

ValidationReport validate_waypoints(const Instance& instance, const Waypoints& waypoints,
                                    double eps_cov) {
  if (static_cast<int>(waypoints.size()) != instance.fleet.m) {
    throw Error("plan has " + std::to_string(waypoints.size()) + " UAVs but the fleet has " +
                std::to_string(instance.fleet.m));
  }
  const bool aligned = std::all_of(waypoints.begin(), waypoints.end(), [&](const auto& list) {
    return list.size() == waypoints.front().size();
  });
  const std::vector<Trajectory> trajs = aligned ? discretize_synchronized(waypoints, instance.fleet)
                                                : discretize(waypoints, instance.fleet);
  ValidationReport report;
  report.speed = check_speed(trajs, instance.fleet.d_max);
  report.connectivity = check_connectivity(trajs, instance.fleet.w);
  report.uncovered = check_coverage(trajs, instance.targets, eps_cov);
  report.cost = fleet_cost(trajs);
  report.slots = trajs.front().slots.size();
  return report;
}

}  // namespace couav
