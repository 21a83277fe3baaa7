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

// Coverage planning: ring decomposition, per-ring boundary scans with
// inward excursions, the transfer segment joining the rings, the composed
// polygon-guided plan, a nearest-target greedy baseline, and replanning from
// a mid-mission fleet state.
//
// Formation layout. UAV 0 (the leader) flies the outer boundary of every
// ring. UAV j nominally sits at depth j*s behind the leader along the
// current inward normal, where s is the lane spacing (the transmission range
// unless overridden). Where exact lane positions are not needed the inner
// UAVs follow under two hard limits: stay within s of UAV j-1, and never move
// farther than the leader in the same leg. The second limit keeps every
// inner path no longer than the leader's, so the fleet cost is the leader's
// length.

#ifndef COUAV_PLANNER_HPP_
#define COUAV_PLANNER_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "couav/geometry.hpp"
#include "couav/model.hpp"

namespace couav {

inline constexpr double kLineTolerance = 1e-6;  // metres, along-edge grouping

struct PlannerOptions {
  std::optional<double> spacing;  // lane spacing; defaults to fleet.w
  double eps_cov = kDefaultCoverageEps;
  double separation = 0.4;  // kept between UAVs where the formation has slack, x spacing

  double lane_spacing(const FleetConfig& fleet) const;
};

struct RingRegion {
  int round_index = 0;
  ConvexPolygond outer{{Point2d::Zero()}};
  std::optional<ConvexPolygond> inner;
  std::vector<Point2d> targets;
  std::vector<std::size_t> target_indices;  // into the planned target list
  Point2d entry = Point2d::Zero();
};

struct ScanMember {
  Point2d point;
  double depth = 0;
  int lane = 0;  // lane that passes the member
};

struct ScanGroup {
  std::size_t edge_index = 0;
  double along = 0;
  std::vector<ScanMember> members;
  double excursion = 0;
};

/// One leader position in a ring tour. `lanes_required` is the number of
/// lanes (leader included) that must sit exactly on `normal` here.
struct Keyframe {
  Point2d leader = Point2d::Zero();
  Point2d normal = Point2d::UnitY();  // formation direction, unit length
  int lanes_required = 0;
};

struct RingScan {
  std::vector<Keyframe> tour;  // starts and ends at the ring entry
  Waypoints waypoints;
  double cost = 0;  // boundary perimeter + 2 * excursions
};

struct Plan {
  Waypoints waypoints;
  PlanReport report;
  std::vector<RingRegion> rings;
  std::vector<std::vector<ScanGroup>> groups;
};

std::vector<RingRegion> decompose_rings(std::span<const Point2d> targets,
                                        const FleetConfig& fleet,
                                        const PlannerOptions& options = {});

/// Depth of `depth` past the last lane it reaches, snapped to zero when a lane
/// already passes within eps_cov. `lanes` is the fleet size.
double lane_excursion(double depth, double spacing, int lanes, double eps_cov);

std::vector<ScanGroup> scan_groups(const RingRegion& ring, const FleetConfig& fleet,
                                   const PlannerOptions& options = {});

RingScan psta_scan(const RingRegion& ring, const FleetConfig& fleet,
                   const PlannerOptions& options = {});

struct TransferPath {
  std::vector<Point2d> entries;  // c_1 .. c_K
  double length = 0;
};

/// Fills in `entry` of every ring and returns the entries with the transfer
/// length.
TransferPath transfer_path(std::vector<RingRegion>& rings);

Plan psa_plan(const Instance& instance, const PlannerOptions& options = {});

double lower_bound(const Plan& plan);

/// Greedy baseline. The formation starts with the leader on `start`, or on
/// the lowest-x (then lowest-y) target when no start is given.
Plan greedy_plan(const Instance& instance, const PlannerOptions& options = {},
                 std::optional<Point2d> start = std::nullopt);

/// Plans the unvisited targets from the current fleet positions. Unless the
/// fleet already sits in formation at the new entry point, every UAV first
/// flies straight to its slot there; the leader's part of that leg counts as
/// transfer, and an inner UAV with a longer regroup leg can then exceed the
/// leader's length.
Plan replan(const Instance& instance, const std::set<std::size_t>& visited,
            std::span<const Point2d> fleet_positions, const PlannerOptions& options = {});

/// Places the inner UAVs along a leader tour (see the file comment). When
/// `start` is given it fixes every UAV's initial position; with
/// `free_first_leg` the first leg moves every UAV straight to its slot.
/// Where a lane need not be exact, a UAV whose leg would pass closer than
/// `min_separation` to a lower-indexed one is moved elsewhere inside its
/// allowed region.
Waypoints place_formation(std::span<const Keyframe> tour, int m, double spacing,
                          std::span<const Point2d> start = {}, bool free_first_leg = false,
                          double min_separation = 0);

}  // namespace couav

#endif  // COUAV_PLANNER_HPP_
