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

#include "couav/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Geometry>

namespace couav {
namespace {

constexpr double kSamePoint = 1e-9;
constexpr double kPi = 3.14159265358979323846;

struct Disk {
  Point2d center;
  double radius;
};

bool in_disk(const Point2d& p, const Disk& d) {
  return (p - d.center).norm() <= d.radius + 1e-9 * std::max(1.0, d.radius);
}

std::vector<Point2d> circle_intersections(const Disk& a, const Disk& b) {
  const Point2d delta = b.center - a.center;
  const double dist = delta.norm();
  if (dist <= kSamePoint || dist > a.radius + b.radius || dist < std::abs(a.radius - b.radius)) {
    return {};
  }
  const double x = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2 * dist);
  const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
  const Point2d base = a.center + (x / dist) * delta;
  const Point2d off = (h / dist) * left_normal<double>(delta);
  return {base + off, base - off};
}

// Closest point to `target` inside every disk; nullopt when they do not meet.
std::optional<Point2d> closest_in_disks(const Point2d& target, std::span<const Disk> disks) {
  std::vector<Point2d> candidates{target};
  for (const Disk& d : disks) {
    const Point2d off = target - d.center;
    const double len = off.norm();
    if (len > 0) candidates.push_back(d.center + (d.radius / len) * off);
  }
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      for (const Point2d& p : circle_intersections(disks[i], disks[j])) candidates.push_back(p);
    }
  }
  std::optional<Point2d> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Point2d& c : candidates) {
    if (!std::all_of(disks.begin(), disks.end(), [&](const Disk& d) { return in_disk(c, d); })) {
      continue;
    }
    const double dist = (c - target).norm();
    if (dist < best_dist) {
      best = c;
      best_dist = dist;
    }
  }
  return best;
}

Point2d clamp_to_disk(const Point2d& p, const Disk& d) {
  const Point2d off = p - d.center;
  const double len = off.norm();
  if (len <= d.radius) return p;
  return d.center + (d.radius / len) * off;
}

// Smallest distance between two UAVs moving linearly over the same leg.
double leg_separation(const Point2d& a0, const Point2d& a1, const Point2d& b0, const Point2d& b1) {
  const Point2d p = a0 - b0;
  const Point2d v = (a1 - b1) - p;
  const double vv = v.squaredNorm();
  const double tau = vv > 0 ? std::clamp(-p.dot(v) / vv, 0.0, 1.0) : 0.0;
  return (p + tau * v).norm();
}

// Re-picks UAV j's position at frame k inside `disks` when its leg passes
// closer than `min_sep` to a UAV already placed: the closest point to `ideal`
// that keeps the distance, or else the sample that comes nearest to it.
Point2d keep_apart(const Waypoints& wp, int j, std::size_t k, const Point2d& ideal,
                   std::span<const Disk> disks, double min_sep) {
  auto separation = [&](const Point2d& c) {
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < j; ++i) {
      sep = std::min(sep, leg_separation(wp[i][k - 1], wp[i][k], wp[j][k - 1], c));
    }
    return sep;
  };
  const Point2d current = wp[j][k];
  if (separation(current) >= min_sep) return current;
  constexpr int kAngles = 32;
  constexpr int kRadii = 6;
  std::vector<Point2d> candidates{current};
  for (const Disk& d : disks) {
    for (int r = 0; r <= kRadii; ++r) {
      const double radius = d.radius * r / kRadii;
      for (int a = 0; a < (r == 0 ? 1 : kAngles); ++a) {
        const double angle = 2 * kPi * a / kAngles;
        const Point2d c = d.center + radius * Point2d(std::cos(angle), std::sin(angle));
        if (std::all_of(disks.begin(), disks.end(), [&](const Disk& e) { return in_disk(c, e); })) {
          candidates.push_back(c);
        }
      }
    }
  }
  Point2d best = current;
  double best_sep = separation(current);
  double best_dist = (current - ideal).norm();
  for (const Point2d& c : candidates) {
    const double sep = std::min(separation(c), min_sep);
    const double dist = (c - ideal).norm();
    if (sep > best_sep + 1e-12 || (sep >= best_sep - 1e-12 && dist < best_dist)) {
      best = c;
      best_sep = sep;
      best_dist = dist;
    }
  }
  return best;
}

struct LaneHit {
  int lane = 0;
  double excursion = 0;
};

LaneHit lane_for_depth(double depth, double spacing, int lanes, double eps_cov) {
  if (lanes <= 1) return {0, depth < eps_cov ? 0.0 : depth};
  int lane = static_cast<int>(std::floor(depth / spacing));
  lane = std::clamp(lane, 0, lanes - 1);
  const double rest = std::max(0.0, depth - lane * spacing);
  if (rest < eps_cov) return {lane, 0.0};
  if (lane + 1 < lanes && spacing - rest < eps_cov) return {lane + 1, 0.0};
  return {lane, rest};
}

struct TourPoint {
  Keyframe frame;
  bool corner = false;
  Point2d in_normal = Point2d::Zero();    // incoming normal at a corner
  Point2d next_normal = Point2d::Zero();  // outgoing normal at a corner
};

void push_merged(std::vector<TourPoint>& tour, const TourPoint& tp) {
  if (!tour.empty() && (tour.back().frame.leader - tp.frame.leader).norm() <= kSamePoint) {
    TourPoint& last = tour.back();
    if (tp.frame.lanes_required > last.frame.lanes_required) {
      last.frame.normal = tp.frame.normal;
      last.frame.lanes_required = tp.frame.lanes_required;
    }
    if (tp.corner && !last.corner) {
      last.corner = true;
      last.in_normal = tp.in_normal;
      last.next_normal = tp.next_normal;
    }
    return;
  }
  tour.push_back(tp);
}

// Direction of the soft lanes at a corner: rotate from the incoming normal
// toward the outgoing one by as much as both adjacent legs can pay for.
void aim_corners(std::vector<TourPoint>& tour, int m, double spacing) {
  if (m < 2) return;
  const double reach = (m - 1) * spacing;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    TourPoint& tp = tour[i];
    if (!tp.corner || tp.frame.lanes_required > 1) continue;
    const Point2d& n_in = tp.in_normal;
    const double turn = std::atan2(cross<double>(n_in, tp.next_normal), n_in.dot(tp.next_normal));
    const double before = i > 0 ? (tp.frame.leader - tour[i - 1].frame.leader).norm() : 0.0;
    const double after =
        i + 1 < tour.size() ? (tour[i + 1].frame.leader - tp.frame.leader).norm() : 0.0;
    const double lo = std::max(0.0, turn - 2 * std::atan(after / reach));
    const double hi = std::min(turn, 2 * std::atan(before / reach));
    const double theta = lo <= hi ? 0.5 * (lo + hi) : lo;
    const Eigen::Rotation2Dd rot(theta);
    tp.frame.normal = (rot * n_in).normalized();
  }
}

std::vector<Keyframe> frames_of(const std::vector<TourPoint>& tour) {
  std::vector<Keyframe> out;
  out.reserve(tour.size());
  for (const auto& tp : tour) out.push_back(tp.frame);
  return out;
}

// Edge index and along-coordinate of a boundary point, preferring the edge
// that starts at it when it is a vertex.
std::pair<std::size_t, double> locate_on_boundary(const ConvexPolygond& poly, const Point2d& p) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    const double d = segment_distance<double>(p, poly.edge_start(i), poly.edge_end(i));
    if (d < best_dist - 1e-12) {
      best = i;
      best_dist = d;
    }
  }
  double along = std::clamp((p - poly.edge_start(best)).dot(poly.edge_direction(best)), 0.0,
                            poly.edge_length(best));
  if (along >= poly.edge_length(best) - kSamePoint) {
    best = (best + 1) % poly.edge_count();
    along = 0;
  }
  return {best, along};
}

struct RingTour {
  std::vector<TourPoint> points;
  double cost = 0;
};

RingTour build_ring_tour(const RingRegion& ring, const std::vector<ScanGroup>& groups, int m,
                         double spacing) {
  RingTour tour;
  const ConvexPolygond& poly = ring.outer;
  if (poly.kind() == PolygonKind::kPoint) {
    tour.points.push_back({{ring.entry, Point2d::UnitY(), 1}, false, {}, {}});
    for (const auto& g : groups) tour.cost += 2 * g.excursion;
    return tour;
  }

  const auto [e0, a0] = locate_on_boundary(poly, ring.entry);
  const std::size_t edges = poly.edge_count();
  std::vector<std::vector<const ScanGroup*>> by_edge(edges);
  for (const auto& g : groups) by_edge[g.edge_index].push_back(&g);
  for (auto& list : by_edge) {
    std::sort(list.begin(), list.end(),
              [](const ScanGroup* a, const ScanGroup* b) { return a->along < b->along; });
  }

  auto required = [](const ScanGroup& g) {
    int lanes = 1;
    for (const auto& mem : g.members) lanes = std::max(lanes, mem.lane + 1);
    return lanes;
  };
  auto emit_group = [&](const ScanGroup& g) {
    const Point2d n = poly.inward_normal(g.edge_index);
    const Point2d base = poly.edge_start(g.edge_index) + g.along * poly.edge_direction(g.edge_index);
    const int lanes = required(g);
    push_merged(tour.points, {{base, n, lanes}, false, {}, {}});
    if (g.excursion > 0) {
      push_merged(tour.points, {{base + g.excursion * n, n, lanes}, false, {}, {}});
      push_merged(tour.points, {{base, n, lanes}, false, {}, {}});
    }
    tour.cost += 2 * g.excursion;
  };
  auto emit_corner = [&](std::size_t edge) {
    const Point2d n_in = poly.inward_normal(edge);
    push_merged(tour.points,
                {{poly.edge_end(edge), n_in, 1}, true, n_in, poly.inward_normal((edge + 1) % edges)});
  };

  push_merged(tour.points, {{ring.entry, poly.inward_normal(e0), 1}, false, {}, {}});
  for (const ScanGroup* g : by_edge[e0]) {
    if (g->along >= a0 - kSamePoint) emit_group(*g);
  }
  emit_corner(e0);
  for (std::size_t step = 1; step < edges; ++step) {
    const std::size_t e = (e0 + step) % edges;
    for (const ScanGroup* g : by_edge[e]) emit_group(*g);
    emit_corner(e);
  }
  for (const ScanGroup* g : by_edge[e0]) {
    if (g->along < a0 - kSamePoint) emit_group(*g);
  }
  push_merged(tour.points, {{ring.entry, poly.inward_normal(e0), 1}, false, {}, {}});
  tour.cost += perimeter(poly);
  aim_corners(tour.points, m, spacing);
  return tour;
}

void fill_costs(Plan& plan) {
  plan.report.per_uav_distance.clear();
  plan.report.fleet_cost = 0;
  for (const auto& list : plan.waypoints) {
    const double len = polyline_length<double>(list);
    plan.report.per_uav_distance.push_back(len);
    plan.report.fleet_cost = std::max(plan.report.fleet_cost, len);
  }
}

struct PsaParts {
  Plan plan;
  std::vector<TourPoint> tour;
};

PsaParts build_psa(std::span<const Point2d> targets, const FleetConfig& fleet,
                   const PlannerOptions& options) {
  const double spacing = options.lane_spacing(fleet);
  PsaParts parts;
  Plan& plan = parts.plan;
  plan.rings = decompose_rings(targets, fleet, options);
  const TransferPath transfer = transfer_path(plan.rings);
  for (const auto& ring : plan.rings) {
    plan.groups.push_back(scan_groups(ring, fleet, options));
    RingTour tour = build_ring_tour(ring, plan.groups.back(), fleet.m, spacing);
    if (ring.outer.kind() == PolygonKind::kPoint && !parts.tour.empty()) {
      // A point has no inward side; keep the formation's heading.
      tour.points.front().frame.normal = parts.tour.back().frame.normal;
    }
    for (const auto& tp : tour.points) push_merged(parts.tour, tp);
    const double boundary = perimeter(ring.outer);
    plan.report.per_round_boundary.push_back(boundary);
    plan.report.per_round_cost.push_back(tour.cost);
    plan.report.adjust += tour.cost - boundary;
    plan.report.lower_bound += boundary;
  }
  plan.report.rounds = static_cast<int>(plan.rings.size());
  plan.report.transfer = transfer.length;
  plan.report.lower_bound += transfer.length;
  aim_corners(parts.tour, fleet.m, spacing);
  return parts;
}

}  // namespace

double PlannerOptions::lane_spacing(const FleetConfig& fleet) const {
  const double s = spacing.value_or(fleet.w);
  if (!(s > 0) || s > fleet.w + kConstraintSlack) {
    throw Error("lane spacing must be positive and no larger than the transmission range");
  }
  return s;
}

std::vector<RingRegion> decompose_rings(std::span<const Point2d> targets,
                                        const FleetConfig& fleet,
                                        const PlannerOptions& options) {
  if (targets.empty()) throw Error("empty point set");
  for (const auto& p : targets) {
    if (!is_finite<double>(p)) throw Error("non-finite target coordinate");
  }
  const double band = (fleet.m - 1) * options.lane_spacing(fleet);
  std::vector<std::size_t> remaining(targets.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<RingRegion> rings;
  while (!remaining.empty()) {
    std::vector<Point2d> pts;
    for (std::size_t i : remaining) pts.push_back(targets[i]);
    RingRegion ring;
    ring.round_index = static_cast<int>(rings.size()) + 1;
    ring.outer = convex_hull<double>(pts);
    if (band > 0) {
      ring.inner = inward_offset<double>(ring.outer, band);
    } else if (!ring.outer.degenerate()) {
      ring.inner = ring.outer;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i : remaining) {
      if (ring_membership<double>(targets[i], ring.outer, ring.inner)) {
        ring.targets.push_back(targets[i]);
        ring.target_indices.push_back(i);
      } else {
        rest.push_back(i);
      }
    }
    if (ring.targets.empty()) throw Error("ring decomposition made no progress");
    remaining = std::move(rest);
    rings.push_back(std::move(ring));
  }
  return rings;
}

double lane_excursion(double depth, double spacing, int lanes, double eps_cov) {
  return lane_for_depth(depth, spacing, lanes, eps_cov).excursion;
}

std::vector<ScanGroup> scan_groups(const RingRegion& ring, const FleetConfig& fleet,
                                   const PlannerOptions& options) {
  const double spacing = options.lane_spacing(fleet);
  struct Projected {
    std::size_t edge;
    double along;
    ScanMember member;
  };
  std::vector<Projected> projected;
  for (const Point2d& p : ring.targets) {
    if (!ring_membership<double>(p, ring.outer, ring.inner)) throw Error("target outside the ring");
    const EdgeProjection<double> proj = project_onto_boundary<double>(p, ring.outer);
    const LaneHit hit = lane_for_depth(proj.depth, spacing, fleet.m, options.eps_cov);
    double along = proj.along;
    if (ring.outer.kind() != PolygonKind::kPoint) {
      along = std::clamp(along, 0.0, ring.outer.edge_length(proj.edge_index));
    }
    projected.push_back({proj.edge_index, along, {p, proj.depth, hit.lane}});
  }
  std::sort(projected.begin(), projected.end(), [](const Projected& a, const Projected& b) {
    return a.edge < b.edge || (a.edge == b.edge && a.along < b.along);
  });
  std::vector<ScanGroup> groups;
  for (const auto& pr : projected) {
    if (groups.empty() || groups.back().edge_index != pr.edge ||
        pr.along - groups.back().along > kLineTolerance) {
      groups.push_back({pr.edge, pr.along, {}, 0});
    }
    groups.back().members.push_back(pr.member);
    groups.back().excursion = std::max(
        groups.back().excursion,
        lane_for_depth(pr.member.depth, spacing, fleet.m, options.eps_cov).excursion);
  }
  return groups;
}

RingScan psta_scan(const RingRegion& ring, const FleetConfig& fleet,
                   const PlannerOptions& options) {
  const double spacing = options.lane_spacing(fleet);
  const RingTour tour = build_ring_tour(ring, scan_groups(ring, fleet, options), fleet.m, spacing);
  RingScan scan;
  scan.tour = frames_of(tour.points);
  scan.cost = tour.cost;
  scan.waypoints = place_formation(scan.tour, fleet.m, spacing, {}, false,
                                   options.separation * spacing);
  return scan;
}

TransferPath transfer_path(std::vector<RingRegion>& rings) {
  if (rings.empty()) throw Error("no rings to connect");
  TransferPath path;
  const ConvexPolygond& first = rings.front().outer;
  if (rings.size() == 1) {
    const auto& pts = rings.front().targets;
    Point2d centroid = Point2d::Zero();
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());
    rings.front().entry = distance_to_boundary<double>(centroid, first).closest;
    path.entries.push_back(rings.front().entry);
    return path;
  }
  const ConvexPolygond& last = rings.back().outer;
  Point2d best_vertex = last.vertex(0);
  BoundaryDistance<double> best{std::numeric_limits<double>::infinity(), first.vertex(0)};
  for (const Point2d& v : last.vertices()) {
    const BoundaryDistance<double> d = distance_to_boundary<double>(v, first);
    if (d.distance < best.distance - 1e-12) {
      best = d;
      best_vertex = v;
    }
  }
  path.length = best.distance;
  rings.front().entry = best.closest;
  rings.back().entry = best_vertex;
  for (std::size_t k = 1; k + 1 < rings.size(); ++k) {
    const auto hits = segment_polygon_intersection<double>(best.closest, best_vertex, rings[k].outer);
    rings[k].entry =
        hits.empty() ? distance_to_boundary<double>(best_vertex, rings[k].outer).closest : hits.front();
  }
  for (const auto& ring : rings) path.entries.push_back(ring.entry);
  return path;
}

Waypoints place_formation(std::span<const Keyframe> tour, int m, double spacing,
                          std::span<const Point2d> start, bool free_first_leg,
                          double min_separation) {
  if (tour.empty()) throw Error("empty tour");
  if (m < 1) throw Error("fleet.m must be at least 1");
  if (!start.empty() && static_cast<int>(start.size()) != m) {
    throw Error("start positions do not match the fleet size");
  }
  const std::size_t frames = tour.size();
  std::vector<double> travelled(frames, 0.0);
  for (std::size_t k = 1; k < frames; ++k) {
    travelled[k] = travelled[k - 1] + (tour[k].leader - tour[k - 1].leader).norm();
  }
  // next_required[j][k]: first frame after k where lane j must be exact.
  std::vector<std::vector<std::size_t>> next_required(m, std::vector<std::size_t>(frames, frames));
  for (int j = 1; j < m; ++j) {
    for (std::size_t k = frames - 1; k-- > 0;) {
      next_required[j][k] = tour[k + 1].lanes_required > j ? k + 1 : next_required[j][k + 1];
    }
  }
  auto ideal = [&](int j, std::size_t k) -> Point2d {
    return tour[k].leader + (j * spacing) * tour[k].normal;
  };

  Waypoints wp(m, std::vector<Point2d>(frames));
  for (int j = 0; j < m; ++j) {
    wp[j][0] = start.empty() ? ideal(j, 0) : start[j];
  }
  for (std::size_t k = 1; k < frames; ++k) {
    const double leg = travelled[k] - travelled[k - 1];
    wp[0][k] = tour[k].leader;
    for (int j = 1; j < m; ++j) {
      if (k == 1 && free_first_leg) {
        wp[j][k] = ideal(j, k);
        continue;
      }
      const Disk budget{wp[j][k - 1], leg};
      const Disk tether{wp[j - 1][k], spacing};
      std::vector<Disk> disks{budget, tether};
      const std::size_t nr = next_required[j][k];
      if (nr < frames) disks.push_back({ideal(j, nr), travelled[nr] - travelled[k]});
      std::optional<Point2d> pick = closest_in_disks(ideal(j, k), disks);
      if (!pick && disks.size() == 3) {
        disks.pop_back();
        pick = closest_in_disks(ideal(j, k), disks);
      }
      if (!pick) {
        wp[j][k] = clamp_to_disk(clamp_to_disk(tether.center, budget), budget);
        continue;
      }
      wp[j][k] = clamp_to_disk(*pick, budget);
      if (min_separation > 0 && tour[k].lanes_required <= j) {
        wp[j][k] = clamp_to_disk(keep_apart(wp, j, k, ideal(j, k), disks, min_separation), budget);
      }
    }
  }
  return wp;
}

Plan psa_plan(const Instance& instance, const PlannerOptions& options) {
  instance.validate();
  PsaParts parts = build_psa(instance.targets, instance.fleet, options);
  const double spacing = options.lane_spacing(instance.fleet);
  parts.plan.waypoints = place_formation(frames_of(parts.tour), instance.fleet.m, spacing, {},
                                         false, options.separation * spacing);
  fill_costs(parts.plan);
  return std::move(parts.plan);
}

double lower_bound(const Plan& plan) {
  double total = plan.report.transfer;
  for (const auto& ring : plan.rings) total += perimeter(ring.outer);
  return total;
}

Plan greedy_plan(const Instance& instance, const PlannerOptions& options,
                 std::optional<Point2d> start) {
  instance.validate();
  const int m = instance.fleet.m;
  const double spacing = options.lane_spacing(instance.fleet);
  const auto& targets = instance.targets;
  if (!start) {
    start = *std::min_element(targets.begin(), targets.end(), [](const Point2d& a, const Point2d& b) {
      return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
  }
  std::vector<Point2d> pos(m);
  for (int j = 0; j < m; ++j) pos[j] = *start + Point2d(0, j * spacing);

  Plan plan;
  plan.waypoints.assign(m, {});
  for (int j = 0; j < m; ++j) plan.waypoints[j].push_back(pos[j]);
  std::vector<bool> visited(targets.size(), false);
  std::size_t left = targets.size();
  auto sweep = [&](const std::vector<Point2d>& from) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (visited[i]) continue;
      for (int j = 0; j < m; ++j) {
        if (segment_distance<double>(targets[i], from[j], pos[j]) <= options.eps_cov) {
          visited[i] = true;
          --left;
          break;
        }
      }
    }
  };
  sweep(pos);
  while (left > 0) {
    std::size_t pick = targets.size();
    int lane = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (visited[i]) continue;
      for (int j = 0; j < m; ++j) {
        const double d = (targets[i] - pos[j]).norm();
        if (d < best) {
          best = d;
          pick = i;
          lane = j;
        }
      }
    }
    const Point2d shift = targets[pick] - pos[lane];
    const std::vector<Point2d> from = pos;
    for (int j = 0; j < m; ++j) {
      pos[j] += shift;
      plan.waypoints[j].push_back(pos[j]);
    }
    sweep(from);
    if (!visited[pick]) {
      visited[pick] = true;
      --left;
    }
  }
  fill_costs(plan);
  return plan;
}

Plan replan(const Instance& instance, const std::set<std::size_t>& visited,
            std::span<const Point2d> fleet_positions, const PlannerOptions& options) {
  instance.validate();
  if (static_cast<int>(fleet_positions.size()) != instance.fleet.m) {
    throw Error("fleet position count does not match the fleet size");
  }
  std::vector<Point2d> open;
  for (std::size_t i = 0; i < instance.targets.size(); ++i) {
    if (!visited.contains(i)) open.push_back(instance.targets[i]);
  }
  if (open.empty()) throw Error("nothing to plan");
  PsaParts parts = build_psa(open, instance.fleet, options);
  const double spacing = options.lane_spacing(instance.fleet);
  std::vector<Keyframe> frames = frames_of(parts.tour);
  const std::vector<Point2d> start(fleet_positions.begin(), fleet_positions.end());
  bool in_slot = true;
  for (int j = 0; j < instance.fleet.m; ++j) {
    const Point2d slot = frames.front().leader + (j * spacing) * frames.front().normal;
    in_slot = in_slot && (start[j] - slot).norm() <= kSamePoint;
  }
  if (in_slot) {
    parts.plan.waypoints = place_formation(frames, instance.fleet.m, spacing, start, false,
                                           options.separation * spacing);
  } else {
    // Regroup leg: every UAV flies straight to its slot at the new entry.
    const double prefix = (start.front() - frames.front().leader).norm();
    parts.plan.report.transfer += prefix;
    parts.plan.report.lower_bound += prefix;
    frames.front().lanes_required = instance.fleet.m;
    frames.insert(frames.begin(), Keyframe{start.front(), frames.front().normal, 1});
    parts.plan.waypoints = place_formation(frames, instance.fleet.m, spacing, start, true,
                                           options.separation * spacing);
  }
  fill_costs(parts.plan);
  return std::move(parts.plan);
}

}  // namespace couav
