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

// Planar convex geometry used by the coverage planner.
//
// Everything here is a pure function of its arguments. Types are templated on
// the scalar so the same code serves double-precision planning and
// long-double cross checks; `Point2d` / `ConvexPolygond` are the aliases the
// rest of the library uses. Coincidence is judged with an absolute tolerance
// of 1e-9 m, which is adequate for coordinates up to a few kilometres.

#ifndef COUAV_GEOMETRY_HPP_
#define COUAV_GEOMETRY_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "couav/error.hpp"

namespace couav {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point2<double>;

template <typename Scalar>
constexpr Scalar coincidence_tolerance() {
  return Scalar(1e-9);
}

template <typename Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Left-hand perpendicular; for a CCW polygon edge direction this is the
/// inward normal.
template <typename Scalar>
Point2<Scalar> left_normal(const Point2<Scalar>& d) {
  return Point2<Scalar>(-d.y(), d.x());
}

template <typename Scalar>
bool is_finite(const Point2<Scalar>& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y());
}

/// Signed distance of `c` from the directed line a->b (positive on the left).
template <typename Scalar>
Scalar signed_line_distance(const Point2<Scalar>& a, const Point2<Scalar>& b,
                            const Point2<Scalar>& c) {
  const Point2<Scalar> ab = b - a;
  const Scalar len = ab.norm();
  if (len == Scalar(0)) return (c - a).norm();
  return cross<Scalar>(ab, c - a) / len;
}

/// Closest point to `p` on the closed segment [a, b].
template <typename Scalar>
Point2<Scalar> closest_point_on_segment(const Point2<Scalar>& p,
                                        const Point2<Scalar>& a,
                                        const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return a;
  const Scalar t = std::clamp<Scalar>((p - a).dot(ab) / len2, 0, 1);
  return a + t * ab;
}

template <typename Scalar>
Scalar segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a,
                        const Point2<Scalar>& b) {
  return (p - closest_point_on_segment<Scalar>(p, a, b)).norm();
}

template <typename Scalar>
Scalar polyline_length(std::span<const Point2<Scalar>> pts) {
  Scalar total = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += (pts[i] - pts[i - 1]).norm();
  return total;
}

enum class PolygonKind { kPoint, kSegment, kPolygon };

/// Convex polygon with counter-clockwise vertices. One vertex is a point,
/// two vertices a segment; both are treated as degenerate polygons.
template <typename Scalar>
class ConvexPolygon {
 public:
  using Point = Point2<Scalar>;

  explicit ConvexPolygon(std::vector<Point> ccw_vertices)
      : vertices_(std::move(ccw_vertices)) {
    if (vertices_.empty()) throw Error("convex polygon needs at least one vertex");
    const Scalar tol = coincidence_tolerance<Scalar>();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!is_finite<Scalar>(vertices_[i])) throw Error("non-finite polygon vertex");
      if (vertices_.size() > 1 &&
          (vertices_[i] - vertices_[(i + 1) % vertices_.size()]).norm() <= tol) {
        throw Error("duplicate consecutive polygon vertices");
      }
    }
    if (vertices_.size() >= 3) {
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % vertices_.size()];
        const Point& c = vertices_[(i + 2) % vertices_.size()];
        if (signed_line_distance<Scalar>(a, b, c) <= tol) {
          throw Error("polygon is not strictly convex and counter-clockwise");
        }
      }
    }
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  PolygonKind kind() const {
    switch (vertices_.size()) {
      case 1: return PolygonKind::kPoint;
      case 2: return PolygonKind::kSegment;
      default: return PolygonKind::kPolygon;
    }
  }
  bool degenerate() const { return kind() != PolygonKind::kPolygon; }

  /// Number of boundary edges: 0 for a point, 2 for a segment (out and back).
  std::size_t edge_count() const { return vertices_.size() == 1 ? 0 : vertices_.size(); }
  const Point& edge_start(std::size_t i) const { return vertex(i); }
  const Point& edge_end(std::size_t i) const { return vertex(i + 1); }
  Scalar edge_length(std::size_t i) const { return (edge_end(i) - edge_start(i)).norm(); }
  Point edge_direction(std::size_t i) const { return (edge_end(i) - edge_start(i)).normalized(); }
  Point inward_normal(std::size_t i) const { return left_normal<Scalar>(edge_direction(i)); }

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Point> vertices_;
};

using ConvexPolygond = ConvexPolygon<double>;

/// Convex hull by Andrew's monotone chain (the sorted-sweep form of Graham's
/// scan). Collinear and coincident inputs collapse to segment / point hulls.
template <typename Scalar>
ConvexPolygon<Scalar> convex_hull(std::span<const Point2<Scalar>> points) {
  using Point = Point2<Scalar>;
  if (points.empty()) throw Error("empty point set");
  const Scalar tol = coincidence_tolerance<Scalar>();
  std::vector<Point> pts;
  pts.reserve(points.size());
  for (const Point& p : points) {
    if (!is_finite<Scalar>(p)) throw Error("non-finite point");
    pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Point> unique;
  for (const Point& p : pts) {
    const bool dup = std::any_of(unique.rbegin(),
                                 unique.rbegin() + std::min<std::ptrdiff_t>(unique.size(), 4),
                                 [&](const Point& q) { return (p - q).norm() <= tol; });
    if (!dup) unique.push_back(p);
  }
  if (unique.size() == 1) return ConvexPolygon<Scalar>({unique.front()});

  // Pops the last chain point unless the turn onto `p` is strictly left.
  auto build = [&](auto first, auto last) {
    std::vector<Point> chain;
    for (auto it = first; it != last; ++it) {
      while (chain.size() >= 2 &&
             signed_line_distance<Scalar>(chain[chain.size() - 2], *it, chain.back()) >= -tol) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    return chain;
  };
  std::vector<Point> lower = build(unique.begin(), unique.end());
  std::vector<Point> upper = build(unique.rbegin(), unique.rend());
  std::vector<Point> hull(lower.begin(), lower.end() - 1);
  hull.insert(hull.end(), upper.begin(), upper.end() - 1);
  return ConvexPolygon<Scalar>(std::move(hull));
}

template <typename Scalar>
ConvexPolygon<Scalar> convex_hull(const std::vector<Point2<Scalar>>& points) {
  return convex_hull<Scalar>(std::span<const Point2<Scalar>>(points));
}

template <typename Scalar>
Scalar perimeter(const ConvexPolygon<Scalar>& poly) {
  Scalar total = 0;
  for (std::size_t i = 0; i < poly.edge_count(); ++i) total += poly.edge_length(i);
  return total;
}

template <typename Scalar>
Scalar area(const ConvexPolygon<Scalar>& poly) {
  if (poly.degenerate()) return 0;
  Scalar twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) twice += cross<Scalar>(poly.vertex(i), poly.vertex(i + 1));
  return twice / 2;
}

/// Inward offset by `d`: intersection of the half-planes bounded by each edge
/// line shifted inward by `d`. Returns nullopt when nothing with positive
/// area survives (d at or beyond the inradius) or the input is degenerate.
template <typename Scalar>
std::optional<ConvexPolygon<Scalar>> inward_offset(const ConvexPolygon<Scalar>& poly, Scalar d) {
  using Point = Point2<Scalar>;
  if (!(d > 0)) throw Error("inward offset distance must be positive");
  if (poly.degenerate()) return std::nullopt;
  const Scalar tol = coincidence_tolerance<Scalar>();

  std::vector<Point> region = poly.vertices();
  for (std::size_t e = 0; e < poly.edge_count() && !region.empty(); ++e) {
    const Point origin = poly.edge_start(e);
    const Point normal = poly.inward_normal(e);
    auto inside = [&](const Point& p) { return (p - origin).dot(normal) - d; };
    std::vector<Point> clipped;
    for (std::size_t i = 0; i < region.size(); ++i) {
      const Point& cur = region[i];
      const Point& nxt = region[(i + 1) % region.size()];
      const Scalar sc = inside(cur);
      const Scalar sn = inside(nxt);
      if (sc >= 0) clipped.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) {
        const Scalar t = sc / (sc - sn);
        clipped.push_back(cur + t * (nxt - cur));
      }
    }
    region = std::move(clipped);
  }

  // Drop coincident and collinear vertices left behind by the clipping.
  bool changed = true;
  while (changed && region.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < region.size() && region.size() >= 3; ++i) {
      const Point& prev = region[(i + region.size() - 1) % region.size()];
      const Point& cur = region[i];
      const Point& next = region[(i + 1) % region.size()];
      if ((cur - prev).norm() <= tol || (next - cur).norm() <= tol ||
          signed_line_distance<Scalar>(prev, next, cur) >= -tol) {
        region.erase(region.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (region.size() < 3) return std::nullopt;
  return ConvexPolygon<Scalar>(std::move(region));
}

template <typename Scalar>
struct BoundaryDistance {
  Scalar distance;
  Point2<Scalar> closest;
};

template <typename Scalar>
BoundaryDistance<Scalar> distance_to_boundary(const Point2<Scalar>& p,
                                              const ConvexPolygon<Scalar>& poly) {
  if (poly.kind() == PolygonKind::kPoint) {
    return {(p - poly.vertex(0)).norm(), poly.vertex(0)};
  }
  BoundaryDistance<Scalar> best{std::numeric_limits<Scalar>::infinity(), poly.vertex(0)};
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    const Point2<Scalar> q = closest_point_on_segment<Scalar>(p, poly.edge_start(i), poly.edge_end(i));
    const Scalar dist = (p - q).norm();
    if (dist < best.distance) best = {dist, q};
  }
  return best;
}

/// Inside or on the boundary, within the coincidence tolerance.
template <typename Scalar>
bool contains(const ConvexPolygon<Scalar>& poly, const Point2<Scalar>& p) {
  const Scalar tol = coincidence_tolerance<Scalar>();
  if (poly.degenerate()) return distance_to_boundary<Scalar>(p, poly).distance <= tol;
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    if ((p - poly.edge_start(i)).dot(poly.inward_normal(i)) < -tol) return false;
  }
  return true;
}

/// Strictly interior: farther than the tolerance from every edge line.
template <typename Scalar>
bool strictly_contains(const ConvexPolygon<Scalar>& poly, const Point2<Scalar>& p) {
  const Scalar tol = coincidence_tolerance<Scalar>();
  if (poly.degenerate()) return false;
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    if ((p - poly.edge_start(i)).dot(poly.inward_normal(i)) <= tol) return false;
  }
  return true;
}

template <typename Scalar>
struct EdgeProjection {
  std::size_t edge_index;
  Scalar along;  // coordinate along the edge from its start vertex
  Scalar depth;  // perpendicular distance inward from the edge line
  bool corner_wedge;
};

/// Projects an inside-or-on point onto the boundary edge whose supporting
/// line is nearest. For interior points of a convex polygon that edge's foot
/// point lies on the edge itself, so `depth` equals the boundary distance.
/// Ties go to the lower edge index.
template <typename Scalar>
EdgeProjection<Scalar> project_onto_boundary(const Point2<Scalar>& p,
                                             const ConvexPolygon<Scalar>& poly) {
  const Scalar tol = coincidence_tolerance<Scalar>();
  if (!contains<Scalar>(poly, p)) throw Error("point lies outside the polygon");
  if (poly.kind() == PolygonKind::kPoint) return {0, 0, (p - poly.vertex(0)).norm(), false};
  if (poly.kind() == PolygonKind::kSegment) {
    const Scalar along = (p - poly.edge_start(0)).dot(poly.edge_direction(0));
    return {0, std::clamp<Scalar>(along, 0, poly.edge_length(0)),
            std::abs(signed_line_distance<Scalar>(poly.edge_start(0), poly.edge_end(0), p)), false};
  }
  std::size_t best = 0;
  Scalar best_depth = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    const Scalar depth = (p - poly.edge_start(i)).dot(poly.inward_normal(i));
    if (depth < best_depth - Scalar(1e-12)) {
      best = i;
      best_depth = depth;
    }
  }
  const Scalar along = (p - poly.edge_start(best)).dot(poly.edge_direction(best));
  const bool wedge = along < -tol || along > poly.edge_length(best) + tol;
  return {best, along, std::max<Scalar>(best_depth, 0), wedge};
}

/// True iff `p` is inside-or-on `outer` and not strictly inside `inner`.
template <typename Scalar>
bool ring_membership(const Point2<Scalar>& p, const ConvexPolygon<Scalar>& outer,
                     const std::optional<ConvexPolygon<Scalar>>& inner) {
  if (!contains<Scalar>(outer, p)) return false;
  return !(inner && strictly_contains<Scalar>(*inner, p));
}

/// Crossings of segment a->b with the polygon boundary: zero, one or two
/// points ordered by their parameter along a->b.
template <typename Scalar>
std::vector<Point2<Scalar>> segment_polygon_intersection(const Point2<Scalar>& a,
                                                         const Point2<Scalar>& b,
                                                         const ConvexPolygon<Scalar>& poly) {
  using Point = Point2<Scalar>;
  const Scalar tol = coincidence_tolerance<Scalar>();
  const Point ab = b - a;
  const Scalar len = ab.norm();
  std::vector<std::pair<Scalar, Point>> hits;

  auto param_of = [&](const Point& p) { return len == 0 ? Scalar(0) : (p - a).dot(ab) / (len * len); };
  auto add_if_on_segment = [&](const Point& p) {
    if (segment_distance<Scalar>(p, a, b) <= tol) hits.emplace_back(param_of(p), p);
  };

  if (poly.kind() == PolygonKind::kPoint) {
    add_if_on_segment(poly.vertex(0));
  } else if (len <= tol) {
    if (distance_to_boundary<Scalar>(a, poly).distance <= tol) hits.emplace_back(0, a);
  } else {
    const std::size_t edges = poly.kind() == PolygonKind::kSegment ? 1 : poly.edge_count();
    for (std::size_t i = 0; i < edges; ++i) {
      const Point p = poly.edge_start(i);
      const Point q = poly.edge_end(i);
      const Point pq = q - p;
      const Scalar denom = cross<Scalar>(ab, pq);
      if (std::abs(denom) <= tol * len * pq.norm()) {
        // Parallel: only collinear overlap contributes, via its end points.
        add_if_on_segment(p);
        add_if_on_segment(q);
        if (segment_distance<Scalar>(a, p, q) <= tol) hits.emplace_back(0, a);
        if (segment_distance<Scalar>(b, p, q) <= tol) hits.emplace_back(1, b);
        continue;
      }
      const Scalar t = cross<Scalar>(p - a, pq) / denom;
      const Scalar u = cross<Scalar>(p - a, ab) / denom;
      const Scalar t_tol = tol / len;
      const Scalar u_tol = tol / pq.norm();
      if (t >= -t_tol && t <= 1 + t_tol && u >= -u_tol && u <= 1 + u_tol) {
        const Scalar tc = std::clamp<Scalar>(t, 0, 1);
        hits.emplace_back(tc, a + tc * ab);
      }
    }
  }

  std::sort(hits.begin(), hits.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Point> out;
  for (const auto& [t, p] : hits) {
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  }
  return out;
}

}  // namespace couav

#endif  // COUAV_GEOMETRY_HPP_
