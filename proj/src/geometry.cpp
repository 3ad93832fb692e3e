// Copyright 2026 The mulegame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mulegame/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mulegame/error.hpp"

namespace mulegame::geometry {

namespace {

double cross(Point o, Point a, Point b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::string describe(Point p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

double normalize_angle(double angle) noexcept {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, kTwoPi);
  // remainder can land a hair outside the closed interval.
  return std::clamp(wrapped, -std::numbers::pi, std::numbers::pi);
}

Region::Region(double xmin, double xmax, double ymin, double ymax)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (!(xmin < xmax) || !(ymin < ymax)) {
    throw InvalidArgument("region requires xmin < xmax and ymin < ymax");
  }
}

bool Region::contains(Point p) const noexcept {
  return p.x >= xmin_ && p.x <= xmax_ && p.y >= ymin_ && p.y <= ymax_;
}

Pose PathSegment::pose_at(double s) const noexcept {
  s = std::clamp(s, 0.0, length);
  if (kind == SegmentKind::kStraight) {
    return {start.x + s * std::cos(start.theta),
            start.y + s * std::sin(start.theta), start.theta};
  }
  const double radius = 1.0 / signed_curvature;
  const double dtheta = s * signed_curvature;
  const double theta = start.theta + dtheta;
  // Circle centre sits a signed radius to the left of the start heading.
  const double cx = start.x - radius * std::sin(start.theta);
  const double cy = start.y + radius * std::cos(start.theta);
  return {cx + radius * std::sin(theta), cy - radius * std::cos(theta), theta};
}

PathSegment make_straight(const Pose& start, double length) {
  if (length < 0.0) throw InvalidArgument("segment length must be >= 0");
  PathSegment seg{SegmentKind::kStraight, start, start, length, 0.0};
  seg.end = seg.pose_at(length);
  return seg;
}

PathSegment make_arc(const Pose& start, double signed_curvature, double length) {
  if (signed_curvature == 0.0) {
    throw InvalidArgument("arc segment requires non-zero curvature");
  }
  if (length < 0.0) throw InvalidArgument("segment length must be >= 0");
  PathSegment seg{SegmentKind::kArc, start, start, length, signed_curvature};
  seg.end = seg.pose_at(length);
  return seg;
}

double distance(Point a, Point b) noexcept { return std::hypot(b.x - a.x, b.y - a.y); }

double heading_between(Point p, Point q) {
  if (p == q) {
    throw DegenerateDirection("heading undefined between coincident points " +
                              describe(p));
  }
  return normalize_angle(std::atan2(q.y - p.y, q.x - p.x));
}

std::vector<WaypointLeg> build_route_waypoints(const Pose& initial,
                                               std::span<const Point> nodes,
                                               const Region& region) {
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!region.contains(nodes[j])) {
      throw InvalidArgument("route node " + describe(nodes[j]) + " lies outside the region");
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (nodes[k] == nodes[j]) {
        throw InvalidArgument("route visits node " + describe(nodes[j]) + " twice");
      }
    }
  }

  std::vector<WaypointLeg> legs;
  if (nodes.empty()) return legs;
  legs.reserve(nodes.size() + 1);

  const Point home = initial.position();
  Pose current = initial;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const Point next = (j + 1 < nodes.size()) ? nodes[j + 1] : home;
    const Pose at_node(nodes[j], heading_between(nodes[j], next));
    legs.push_back({current, at_node, j});
    current = at_node;
  }
  legs.push_back({current, Pose(home, current.theta), nodes.size()});
  return legs;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
  if (points.empty()) throw InvalidArgument("convex hull of an empty point set");

  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  // All points collinear: the chain collapses to the two extremes.
  return hull;
}

double distance_to_segment(Point q, Point a, Point b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(q, a);
  const double t = std::clamp(((q.x - a.x) * dx + (q.y - a.y) * dy) / len2, 0.0, 1.0);
  return distance(q, {a.x + t * dx, a.y + t * dy});
}

double distance_to_polygon(Point q, std::span<const Point> polygon) {
  if (polygon.empty()) throw InvalidArgument("distance to an empty polygon");
  if (polygon.size() == 1) return distance(q, polygon[0]);
  if (polygon.size() == 2) return distance_to_segment(q, polygon[0], polygon[1]);

  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % polygon.size()];
    if (cross(a, b, q) < 0.0) inside = false;
    best = std::min(best, distance_to_segment(q, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace mulegame::geometry
