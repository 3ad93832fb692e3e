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

#pragma once

/**
 * @file   geometry.hpp
 * @brief  Planar primitives: poses, the rectangular workspace, straight and
 *         circular-arc path segments, route waypoint construction and convex
 *         hulls.
 *
 * Conventions: meters and radians; headings are wrapped to [-π, π].
 */

#include <span>
#include <vector>

namespace mulegame::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Wrap an angle to [-π, π].
[[nodiscard]] double normalize_angle(double angle) noexcept;

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}
  Pose(Point p, double theta_) : Pose(p.x, p.y, theta_) {}

  [[nodiscard]] Point position() const noexcept { return {x, y}; }

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Axis-aligned rectangular workspace.
class Region {
 public:
  /// Throws InvalidArgument unless xmin < xmax and ymin < ymax.
  Region(double xmin, double xmax, double ymin, double ymax);

  [[nodiscard]] bool contains(Point p) const noexcept;
  [[nodiscard]] double xmin() const noexcept { return xmin_; }
  [[nodiscard]] double xmax() const noexcept { return xmax_; }
  [[nodiscard]] double ymin() const noexcept { return ymin_; }
  [[nodiscard]] double ymax() const noexcept { return ymax_; }
  [[nodiscard]] double width() const noexcept { return xmax_ - xmin_; }
  [[nodiscard]] double height() const noexcept { return ymax_ - ymin_; }

 private:
  double xmin_, xmax_, ymin_, ymax_;
};

enum class SegmentKind { kStraight, kArc };

/**
 * A straight line or a circular arc of constant signed curvature.
 * Positive curvature turns left (counter-clockwise).
 */
struct PathSegment {
  SegmentKind kind = SegmentKind::kStraight;
  Pose start;
  Pose end;
  double length = 0.0;
  double signed_curvature = 0.0;

  /// Pose reached after travelling `s` meters along the segment, s in [0, length].
  [[nodiscard]] Pose pose_at(double s) const noexcept;
};

[[nodiscard]] PathSegment make_straight(const Pose& start, double length);
/// Throws InvalidArgument when curvature is zero or length negative.
[[nodiscard]] PathSegment make_arc(const Pose& start, double signed_curvature,
                                   double length);

/// A sensor node to be visited.
struct Sensor {
  int id = 0;
  Point position;
};

/// One planning request of a route: drive from `start` to `goal`.
struct WaypointLeg {
  Pose start;
  Pose goal;
  std::size_t index = 0;
};

/// Angle of q - p in [-π, π]; throws DegenerateDirection when p == q.
[[nodiscard]] double heading_between(Point p, Point q);

/**
 * Legs of a closed route from `initial` through `nodes` and back.
 *
 * The heading at node j points at node j+1, the heading at the last node
 * points back at the start position, and the return leg keeps that heading,
 * so it is a straight line. k nodes give k+1 legs; no nodes give none.
 * Throws InvalidArgument for nodes outside `region` or repeated nodes.
 */
[[nodiscard]] std::vector<WaypointLeg> build_route_waypoints(
    const Pose& initial, std::span<const Point> nodes, const Region& region);

/// Counter-clockwise hull without collinear points (monotone chain).
/// One or two distinct points come back as a degenerate point/segment.
[[nodiscard]] std::vector<Point> convex_hull(std::span<const Point> points);

[[nodiscard]] double distance_to_segment(Point q, Point a, Point b) noexcept;

/// Euclidean distance from q to a convex polygon (interior included, so 0
/// inside). Accepts degenerate 1- and 2-vertex polygons.
[[nodiscard]] double distance_to_polygon(Point q, std::span<const Point> polygon);

[[nodiscard]] double distance(Point a, Point b) noexcept;

}  // namespace mulegame::geometry
