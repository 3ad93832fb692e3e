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

#include "mulegame/energy_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "absl/container/flat_hash_map.h"

#include "mulegame/error.hpp"

namespace mulegame::energy {

using geometry::Pose;
using geometry::Region;

namespace {

constexpr double kSpeedSlack = 1e-12;

int grid_cells(double extent, double step) {
  return static_cast<int>(std::floor(extent / step + 1e-9));
}

struct CellIndex {
  int ix = 0;
  int iy = 0;
};

CellIndex cell_of(const LatticeSpec& spec, const Region& region, geometry::Point p) {
  return {static_cast<int>(std::lround((p.x - region.xmin()) / spec.grid_step)),
          static_cast<int>(std::lround((p.y - region.ymin()) / spec.grid_step))};
}

// 20 bits per grid axis, 12 bits each for heading and speed index.
std::uint64_t pack(CellIndex c, int heading, int speed) {
  return (static_cast<std::uint64_t>(c.ix) << 44) | (static_cast<std::uint64_t>(c.iy) << 24) |
         (static_cast<std::uint64_t>(heading) << 12) | static_cast<std::uint64_t>(speed);
}

}  // namespace

void EnergyModel::validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c4 > 0.0)) {
    throw InvalidArgument("energy model requires c1, c2, c4 > 0");
  }
  if (!(c3 >= 0.0)) throw InvalidArgument("energy model requires c3 >= 0");
  if (!(v_max > 0.0)) throw InvalidArgument("energy model requires v_max > 0");
}

void LatticeSpec::validate(const EnergyModel& model) const {
  if (!(grid_step > 0.0)) throw InvalidArgument("lattice grid_step must be > 0");
  if (heading_count < 1 || heading_count >= (1 << 12)) {
    throw InvalidArgument("lattice heading_count must be in [1, 4095]");
  }
  if (velocity_levels.size() < 2 || velocity_levels.size() >= (1u << 12)) {
    throw InvalidArgument("lattice needs at least two velocity levels");
  }
  if (velocity_levels.front() != 0.0) {
    throw InvalidArgument("lattice velocity levels must start at 0");
  }
  for (std::size_t i = 1; i < velocity_levels.size(); ++i) {
    if (!(velocity_levels[i] > velocity_levels[i - 1])) {
      throw InvalidArgument("lattice velocity levels must be strictly ascending");
    }
  }
  if (velocity_levels.back() > model.v_max + kSpeedSlack) {
    throw InvalidArgument("lattice velocity levels exceed v_max");
  }
  for (double r : arc_radii) {
    if (!(r > 0.0)) throw InvalidArgument("lattice arc radii must be > 0");
  }
}

double LatticeSpec::heading_increment() const noexcept {
  return 2.0 * std::numbers::pi / heading_count;
}

double LatticeSpec::heading_angle(int index) const noexcept {
  return geometry::normalize_angle(index * heading_increment());
}

int LatticeSpec::heading_index(double theta) const noexcept {
  const long k = std::lround(geometry::normalize_angle(theta) / heading_increment());
  return static_cast<int>(((k % heading_count) + heading_count) % heading_count);
}

LatticeSpec default_lattice(const EnergyModel& model, const Region& region, int max_cells) {
  if (max_cells < 1) throw InvalidArgument("max_cells must be positive");
  LatticeSpec spec;
  spec.grid_step = std::max(region.width(), region.height()) / max_cells;
  spec.heading_count = 16;
  spec.velocity_levels = {0.0, 0.25 * model.v_max, 0.5 * model.v_max, 0.75 * model.v_max,
                          model.v_max};
  spec.arc_radii = {2.0 * spec.grid_step};
  return spec;
}

EdgeProfile edge_energy(const EnergyModel& model, double length, double v_start,
                        double v_end) {
  if (!(length > 0.0)) throw InvalidArgument("edge length must be > 0");
  for (double v : {v_start, v_end}) {
    if (v < 0.0 || v > model.v_max + kSpeedSlack) {
      throw InvalidArgument("edge speed outside [0, v_max]");
    }
  }
  if (v_start == 0.0 && v_end == 0.0) {
    throw InfeasibleEdge("an edge cannot be traversed at zero speed");
  }

  EdgeProfile p;
  p.length = length;
  p.v_start = v_start;
  p.v_end = v_end;
  p.accel = (v_end * v_end - v_start * v_start) / (2.0 * length);
  const double speed_sum = v_start + v_end;
  p.duration = 2.0 * length / speed_sum;
  // ∫v² dt = (v_end³ - v_start³) / (3a), rewritten so a -> 0 stays finite.
  const double v2_integral =
      2.0 * length * (v_end * v_end + v_end * v_start + v_start * v_start) / (3.0 * speed_sum);
  p.energy = model.c1 * p.accel * p.accel * p.duration + model.c2 * v2_integral +
             model.c3 * length + model.c4 * p.duration;
  return p;
}

ProfilePoint profile_at(const EnergyModel& model, const EdgeProfile& profile, double s) {
  s = std::clamp(s, 0.0, profile.length);
  if (s == 0.0) return {profile.v_start, 0.0, 0.0};
  if (s == profile.length) return {profile.v_end, profile.duration, profile.energy};
  const double v2 = profile.v_start * profile.v_start + 2.0 * profile.accel * s;
  const double v = std::sqrt(std::max(v2, 0.0));
  const EdgeProfile partial = edge_energy(model, s, profile.v_start, v);
  return {v, partial.duration, partial.energy};
}

double cruise_speed(const EnergyModel& model) {
  return std::min(std::sqrt(model.c4 / model.c2), model.v_max);
}

double heuristic_rate(const EnergyModel& model) {
  const double v = cruise_speed(model);
  return model.c2 * v + model.c3 + model.c4 / v;
}

Pose snap_pose(const LatticeSpec& spec, const Region& region, const Pose& pose) {
  const int nx = grid_cells(region.width(), spec.grid_step);
  const int ny = grid_cells(region.height(), spec.grid_step);
  CellIndex c = cell_of(spec, region, pose.position());
  c.ix = std::clamp(c.ix, 0, nx);
  c.iy = std::clamp(c.iy, 0, ny);
  return {region.xmin() + c.ix * spec.grid_step, region.ymin() + c.iy * spec.grid_step,
          spec.heading_angle(spec.heading_index(pose.theta))};
}

namespace {

// One motion primitive applied from an exact lattice heading. The end pose
// is a fixed displacement from the start, so it is tabulated per heading.
struct Primitive {
  geometry::SegmentKind kind = geometry::SegmentKind::kStraight;
  double curvature = 0.0;
  double length = 0.0;
  double dx = 0.0, dy = 0.0;        // start -> end
  double mid_dx = 0.0, mid_dy = 0.0;  // start -> midpoint
  int next_heading = 0;
  std::vector<EdgeProfile> profiles;  // [from speed][to speed], adjacent levels only
};

class LatticeSearch {
 public:
  LatticeSearch(const EnergyModel& model, const LatticeSpec& spec, const Region& region);

  PlannedSegment run(const Pose& start_raw, const Pose& goal_raw);

 private:
  // Search with closed-set keys on cells `refine` times finer than the
  // lattice. Returns false when the state space is exhausted.
  bool search(const Pose& start, const Pose& goal, int refine, PlannedSegment& result);

  struct Record {
    double x = 0.0, y = 0.0;
    double g = 0.0;
    std::uint64_t parent = 0;
    int primitive = -1;  // index into the heading's primitive list; -1 at the root
    int heading = 0;
    int speed = 0;
    bool closed = false;
  };

  struct OpenEntry {
    double f;
    double h;
    int ix, iy, heading, speed;
    double g;
    std::uint64_t key;

    // Min-heap order: f, then h, then lexicographic state.
    bool operator>(const OpenEntry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      if (ix != o.ix) return ix > o.ix;
      if (iy != o.iy) return iy > o.iy;
      if (heading != o.heading) return heading > o.heading;
      return speed > o.speed;
    }
  };

  const EdgeProfile& profile(const Primitive& p, int from, int to) const {
    return p.profiles[from * speeds_ + to];
  }

  const LatticeSpec& spec_;
  const Region& region_;
  double rate_;
  int speeds_;
  // primitives_[heading] lists straight first, then left/right arcs per radius.
  std::vector<std::vector<Primitive>> primitives_;
  // Lower bound on the energy above rate·length still owed by a state at a
  // given speed level: every level down to rest must be shed once.
  std::vector<double> braking_excess_;
  double launch_excess_ = 0.0;
};

LatticeSearch::LatticeSearch(const EnergyModel& model, const LatticeSpec& spec,
                             const Region& region)
    : spec_(spec),
      region_(region),
      rate_(heuristic_rate(model)),
      speeds_(static_cast<int>(spec.velocity_levels.size())) {
  const auto& v = spec_.velocity_levels;
  auto tabulate = [&](Primitive& p) {
    p.profiles.resize(static_cast<std::size_t>(speeds_ * speeds_));
    for (int a = 0; a < speeds_; ++a) {
      for (int b = std::max(0, a - 1); b <= std::min(speeds_ - 1, a + 1); ++b) {
        if (a == 0 && b == 0) continue;
        p.profiles[a * speeds_ + b] = edge_energy(model, p.length, v[a], v[b]);
      }
    }
  };
  auto place = [](Primitive& p, const geometry::PathSegment& seg) {
    p.dx = seg.end.x - seg.start.x;
    p.dy = seg.end.y - seg.start.y;
    const Pose mid = seg.pose_at(0.5 * seg.length);
    p.mid_dx = mid.x - seg.start.x;
    p.mid_dy = mid.y - seg.start.y;
  };

  primitives_.resize(spec_.heading_count);
  for (int k = 0; k < spec_.heading_count; ++k) {
    const Pose origin(0.0, 0.0, spec_.heading_angle(k));
    // Straight primitives advance exactly one cell along the dominant axis.
    const double dominant =
        std::max(std::abs(std::cos(origin.theta)), std::abs(std::sin(origin.theta)));
    Primitive straight;
    straight.length = spec_.grid_step / dominant;
    straight.next_heading = k;
    place(straight, geometry::make_straight(origin, straight.length));
    tabulate(straight);
    primitives_[k].push_back(std::move(straight));
    for (double r : spec_.arc_radii) {
      for (int turn : {+1, -1}) {
        Primitive arc;
        arc.kind = geometry::SegmentKind::kArc;
        arc.curvature = turn / r;
        arc.length = r * spec_.heading_increment();
        arc.next_heading = ((k + turn) % spec_.heading_count + spec_.heading_count) %
                           spec_.heading_count;
        place(arc, geometry::make_arc(origin, arc.curvature, arc.length));
        tabulate(arc);
        primitives_[k].push_back(std::move(arc));
      }
    }
  }

  // Every edge costs at least rate·length, so the surplus of the cheapest
  // primitive for each unavoidable speed change is a consistent bound.
  auto cheapest_excess = [&](int from, int to) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& list : primitives_) {
      for (const auto& p : list) {
        best = std::min(best, profile(p, from, to).energy - rate_ * p.length);
      }
    }
    return std::max(best, 0.0);
  };
  braking_excess_.assign(static_cast<std::size_t>(speeds_), 0.0);
  for (int j = 1; j < speeds_; ++j) {
    braking_excess_[j] = braking_excess_[j - 1] + cheapest_excess(j, j - 1);
  }
  launch_excess_ = cheapest_excess(0, 1) + braking_excess_[1];
}

PlannedSegment LatticeSearch::run(const Pose& start_raw, const Pose& goal_raw) {
  const Pose start = snap_pose(spec_, region_, start_raw);
  const Pose goal = snap_pose(spec_, region_, goal_raw);
  PlannedSegment result;
  result.start = start;
  result.goal = goal;

  // Merging states per cell can discard the only pose that stops inside the
  // goal cell; finer keys keep more distinct poses alive.
  for (int refine : {1, 2, 4}) {
    if (search(start, goal, refine, result)) return result;
  }
  std::ostringstream os;
  os << "no lattice path from (" << start.x << ", " << start.y << ", " << start.theta << ") to ("
     << goal.x << ", " << goal.y << ", " << goal.theta << ")";
  throw Unreachable(os.str());
}

bool LatticeSearch::search(const Pose& start, const Pose& goal, int refine,
                           PlannedSegment& result) {
  const double key_step = spec_.grid_step / refine;
  auto key_cell = [&](geometry::Point p) -> CellIndex {
    return {static_cast<int>(std::lround((p.x - region_.xmin()) / key_step)),
            static_cast<int>(std::lround((p.y - region_.ymin()) / key_step))};
  };

  const CellIndex goal_cell = cell_of(spec_, region_, goal.position());
  const int goal_heading = spec_.heading_index(goal.theta);
  const CellIndex start_cell = cell_of(spec_, region_, start.position());
  const int start_heading = spec_.heading_index(start.theta);
  if (start_cell.ix == goal_cell.ix && start_cell.iy == goal_cell.iy &&
      start_heading == goal_heading) {
    return true;
  }

  // Any end point inside the goal cell is accepted.
  const double goal_slack = spec_.grid_step * std::numbers::sqrt2 / 2.0;
  auto is_goal = [&](CellIndex c, int heading, int speed) {
    return speed == 0 && heading == goal_heading && c.ix == goal_cell.ix && c.iy == goal_cell.iy;
  };
  auto heuristic = [&](double x, double y, CellIndex c, int heading, int speed) {
    if (is_goal(c, heading, speed)) return 0.0;
    const double d = std::max(0.0, std::hypot(goal.x - x, goal.y - y) - goal_slack);
    return rate_ * d + (speed == 0 ? launch_excess_ : braking_excess_[speed]);
  };

  absl::flat_hash_map<std::uint64_t, Record> records;
  records.reserve(1 << 15);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  const CellIndex start_key_cell = key_cell(start.position());
  const std::uint64_t start_key = pack(start_key_cell, start_heading, 0);
  records[start_key] = Record{start.x, start.y, 0.0, start_key, -1, start_heading, 0, false};
  {
    const double h = heuristic(start.x, start.y, start_cell, start_heading, 0);
    open.push({h, h, start_key_cell.ix, start_key_cell.iy, start_heading, 0, 0.0, start_key});
  }

  std::uint64_t goal_key = 0;
  bool found = false;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    Record& rec = records[top.key];
    if (rec.closed || top.g > rec.g) continue;
    rec.closed = true;
    if (is_goal(cell_of(spec_, region_, {rec.x, rec.y}), top.heading, top.speed)) {
      goal_key = top.key;
      found = true;
      break;
    }

    const double x = rec.x;
    const double y = rec.y;
    const double g = rec.g;
    const int speed = top.speed;
    const auto& list = primitives_[top.heading];
    for (int index = 0; index < static_cast<int>(list.size()); ++index) {
      const Primitive& prim = list[index];
      const geometry::Point end{x + prim.dx, y + prim.dy};
      if (!region_.contains(end) || !region_.contains({x + prim.mid_dx, y + prim.mid_dy})) {
        continue;
      }
      const CellIndex cell = cell_of(spec_, region_, end);
      const CellIndex kcell = key_cell(end);
      for (int next_speed = std::max(0, speed - 1);
           next_speed <= std::min(speeds_ - 1, speed + 1); ++next_speed) {
        if (speed == 0 && next_speed == 0) continue;
        const double ng = g + profile(prim, speed, next_speed).energy;
        const std::uint64_t key = pack(kcell, prim.next_heading, next_speed);
        auto [it, inserted] = records.try_emplace(key);
        Record& next = it->second;
        if (!inserted && (next.closed || ng >= next.g)) continue;
        next = Record{end.x, end.y, ng, top.key, index, prim.next_heading, next_speed, false};
        const double h = heuristic(end.x, end.y, cell, prim.next_heading, next_speed);
        open.push({ng + h, h, kcell.ix, kcell.iy, prim.next_heading, next_speed, ng, key});
      }
    }
  }

  if (!found) return false;

  std::vector<std::uint64_t> chain;
  for (std::uint64_t key = goal_key; key != start_key; key = records.at(key).parent) {
    chain.push_back(key);
  }
  std::reverse(chain.begin(), chain.end());
  for (std::uint64_t key : chain) {
    const Record& child = records.at(key);
    const Record& parent = records.at(child.parent);
    const Primitive& prim = primitives_[parent.heading][child.primitive];
    const Pose from(parent.x, parent.y, spec_.heading_angle(parent.heading));
    result.segments.push_back(prim.kind == geometry::SegmentKind::kStraight
                                  ? geometry::make_straight(from, prim.length)
                                  : geometry::make_arc(from, prim.curvature, prim.length));
    result.profiles.push_back(profile(prim, parent.speed, child.speed));
    result.total_energy += result.profiles.back().energy;
  }
  return true;
}

}  // namespace

PlannedSegment plan_segment(const EnergyModel& model, const LatticeSpec& spec,
                            const Region& region, const Pose& start, const Pose& goal) {
  model.validate();
  spec.validate(model);
  if (!region.contains(start.position())) {
    throw Unreachable("segment start lies outside the region");
  }
  if (!region.contains(goal.position())) {
    throw Unreachable("segment goal lies outside the region");
  }
  return LatticeSearch(model, spec, region).run(start, goal);
}

PlannedTour assemble_tour(std::vector<PlannedSegment> legs,
                          std::span<const geometry::Sensor> nodes, double idle_energy) {
  PlannedTour tour;
  for (const auto& node : nodes) tour.visited.push_back(node.id);
  if (nodes.empty()) {
    tour.total_energy = idle_energy;
    return tour;
  }
  tour.legs = std::move(legs);
  for (const auto& leg : tour.legs) tour.total_energy += leg.total_energy;
  return tour;
}

PlannedTour plan_tour(const EnergyModel& model, const LatticeSpec& spec, const Region& region,
                      const Pose& initial, std::span<const geometry::Sensor> nodes,
                      double idle_energy) {
  std::vector<geometry::Point> positions;
  positions.reserve(nodes.size());
  for (const auto& node : nodes) positions.push_back(node.position);
  const auto waypoints = geometry::build_route_waypoints(initial, positions, region);

  std::vector<PlannedSegment> legs;
  legs.reserve(waypoints.size());
  for (const auto& leg : waypoints) {
    legs.push_back(plan_segment(model, spec, region, leg.start, leg.goal));
  }
  return assemble_tour(std::move(legs), nodes, idle_energy);
}

}  // namespace mulegame::energy
