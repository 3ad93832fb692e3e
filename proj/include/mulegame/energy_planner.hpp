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
 * @file   energy_planner.hpp
 * @brief  DC-motor energy model, constant-acceleration edge profiles, and
 *         minimum-energy A* search over a pose-velocity lattice.
 *
 * The running cost of a robot moving with speed v(t) and acceleration a(t)
 * is c1·a² + c2·v² + c3·v + c4 (Joules per second). Every lattice edge is a
 * straight or arc primitive driven with constant acceleration between two
 * speed levels, which makes its energy available in closed form.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "mulegame/geometry.hpp"

namespace mulegame::energy {

struct EnergyModel {
  double c1 = 0.0;  // J·s³/m²
  double c2 = 0.0;  // J·s/m²
  double c3 = 0.0;  // J/m
  double c4 = 0.0;  // J/s
  double v_max = 0.0;

  /// Throws InvalidArgument unless c1, c2, c4 > 0, c3 >= 0 and v_max > 0.
  void validate() const;

  /// Instantaneous power draw.
  [[nodiscard]] double power(double v, double a) const noexcept {
    return c1 * a * a + c2 * v * v + c3 * v + c4;
  }
};

struct LatticeSpec {
  double grid_step = 0.0;
  int heading_count = 16;
  std::vector<double> velocity_levels;  // ascending, starts at 0
  std::vector<double> arc_radii;

  void validate(const EnergyModel& model) const;

  [[nodiscard]] double heading_increment() const noexcept;
  [[nodiscard]] double heading_angle(int index) const noexcept;
  [[nodiscard]] int heading_index(double theta) const noexcept;
};

/// Default lattice: 16 headings, speeds {0, ¼, ½, ¾, 1}·v_max, the longest
/// region side split into `max_cells` cells and one arc radius of two cells.
[[nodiscard]] LatticeSpec default_lattice(const EnergyModel& model,
                                          const geometry::Region& region,
                                          int max_cells = 200);

/// Constant-acceleration velocity profile over one edge.
struct EdgeProfile {
  double length = 0.0;
  double v_start = 0.0;
  double v_end = 0.0;
  double accel = 0.0;
  double duration = 0.0;
  double energy = 0.0;
};

/// Closed-form energy of driving `length` meters while the speed changes
/// linearly in time from v_start to v_end. Throws InfeasibleEdge when both
/// speeds are zero and InvalidArgument for out-of-range inputs.
[[nodiscard]] EdgeProfile edge_energy(const EnergyModel& model, double length,
                                      double v_start, double v_end);

/// State of a profile after `s` meters of it: speed, elapsed time, energy used.
struct ProfilePoint {
  double v = 0.0;
  double t = 0.0;
  double energy = 0.0;
};
[[nodiscard]] ProfilePoint profile_at(const EnergyModel& model,
                                      const EdgeProfile& profile, double s);

/// Speed minimizing the per-meter running cost c2·v + c3 + c4/v, capped at v_max.
[[nodiscard]] double cruise_speed(const EnergyModel& model);

/// Lowest achievable energy per meter; Euclidean distance times this rate is
/// an admissible A* heuristic.
[[nodiscard]] double heuristic_rate(const EnergyModel& model);

struct PlannedSegment {
  std::vector<geometry::PathSegment> segments;
  std::vector<EdgeProfile> profiles;
  double total_energy = 0.0;
  geometry::Pose start;
  geometry::Pose goal;
};

struct PlannedTour {
  std::vector<PlannedSegment> legs;
  double total_energy = 0.0;
  std::vector<int> visited;
};

/// Nearest lattice point and heading bucket.
[[nodiscard]] geometry::Pose snap_pose(const LatticeSpec& spec,
                                       const geometry::Region& region,
                                       const geometry::Pose& pose);

/**
 * Minimum-energy lattice path from (start, v=0) to (goal, v=0).
 *
 * Both poses are snapped to the lattice first. The goal is reached when the
 * search stands still in the goal's grid cell with the goal's heading
 * bucket. Returns an empty path when start and goal snap to the same cell
 * and heading. Throws Unreachable when the goal is outside the region or no
 * path exists.
 */
[[nodiscard]] PlannedSegment plan_segment(const EnergyModel& model,
                                          const LatticeSpec& spec,
                                          const geometry::Region& region,
                                          const geometry::Pose& start,
                                          const geometry::Pose& goal);

/// Plans each leg of the closed route through `nodes` independently and sums
/// the energies. An empty route costs `idle_energy`.
[[nodiscard]] PlannedTour plan_tour(const EnergyModel& model, const LatticeSpec& spec,
                                    const geometry::Region& region,
                                    const geometry::Pose& initial,
                                    std::span<const geometry::Sensor> nodes,
                                    double idle_energy = 1.0);

/// Same as plan_tour for already-planned legs, used when legs are shared
/// between many tours.
[[nodiscard]] PlannedTour assemble_tour(std::vector<PlannedSegment> legs,
                                        std::span<const geometry::Sensor> nodes,
                                        double idle_energy);

}  // namespace mulegame::energy
