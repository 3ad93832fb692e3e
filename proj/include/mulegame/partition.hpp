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

// Team decomposition. Robots within comm_range of each other are linked; each
// connected component becomes a group. Group hulls seed a grid approximation
// of the generalized Voronoi diagram, whose cells decide which group is
// responsible for each sensor.

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "mulegame/game.hpp"
#include "mulegame/geometry.hpp"

namespace mulegame::partition {

using geometry::Point;

struct CommGraph {
  std::vector<int> vertices;                               // robot ids
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, indices into vertices
};

CommGraph comm_graph(std::span<const game::Robot> robots, double comm_range);

/// Connected components of the communication graph as robot ids. Members are
/// listed in input order and groups are ordered by their first member.
std::vector<std::vector<int>> build_groups(std::span<const game::Robot> robots,
                                           double comm_range);

/// Uniform nx × ny labelling of a region, row-major with row 0 at ymin.
struct LabelGrid {
  geometry::Region region{0.0, 1.0, 0.0, 1.0};
  int nx = 0;
  int ny = 0;
  std::vector<int> labels;

  Point cell_center(int ix, int iy) const;
  /// Cell containing p; points on the max edges land in the last cell.
  std::pair<int, int> cell_of(Point p) const;
  int label(int ix, int iy) const { return labels.at(static_cast<std::size_t>(iy) * nx + ix); }
};

struct RegionAssignment {
  LabelGrid grid;
  std::map<int, std::size_t> sensor_group;  // sensor id -> group index
};

/// Labels each cell centre with the hull at the smallest distance (lowest
/// index on ties), then gives each sensor its cell's label. Throws
/// InvalidArgument for an empty hull list, a non-positive resolution or a
/// sensor outside the region.
RegionAssignment assign_regions(const geometry::Region& region,
                                const std::vector<std::vector<Point>>& hulls,
                                std::span<const geometry::Sensor> sensors,
                                int grid_resolution = 200);

struct GroupPartition {
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<Point>> hulls;
  std::map<int, std::size_t> sensor_assignment;
  LabelGrid grid;

  /// Sensors assigned to group g, in input order.
  std::vector<geometry::Sensor> sensors_of(std::size_t g,
                                           std::span<const geometry::Sensor> sensors) const;
};

GroupPartition partition_team(std::span<const game::Robot> robots,
                              std::span<const geometry::Sensor> sensors,
                              const geometry::Region& region, double comm_range,
                              int grid_resolution = 200);

/// One CSV line per grid row (ymin first), comma-separated group indices.
void write_label_grid(const LabelGrid& grid, std::ostream& out);

}  // namespace mulegame::partition
