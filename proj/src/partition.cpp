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

#include "mulegame/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mulegame/error.hpp"

namespace mulegame::partition {

CommGraph comm_graph(std::span<const game::Robot> robots, double comm_range) {
  if (!(comm_range >= 0.0)) throw InvalidArgument("comm_range must be non-negative");
  CommGraph g;
  for (const auto& r : robots) {
    if (std::find(g.vertices.begin(), g.vertices.end(), r.id) != g.vertices.end()) {
      throw InvalidArgument("duplicate robot id " + std::to_string(r.id));
    }
    g.vertices.push_back(r.id);
  }
  for (std::size_t i = 0; i < robots.size(); ++i) {
    for (std::size_t j = i + 1; j < robots.size(); ++j) {
      if (geometry::distance(robots[i].pose.position(), robots[j].pose.position()) <= comm_range) {
        g.edges.emplace_back(i, j);
      }
    }
  }
  return g;
}

std::vector<std::vector<int>> build_groups(std::span<const game::Robot> robots,
                                           double comm_range) {
  const auto g = comm_graph(robots, comm_range);
  // Union-find; the root of each set is its smallest index.
  std::vector<std::size_t> parent(robots.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : g.edges) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::vector<std::vector<int>> groups;
  std::vector<std::size_t> slot(robots.size(), robots.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const auto root = find(i);
    if (slot[root] == robots.size()) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(robots[i].id);
  }
  return groups;
}

Point LabelGrid::cell_center(int ix, int iy) const {
  return {region.xmin() + (ix + 0.5) * region.width() / nx,
          region.ymin() + (iy + 0.5) * region.height() / ny};
}

std::pair<int, int> LabelGrid::cell_of(Point p) const {
  auto index = [](double v, double lo, double span, int n) {
    const int k = static_cast<int>(std::floor((v - lo) / span * n));
    return std::clamp(k, 0, n - 1);
  };
  return {index(p.x, region.xmin(), region.width(), nx),
          index(p.y, region.ymin(), region.height(), ny)};
}

RegionAssignment assign_regions(const geometry::Region& region,
                                const std::vector<std::vector<Point>>& hulls,
                                std::span<const geometry::Sensor> sensors, int grid_resolution) {
  if (hulls.empty()) throw InvalidArgument("at least one group hull is required");
  if (grid_resolution <= 0) throw InvalidArgument("grid resolution must be positive");
  for (const auto& s : sensors) {
    if (!region.contains(s.position)) {
      throw InvalidArgument("sensor " + std::to_string(s.id) + " lies outside the region");
    }
  }

  RegionAssignment out{{region, grid_resolution, grid_resolution, {}}, {}};
  auto& grid = out.grid;
  grid.labels.resize(static_cast<std::size_t>(grid.nx) * grid.ny);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Point q = grid.cell_center(ix, iy);
      int best = 0;
      double best_d = geometry::distance_to_polygon(q, hulls[0]);
      for (std::size_t h = 1; h < hulls.size(); ++h) {
        const double d = geometry::distance_to_polygon(q, hulls[h]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(h);
        }
      }
      grid.labels[static_cast<std::size_t>(iy) * grid.nx + ix] = best;
    }
  }

  for (const auto& s : sensors) {
    const auto [ix, iy] = grid.cell_of(s.position);
    if (!out.sensor_group.emplace(s.id, static_cast<std::size_t>(grid.label(ix, iy))).second) {
      throw InvalidArgument("duplicate sensor id " + std::to_string(s.id));
    }
  }
  return out;
}

std::vector<geometry::Sensor> GroupPartition::sensors_of(
    std::size_t g, std::span<const geometry::Sensor> sensors) const {
  std::vector<geometry::Sensor> out;
  for (const auto& s : sensors) {
    if (sensor_assignment.at(s.id) == g) out.push_back(s);
  }
  return out;
}

GroupPartition partition_team(std::span<const game::Robot> robots,
                              std::span<const geometry::Sensor> sensors,
                              const geometry::Region& region, double comm_range,
                              int grid_resolution) {
  if (robots.empty()) throw InvalidArgument("at least one robot is required");
  GroupPartition p;
  p.groups = build_groups(robots, comm_range);
  for (const auto& group : p.groups) {
    std::vector<Point> pts;
    for (int id : group) {
      const auto it = std::find_if(robots.begin(), robots.end(),
                                   [id](const game::Robot& r) { return r.id == id; });
      pts.push_back(it->pose.position());
    }
    p.hulls.push_back(geometry::convex_hull(pts));
  }
  auto assignment = assign_regions(region, p.hulls, sensors, grid_resolution);
  p.grid = std::move(assignment.grid);
  p.sensor_assignment = std::move(assignment.sensor_group);
  return p;
}

void write_label_grid(const LabelGrid& grid, std::ostream& out) {
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (ix) out << ',';
      out << grid.label(ix, iy);
    }
    out << '\n';
  }
}

}  // namespace mulegame::partition
