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

// Scenario files are YAML documents:
//
//   region:   {xmin: 0, xmax: 20, ymin: 0, ymax: 20}
//   sensors:  [{id: 1, x: 5, y: 15}, ...]
//   robots:   [{id: 1, x: 2, y: 2, theta: 0}, ...]
//   energy:   {c1: 0.5, c2: 2, c3: 5, c4: 3, v_max: 1}
//   m_max: 2
//   epsilon_idle: 1.0        # optional, Joules
//   comm_range: .inf         # optional, meters
//   lattice:                 # optional, every key optional
//     {max_cells: 200, grid_step: 0.1, heading_count: 16,
//      velocity_levels: [0, 0.5, 1], arc_radii: [0.2]}
//   learner:                 # optional, every key optional
//     {algorithm: jsfp, gamma: 0.3, max_iterations: 500,
//      convergence_window: 10, seed: 7}
//
// Errors are reported as ScenarioError with "file:line:column: message".

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mulegame/energy_planner.hpp"
#include "mulegame/game.hpp"
#include "mulegame/geometry.hpp"
#include "mulegame/learning.hpp"

namespace mulegame::scenario {

struct LatticeOverrides {
  int max_cells = 200;
  std::optional<double> grid_step;
  int heading_count = 16;
  std::optional<std::vector<double>> velocity_levels;
  std::optional<std::vector<double>> arc_radii;
};

struct Scenario {
  geometry::Region region{0.0, 1.0, 0.0, 1.0};
  std::vector<geometry::Sensor> sensors;
  std::vector<game::Robot> robots;
  energy::EnergyModel energy;
  int m_max = 0;
  double epsilon_idle = 1.0;
  double comm_range = std::numeric_limits<double>::infinity();
  LatticeOverrides lattice;
  learning::LearnerConfig learner;

  /// default_lattice(energy, region, max_cells) with the explicit keys applied.
  [[nodiscard]] energy::LatticeSpec lattice_spec() const;
};

/// Parses and validates scenario text. `source` names the input in messages.
[[nodiscard]] Scenario parse_scenario(const std::string& text, const std::string& source);

[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

}  // namespace mulegame::scenario
