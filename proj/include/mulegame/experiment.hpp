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
 * @file   experiment.hpp
 * @brief  End-to-end runs: partition the team, build one game per group,
 *         learn, compare against the oracle and write the artifacts.
 *
 * Files written to the output directory:
 *   trace.csv         iteration, action_id_<robot>..., team_cost_joules, acceptable, converged
 *   trajectory.csv    robot_id, leg, s_meters, x, y, theta, v, t_seconds, e_joules
 *   cost_table.csv    player_id, action_id, node_sequence, cost_joules
 *   summary.json      per-group and team results
 *   oracle_group<k>.json   oracle report per group (when the oracle runs)
 *   partition.csv     group label grid
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mulegame/game.hpp"
#include "mulegame/learning.hpp"
#include "mulegame/oracle.hpp"
#include "mulegame/partition.hpp"
#include "mulegame/scenario.hpp"

namespace mulegame::experiment {

struct Options {
  bool oracle = true;
  std::uint64_t oracle_budget = oracle::kDefaultBudget;
  double sample_step = 0.1;  // meters between trajectory samples
  unsigned threads = 0;      // cost-table workers, 0 = hardware concurrency
};

struct GroupResult {
  std::vector<int> robot_ids;
  std::vector<int> sensor_ids;
  game::CostTable table;
  learning::IterationTrace trace;
  std::optional<oracle::Optimum> optimum;
  std::optional<oracle::OracleReport> report;
  std::optional<bool> final_is_nash;
  std::string oracle_note;  // why the oracle was skipped, if it was
};

struct Summary {
  double final_team_cost = 0.0;
  bool acceptable = false;
  /// Iteration from which every group's joint action stays fixed.
  std::optional<std::size_t> converged_at;
  std::optional<double> optimum_cost;
  std::optional<double> delta;  // relative_change(optimum, final)
};

struct RunResult {
  partition::GroupPartition partition;
  std::vector<GroupResult> groups;
  Summary summary;
};

/// Everything except writing files.
[[nodiscard]] RunResult run(const scenario::Scenario& sc, const Options& options);

/// run() followed by write_artifacts(); creates `out_dir` if needed.
RunResult run_experiment(const scenario::Scenario& sc, const Options& options,
                         const std::filesystem::path& out_dir);

void write_artifacts(const scenario::Scenario& sc, const Options& options, const RunResult& result,
                     const std::filesystem::path& out_dir);

void write_trace(const scenario::Scenario& sc, const RunResult& result, std::ostream& out);
void write_cost_table(const RunResult& result, std::ostream& out);
void write_summary(const scenario::Scenario& sc, const RunResult& result, std::ostream& out);

struct RobotTour {
  int robot_id = 0;
  geometry::Pose start;
  const energy::PlannedTour* tour = nullptr;
};

/**
 * Samples every leg at `sample_step` meters of arc length (plus the leg end).
 * Time and energy accumulate over the whole tour; s restarts at each leg. An
 * idle tour yields one row at the start pose carrying the idle energy.
 */
void emit_trajectories(const energy::EnergyModel& model, std::span<const RobotTour> tours,
                       double sample_step, std::ostream& out);

}  // namespace mulegame::experiment
