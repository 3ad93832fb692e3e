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
 * @file   game.hpp
 * @brief  The route-allocation game: route actions, the energy cost table and
 *         the conflict-aware reward, potential and global reward.
 *
 * A player's action is an ordered list of at most M^max sensors. Rewards:
 *   unacceptable joint action (some sensor unvisited)   -> -C
 *   acceptable, player's sensors visited by nobody else -> P^i / c^i
 *   acceptable, shares a sensor with another player     -> -c^i
 * with P^i the player's most expensive action cost.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mulegame/energy_planner.hpp"
#include "mulegame/geometry.hpp"

namespace mulegame::game {

struct Action {
  int id = 0;              // position in the full deterministic enumeration
  std::vector<int> nodes;  // sensor ids in visiting order
};

/// One entry per player: an index into that player's action space.
using JointAction = std::vector<std::size_t>;

/// 1 + Σ_{k=1..m_max} M!/(M-k)!. Throws InvalidArgument when m_max > M.
[[nodiscard]] std::uint64_t action_count(int sensor_count, int m_max);

/// Every ordered sequence of distinct sensors of length 0..m_max, ordered by
/// length and then lexicographically by (sorted) sensor id.
[[nodiscard]] std::vector<Action> enumerate_actions(std::span<const int> sensors, int m_max);

/// Record of an action dropped while building a cost table.
struct PruneWarning {
  int player = 0;
  int action_id = 0;
  std::string message;
};

/// Immutable strategic-form game with the cost table c^i.
class GameSpec {
 public:
  /**
   * `costs[i][a]` is the energy of `action_spaces[i][a]`; every cost must be
   * positive. `penalty` overrides the automatic C = 1 + Σ_i max(P^i/min c^i, P^i)
   * and must exceed that sum. At most 64 sensors.
   */
  GameSpec(std::vector<int> players, std::vector<int> sensors,
           std::vector<std::vector<Action>> action_spaces,
           std::vector<std::vector<double>> costs, std::optional<double> penalty = {},
           std::vector<PruneWarning> warnings = {});

  [[nodiscard]] std::size_t num_players() const noexcept { return players_.size(); }
  [[nodiscard]] const std::vector<int>& players() const noexcept { return players_; }
  [[nodiscard]] const std::vector<int>& sensors() const noexcept { return sensors_; }
  [[nodiscard]] const std::vector<Action>& actions(std::size_t player) const {
    return action_spaces_.at(player);
  }
  [[nodiscard]] std::size_t num_actions(std::size_t player) const {
    return action_spaces_.at(player).size();
  }
  [[nodiscard]] double cost(std::size_t player, std::size_t action) const {
    return costs_.at(player).at(action);
  }
  [[nodiscard]] const std::vector<double>& costs(std::size_t player) const {
    return costs_.at(player);
  }
  /// P^i: cost of the player's most expensive action.
  [[nodiscard]] double max_cost(std::size_t player) const { return max_cost_.at(player); }
  [[nodiscard]] double min_cost(std::size_t player) const { return min_cost_.at(player); }
  /// C: the unacceptability penalty.
  [[nodiscard]] double penalty() const noexcept { return penalty_; }
  /// Bit k set when the action visits sensors()[k].
  [[nodiscard]] std::uint64_t coverage(std::size_t player, std::size_t action) const {
    return coverage_.at(player).at(action);
  }
  [[nodiscard]] std::uint64_t full_coverage() const noexcept { return full_mask_; }
  [[nodiscard]] const std::vector<PruneWarning>& warnings() const noexcept { return warnings_; }

  /// Throws InvalidArgument unless `s` has one in-range action per player.
  void check(const JointAction& s) const;

 private:
  std::vector<int> players_;
  std::vector<int> sensors_;
  std::vector<std::vector<Action>> action_spaces_;
  std::vector<std::vector<double>> costs_;
  std::vector<std::vector<std::uint64_t>> coverage_;
  std::vector<double> max_cost_;
  std::vector<double> min_cost_;
  std::uint64_t full_mask_ = 0;
  double penalty_ = 0.0;
  std::vector<PruneWarning> warnings_;
};

/// Robot identity and start pose.
struct Robot {
  int id = 0;
  geometry::Pose pose;
};

struct CostTable {
  GameSpec game;
  /// Planned tour for every surviving action, aligned with game.actions(i).
  std::vector<std::vector<energy::PlannedTour>> tours;
};

/**
 * Plans every action's tour and builds the game. Legs shared between actions
 * are planned once; planning fans out over `threads` workers (0 = hardware
 * concurrency). Unreachable actions are dropped with a PruneWarning; the
 * empty action never is.
 */
[[nodiscard]] CostTable build_cost_table(std::span<const Robot> robots,
                                         std::span<const geometry::Sensor> sensors, int m_max,
                                         const energy::EnergyModel& model,
                                         const energy::LatticeSpec& lattice,
                                         const geometry::Region& region,
                                         double idle_energy = 1.0,
                                         std::optional<double> penalty = {},
                                         unsigned threads = 0);

/// True iff the union of visited sensors covers every sensor.
[[nodiscard]] bool is_acceptable(const GameSpec& spec, const JointAction& s);

/// True iff no sensor is visited by more than one player.
[[nodiscard]] bool is_conflict_free(const GameSpec& spec, const JointAction& s);

/// r^i: P^i/c^i when player i shares no sensor with the others, else -c^i.
[[nodiscard]] double reward(const GameSpec& spec, std::size_t player, const JointAction& s);

/// Player utility: -C for unacceptable joint actions, otherwise reward().
[[nodiscard]] double utility(const GameSpec& spec, std::size_t player, const JointAction& s);

/// φ(s) = Σ_i r^i(s).
[[nodiscard]] double potential(const GameSpec& spec, const JointAction& s);

/// -C when s is unacceptable, otherwise φ(s).
[[nodiscard]] double global_reward(const GameSpec& spec, const JointAction& s);

/// Σ_i c^i(s^i) in Joules.
[[nodiscard]] double team_cost(const GameSpec& spec, const JointAction& s);

/// |x - y| / max(x, y). Throws InvalidArgument when max(x, y) <= 0.
[[nodiscard]] double relative_change(double x, double y);

}  // namespace mulegame::game
