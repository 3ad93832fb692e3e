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
 * @file   oracle.hpp
 * @brief  Exhaustive reference solvers over a GameSpec.
 *
 * Everything here enumerates the full joint action space, so each entry
 * point refuses games with more than `budget` joint actions.
 */

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "mulegame/game.hpp"

namespace mulegame::oracle {

using game::GameSpec;
using game::JointAction;

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Π_i |S^i|, saturating at UINT64_MAX.
[[nodiscard]] std::uint64_t joint_action_count(const GameSpec& spec);

struct Optimum {
  JointAction joint;            // cheapest acceptable joint action
  double team_cost = 0.0;       // Joules
  JointAction worst_joint;      // most expensive acceptable joint action
  double worst_acceptable = 0.0;
  std::uint64_t acceptable_count = 0;
};

/**
 * Cheapest acceptable joint action; equal costs resolve to the
 * lexicographically smallest joint action (player 0 most significant).
 * Throws BudgetExceeded when the space is larger than `budget`, and
 * Infeasible when no joint action is acceptable. The scan is split over
 * `threads` workers by player 0's action range (0 = hardware concurrency);
 * the result does not depend on the worker count.
 */
[[nodiscard]] Optimum brute_force_optimum(const GameSpec& spec,
                                          std::uint64_t budget = kDefaultBudget,
                                          unsigned threads = 0);

struct Deviation {
  std::size_t player = 0;
  std::size_t action = 0;
  double gain = 0.0;  // u^i after deviating minus u^i before
};

struct NashCheck {
  bool nash = false;
  /// Every player's current action is its unique best reply.
  bool strict = false;
  /// The most profitable deviation when `nash` is false.
  std::optional<Deviation> improving;
};

/// Unilateral-deviation scan. Gains within 1e-9 (relative) count as ties.
[[nodiscard]] NashCheck check_nash(const GameSpec& spec, const JointAction& s);
[[nodiscard]] bool is_nash(const GameSpec& spec, const JointAction& s);

/// All pure Nash equilibria in lexicographic order.
[[nodiscard]] std::vector<JointAction> nash_set(const GameSpec& spec,
                                                std::uint64_t budget = kDefaultBudget);

/// A unilateral deviation s -> s' (player changes to `to`) where the sign of
/// Δu^i disagrees with the sign of Δφ.
struct PotentialViolation {
  JointAction from;
  std::size_t player = 0;
  std::size_t to = 0;
  double delta_utility = 0.0;
  double delta_potential = 0.0;
};

struct PotentialAudit {
  std::uint64_t deviations = 0;
  /// Deviations with both endpoints acceptable and conflict-free.
  std::uint64_t subspace_deviations = 0;
  /// max |Δu^i - Δφ| over the subspace deviations.
  double max_subspace_error = 0.0;
  std::vector<PotentialViolation> violations;

  /// Δu^i = Δφ on the subspace, up to floating-point summation error.
  [[nodiscard]] bool exact_on_subspace() const;
};

[[nodiscard]] PotentialAudit audit_potential(const GameSpec& spec,
                                             std::uint64_t budget = kDefaultBudget);

struct OracleReport {
  std::optional<Optimum> optimum;  // empty when infeasible
  std::vector<JointAction> nash;
  PotentialAudit audit;
};

[[nodiscard]] OracleReport build_report(const GameSpec& spec,
                                        std::uint64_t budget = kDefaultBudget);

/// Pretty-printed JSON; joint actions are written as original action ids.
/// At most `max_violations` violations are listed; the count is always total.
void write_report(const GameSpec& spec, const OracleReport& report, std::ostream& out,
                  std::size_t max_violations = std::numeric_limits<std::size_t>::max());

}  // namespace mulegame::oracle
