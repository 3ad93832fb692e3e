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
 * @file   learning.hpp
 * @brief  Iterative learners over a GameSpec: best response to the last joint
 *         action, fictitious play, geometric fictitious play, and joint
 *         strategy fictitious play with inertia.
 *
 * All players move simultaneously. Iteration 0 is a uniformly random joint
 * action (or a supplied one); iteration t responds to what was observed up
 * to iteration t-1.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mulegame/game.hpp"

namespace mulegame::learning {

using game::GameSpec;
using game::JointAction;

enum class Algorithm { kBestResponse, kFictitiousPlay, kGeometricFP, kJSFP };

[[nodiscard]] std::string_view to_string(Algorithm a) noexcept;
/// Accepts br, fp, gfp, jsfp and the long names best_response/jsfp.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::kJSFP;
  std::optional<double> gamma;  // geometric FP only, in (0, 1)
  int max_iterations = 500;
  int convergence_window = 10;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Beliefs held by every player i about every opponent j: weights κ and the
/// empirical mixture σ. Entries for j == i are left empty.
struct FPState {
  std::vector<std::vector<std::vector<double>>> weights;
  std::vector<std::vector<std::vector<double>>> mixtures;

  /// Equal weights (κ = 1) over every opponent action.
  [[nodiscard]] static FPState uniform(const GameSpec& spec);
};

/// κ(s^j) += 1 for each opponent's observed action, then σ = κ / Σκ.
[[nodiscard]] FPState fp_update(FPState state, const JointAction& observed);

/// σ ← (1-γ)·σ + γ·1[observed].
[[nodiscard]] FPState gfp_update(FPState state, const JointAction& observed, double gamma);

struct JSFPState {
  std::vector<std::vector<double>> rewards;  // r^i over S^i

  [[nodiscard]] static JSFPState zero(const GameSpec& spec);
};

/**
 * Running mean of hypothetical payoffs for player i:
 *   r(s^i) ← (1 - 1/(t+1))·r(s^i) + u^i(s^i, observed^{-i}) / (t+1).
 * `observed` is a full joint action; player i's own entry is ignored.
 */
[[nodiscard]] JSFPState jsfp_update(JSFPState state, const GameSpec& spec, std::size_t player,
                                    const JointAction& observed, std::size_t t);

/// Pure best response to the opponents' entries of `opponents`; ties go to
/// the smallest action index.
[[nodiscard]] std::size_t best_response(const GameSpec& spec, std::size_t player,
                                        const JointAction& opponents);

/// Exact expectation of u^i(s^i, ·) over the product of opponent mixtures.
/// `mixtures[j]` is σ^j; the entry for `player` is ignored.
[[nodiscard]] double expected_utility(const GameSpec& spec, std::size_t player,
                                      std::size_t action,
                                      const std::vector<std::vector<double>>& mixtures);

/// argmax of expected_utility, ties to the smallest action index.
[[nodiscard]] std::size_t best_response_mixed(const GameSpec& spec, std::size_t player,
                                              const std::vector<std::vector<double>>& mixtures);

/// Keep `previous` if it maximizes r^i; otherwise draw from softmax(r^i).
[[nodiscard]] std::size_t jsfp_select(const JSFPState& state, std::size_t player,
                                      std::size_t previous, std::mt19937_64& rng);

struct IterationRecord {
  JointAction joint;
  double team_cost = 0.0;
  bool acceptable = false;
};

struct IterationTrace {
  Algorithm algorithm = Algorithm::kJSFP;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  /// Start of the trailing run of identical joint actions, when that run is
  /// at least convergence_window iterations long.
  std::optional<std::size_t> converged_at;

  [[nodiscard]] const IterationRecord& final() const { return records.back(); }
};

struct InitialConditions {
  std::optional<JointAction> joint;  // replaces the random iteration-0 draw
  std::optional<FPState> beliefs;    // fictitious play family only
};

/// Per-player generator derived from the run seed and the player index.
[[nodiscard]] std::mt19937_64 player_rng(std::uint64_t seed, std::size_t player);

[[nodiscard]] IterationTrace run(const GameSpec& spec, const LearnerConfig& config,
                                 const InitialConditions& initial = {});

/// converged_at for a sequence of joint actions (see IterationTrace).
[[nodiscard]] std::optional<std::size_t> convergence_point(
    const std::vector<IterationRecord>& records, int window);

}  // namespace mulegame::learning
