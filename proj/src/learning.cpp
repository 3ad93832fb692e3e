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

#include "mulegame/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mulegame/error.hpp"

namespace mulegame::learning {

namespace {

// Values closer than this (relative) count as ties.
constexpr double kTieTolerance = 1e-9;

bool beats(double candidate, double best) {
  return candidate > best + kTieTolerance * std::max(1.0, std::abs(best));
}

bool ties(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_distribution(const std::vector<double>& sigma) {
  double total = 0.0;
  for (double p : sigma) {
    if (!(p >= 0.0)) throw InvalidArgument("mixture entries must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mixture must sum to 1");
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::kBestResponse: return "br";
    case Algorithm::kFictitiousPlay: return "fp";
    case Algorithm::kGeometricFP: return "gfp";
    case Algorithm::kJSFP: return "jsfp";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "br" || name == "best_response") return Algorithm::kBestResponse;
  if (name == "fp") return Algorithm::kFictitiousPlay;
  if (name == "gfp") return Algorithm::kGeometricFP;
  if (name == "jsfp") return Algorithm::kJSFP;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

void LearnerConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (convergence_window < 1) throw InvalidArgument("convergence_window must be positive");
  if (algorithm == Algorithm::kGeometricFP) {
    if (!gamma || !(*gamma > 0.0 && *gamma < 1.0)) {
      throw InvalidArgument("geometric fictitious play needs gamma in (0, 1)");
    }
  } else if (gamma) {
    throw InvalidArgument("gamma only applies to geometric fictitious play");
  }
}

FPState FPState::uniform(const GameSpec& spec) {
  const std::size_t n = spec.num_players();
  FPState state;
  state.weights.resize(n, std::vector<std::vector<double>>(n));
  state.mixtures.resize(n, std::vector<std::vector<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t m = spec.num_actions(j);
      state.weights[i][j].assign(m, 1.0);
      state.mixtures[i][j].assign(m, 1.0 / static_cast<double>(m));
    }
  }
  return state;
}

FPState fp_update(FPState state, const JointAction& observed) {
  const std::size_t n = state.weights.size();
  if (observed.size() != n) throw InvalidArgument("observed joint action size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto& kappa = state.weights[i][j];
      if (observed[j] >= kappa.size()) throw InvalidArgument("observed action out of range");
      kappa[observed[j]] += 1.0;
      const double total = std::accumulate(kappa.begin(), kappa.end(), 0.0);
      auto& sigma = state.mixtures[i][j];
      sigma.resize(kappa.size());
      for (std::size_t a = 0; a < kappa.size(); ++a) sigma[a] = kappa[a] / total;
    }
  }
  return state;
}

FPState gfp_update(FPState state, const JointAction& observed, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  const std::size_t n = state.mixtures.size();
  if (observed.size() != n) throw InvalidArgument("observed joint action size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto& sigma = state.mixtures[i][j];
      if (observed[j] >= sigma.size()) throw InvalidArgument("observed action out of range");
      for (std::size_t a = 0; a < sigma.size(); ++a) {
        sigma[a] = (1.0 - gamma) * sigma[a] + (a == observed[j] ? gamma : 0.0);
      }
    }
  }
  return state;
}

JSFPState JSFPState::zero(const GameSpec& spec) {
  JSFPState state;
  for (std::size_t i = 0; i < spec.num_players(); ++i) {
    state.rewards.emplace_back(spec.num_actions(i), 0.0);
  }
  return state;
}

JSFPState jsfp_update(JSFPState state, const GameSpec& spec, std::size_t player,
                      const JointAction& observed, std::size_t t) {
  spec.check(observed);
  auto& r = state.rewards.at(player);
  const double step = 1.0 / static_cast<double>(t + 1);
  JointAction hypothetical = observed;
  for (std::size_t a = 0; a < r.size(); ++a) {
    hypothetical[player] = a;
    r[a] = (1.0 - step) * r[a] + step * game::utility(spec, player, hypothetical);
  }
  return state;
}

std::size_t best_response(const GameSpec& spec, std::size_t player,
                          const JointAction& opponents) {
  JointAction s = opponents;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < spec.num_actions(player); ++a) {
    s[player] = a;
    const double u = game::utility(spec, player, s);
    if (a == 0 || beats(u, best_value)) {
      best = a;
      best_value = u;
    }
  }
  return best;
}

double expected_utility(const GameSpec& spec, std::size_t player, std::size_t action,
                        const std::vector<std::vector<double>>& mixtures) {
  const std::size_t n = spec.num_players();
  if (mixtures.size() != n) throw InvalidArgument("one mixture per player required");
  std::vector<std::size_t> opponents;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == player) continue;
    if (mixtures[j].size() != spec.num_actions(j)) {
      throw InvalidArgument("mixture size does not match the action space");
    }
    check_distribution(mixtures[j]);
    opponents.push_back(j);
  }

  // Mixed-radix walk over the opponents' product space.
  JointAction s(n, 0);
  s[player] = action;
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    for (std::size_t j : opponents) weight *= mixtures[j][s[j]];
    if (weight > 0.0) total += weight * game::utility(spec, player, s);

    std::size_t k = 0;
    for (; k < opponents.size(); ++k) {
      const std::size_t j = opponents[k];
      if (++s[j] < spec.num_actions(j)) break;
      s[j] = 0;
    }
    if (k == opponents.size()) break;
  }
  return total;
}

std::size_t best_response_mixed(const GameSpec& spec, std::size_t player,
                                const std::vector<std::vector<double>>& mixtures) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < spec.num_actions(player); ++a) {
    const double u = expected_utility(spec, player, a, mixtures);
    if (a == 0 || beats(u, best_value)) {
      best = a;
      best_value = u;
    }
  }
  return best;
}

std::size_t jsfp_select(const JSFPState& state, std::size_t player, std::size_t previous,
                        std::mt19937_64& rng) {
  const auto& r = state.rewards.at(player);
  if (previous >= r.size()) throw InvalidArgument("previous action out of range");
  const double top = *std::max_element(r.begin(), r.end());
  if (ties(r[previous], top)) return previous;

  // Inverse-CDF draw from softmax(r), shifted by the maximum for stability.
  std::vector<double> weights(r.size());
  double total = 0.0;
  for (std::size_t a = 0; a < r.size(); ++a) {
    weights[a] = std::exp(r[a] - top);
    total += weights[a];
  }
  const double w = std::uniform_real_distribution<double>(0.0, total)(rng);
  double cumulative = 0.0;
  for (std::size_t a = 0; a < r.size(); ++a) {
    cumulative += weights[a];
    if (w < cumulative) return a;
  }
  return r.size() - 1;
}

std::mt19937_64 player_rng(std::uint64_t seed, std::size_t player) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(player), 0x6d756c65u};
  return std::mt19937_64(seq);
}

std::optional<std::size_t> convergence_point(const std::vector<IterationRecord>& records,
                                             int window) {
  if (records.empty()) return std::nullopt;
  std::size_t start = records.size() - 1;
  while (start > 0 && records[start - 1].joint == records.back().joint) --start;
  if (records.size() - start >= static_cast<std::size_t>(window)) return start;
  return std::nullopt;
}

IterationTrace run(const GameSpec& spec, const LearnerConfig& config,
                   const InitialConditions& initial) {
  config.validate();
  const std::size_t n = spec.num_players();

  std::vector<std::mt19937_64> rngs;
  for (std::size_t i = 0; i < n; ++i) rngs.push_back(player_rng(config.rng_seed, i));

  JointAction current(n);
  if (initial.joint) {
    spec.check(*initial.joint);
    current = *initial.joint;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      current[i] = std::uniform_int_distribution<std::size_t>(0, spec.num_actions(i) - 1)(rngs[i]);
    }
  }

  IterationTrace trace;
  trace.algorithm = config.algorithm;
  trace.seed = config.rng_seed;
  trace.records.reserve(static_cast<std::size_t>(config.max_iterations));
  auto record = [&](const JointAction& s) {
    trace.records.push_back({s, game::team_cost(spec, s), game::is_acceptable(spec, s)});
  };
  record(current);

  FPState beliefs = initial.beliefs ? *initial.beliefs : FPState::uniform(spec);
  JSFPState estimates = JSFPState::zero(spec);

  auto observe = [&](const JointAction& s, std::size_t t) {
    switch (config.algorithm) {
      case Algorithm::kFictitiousPlay: beliefs = fp_update(std::move(beliefs), s); break;
      case Algorithm::kGeometricFP: beliefs = gfp_update(std::move(beliefs), s, *config.gamma); break;
      case Algorithm::kJSFP:
        for (std::size_t i = 0; i < n; ++i) estimates = jsfp_update(std::move(estimates), spec, i, s, t);
        break;
      case Algorithm::kBestResponse: break;
    }
  };
  observe(current, 0);

  for (int t = 1; t < config.max_iterations; ++t) {
    JointAction next(n);
    for (std::size_t i = 0; i < n; ++i) {
      switch (config.algorithm) {
        case Algorithm::kBestResponse: next[i] = best_response(spec, i, current); break;
        case Algorithm::kJSFP: next[i] = jsfp_select(estimates, i, current[i], rngs[i]); break;
        default: {
          auto mixtures = beliefs.mixtures[i];
          mixtures[i].assign(spec.num_actions(i), 0.0);
          mixtures[i][0] = 1.0;  // own slot is ignored by expected_utility
          next[i] = best_response_mixed(spec, i, mixtures);
        }
      }
    }
    current = std::move(next);
    record(current);
    observe(current, static_cast<std::size_t>(t));
  }

  trace.converged_at = convergence_point(trace.records, config.convergence_window);
  return trace;
}

}  // namespace mulegame::learning
