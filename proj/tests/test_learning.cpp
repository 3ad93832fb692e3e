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

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "mulegame/error.hpp"
#include "support/games.hpp"

namespace mulegame::learning {
namespace {

using game::utility;

// Two players, sensors {1, 2}, M_max = 1: actions {}, (1), (2).
GameSpec small_game() {
  return testing::make_game(2, 2, 1, {{1.0, 100.0, 200.0}, {1.0, 50.0, 80.0}});
}

void expect_distribution(const std::vector<double>& sigma) {
  double total = 0.0;
  for (double p : sigma) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Config, Validation) {
  LearnerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 0.3;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.algorithm = Algorithm::kGeometricFP;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.gamma.reset();
  EXPECT_THROW(c.validate(), InvalidArgument);
  LearnerConfig d;
  d.max_iterations = 0;
  EXPECT_THROW(d.validate(), InvalidArgument);
}

TEST(Config, AlgorithmNames) {
  for (auto a : {Algorithm::kBestResponse, Algorithm::kFictitiousPlay, Algorithm::kGeometricFP,
                 Algorithm::kJSFP}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_EQ(parse_algorithm("best_response"), Algorithm::kBestResponse);
  EXPECT_THROW((void)parse_algorithm("regret"), InvalidArgument);
}

TEST(FictitiousPlay, CounterUpdate) {
  // Opponent with two actions: one sensor, M_max = 1.
  const auto g = testing::make_game(2, 1, 1, {{1, 5}, {1, 7}});
  auto state = FPState::uniform(g);
  EXPECT_EQ(state.weights[0][1], (std::vector<double>{1, 1}));
  state = fp_update(state, {1, 0});
  EXPECT_EQ(state.weights[0][1], (std::vector<double>{2, 1}));
  EXPECT_NEAR(state.mixtures[0][1][0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(state.mixtures[0][1][1], 1.0 / 3.0, 1e-15);
  // Player 1 saw player 0 play action 1.
  EXPECT_EQ(state.weights[1][0], (std::vector<double>{1, 2}));
  EXPECT_TRUE(state.weights[0][0].empty());
}

TEST(FictitiousPlay, RepeatedObservationClosedForm) {
  const auto g = small_game();
  auto state = FPState::uniform(g);
  for (int t = 1; t <= 50; ++t) {
    state = fp_update(state, {2, 1});
    EXPECT_NEAR(state.mixtures[0][1][1], (1.0 + t) / (3.0 + t), 1e-12);
    expect_distribution(state.mixtures[0][1]);
    expect_distribution(state.mixtures[1][0]);
  }
  EXPECT_THROW((void)fp_update(state, {0, 7}), InvalidArgument);
}

TEST(GeometricFP, Update) {
  const auto g = testing::make_game(2, 1, 1, {{1, 5}, {1, 7}});
  auto state = FPState::uniform(g);
  state = gfp_update(state, {0, 0}, 0.3);
  EXPECT_NEAR(state.mixtures[0][1][0], 0.65, 1e-15);
  EXPECT_NEAR(state.mixtures[0][1][1], 0.35, 1e-15);
  for (int t = 2; t <= 40; ++t) {
    state = gfp_update(state, {0, 0}, 0.3);
    EXPECT_NEAR(state.mixtures[0][1][1], std::pow(0.7, t) * 0.5, 1e-12);
    expect_distribution(state.mixtures[0][1]);
  }
  EXPECT_THROW((void)gfp_update(state, {0, 0}, 0.0), InvalidArgument);
}

TEST(JSFP, RecursionValues) {
  // Player 0 with one sensor and M_max = 1: the idle action costs 1, visiting costs 5,
  // so its utility when covering alone is 5/5 = 1 and when idle is -C.
  const auto g = testing::make_game(2, 1, 1, {{1, 5}, {1, 5}});
  auto state = JSFPState::zero(g);
  state = jsfp_update(state, g, 0, {0, 0}, 0);
  EXPECT_DOUBLE_EQ(state.rewards[0][0], -g.penalty());
  EXPECT_DOUBLE_EQ(state.rewards[0][1], 1.0);
  state = jsfp_update(state, g, 0, {0, 1}, 1);
  // Idle while the opponent covers: 5/1 = 5. Visiting too: -5.
  EXPECT_DOUBLE_EQ(state.rewards[0][0], 0.5 * (-g.penalty()) + 0.5 * 5.0);
  EXPECT_DOUBLE_EQ(state.rewards[0][1], 0.5 * 1.0 + 0.5 * (-5.0));
}

TEST(JSFP, WorkedScalarSteps) {
  // Five units of utility, then three: the running mean goes 5 then 4.
  const auto g = testing::make_game(2, 1, 1, {{1, 5}, {1, 5}});
  JSFPState state{{{0.0, 0.0}, {0.0, 0.0}}};
  state = jsfp_update(state, g, 0, {0, 1}, 0);
  EXPECT_DOUBLE_EQ(state.rewards[0][0], 5.0);
  // Injecting r = 5 and observing a payoff of 3 for action 0 yields 4.
  const auto h = testing::make_game(2, 1, 1, {{1, 3}, {1, 3}});
  state = jsfp_update(state, h, 0, {0, 1}, 1);
  EXPECT_DOUBLE_EQ(state.rewards[0][0], 4.0);
}

TEST(JSFP, MatchesRunningMean) {
  const auto g = testing::random_game(3, 3, 2, 21);
  std::mt19937_64 rng(5);
  auto state = JSFPState::zero(g);
  std::vector<std::vector<double>> sums(g.num_players());
  for (std::size_t i = 0; i < g.num_players(); ++i) sums[i].assign(g.num_actions(i), 0.0);
  for (std::size_t t = 0; t < 200; ++t) {
    JointAction s(g.num_players());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng() % g.num_actions(i);
    for (std::size_t i = 0; i < s.size(); ++i) {
      state = jsfp_update(state, g, i, s, t);
      auto h = s;
      for (std::size_t a = 0; a < g.num_actions(i); ++a) {
        h[i] = a;
        sums[i][a] += utility(g, i, h);
        const double mean = sums[i][a] / static_cast<double>(t + 1);
        EXPECT_NEAR(state.rewards[i][a], mean, 1e-9 * std::max(1.0, std::abs(mean)));
      }
    }
  }
}

TEST(JSFP, InertiaKeepsMaximizer) {
  JSFPState state{{{1.0, 3.0, 2.0}}};
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(jsfp_select(state, 0, 1, rng), 1u);
  // Exact ties with the maximum also keep the previous action.
  JSFPState tied{{{3.0, 3.0}}};
  for (int k = 0; k < 100; ++k) EXPECT_EQ(jsfp_select(tied, 0, 0, rng), 0u);
}

TEST(JSFP, SoftmaxFrequencies) {
  std::mt19937_64 rng(99);
  // Previous action is outside the support of the maximum, so every draw samples.
  JSFPState equal{{{0.0, 0.0, -1e6}}};
  int zeros = 0;
  for (int k = 0; k < 10000; ++k) zeros += jsfp_select(equal, 0, 2, rng) == 0 ? 1 : 0;
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.05);

  JSFPState skew{{{std::log(3.0), 0.0, -1e6}}};
  int counts[3] = {0, 0, 0};
  for (int k = 0; k < 10000; ++k) ++counts[jsfp_select(skew, 0, 2, rng)];
  EXPECT_NEAR(counts[0] / 10000.0, 0.75, 0.02);
  EXPECT_NEAR(counts[1] / 10000.0, 0.25, 0.02);
  EXPECT_EQ(counts[2], 0);
}

TEST(BestResponse, UniqueAndTies) {
  const auto g = small_game();
  // Opponent covers sensor 2; covering sensor 1 is the only acceptable reply.
  EXPECT_EQ(best_response(g, 0, {0, 2}), 1u);
  // Opponent covers nothing: no reply is acceptable, every utility is -C.
  EXPECT_EQ(best_response(g, 0, {0, 0}), 0u);
  // Identical costs on both sensors and an opponent that covers both.
  const auto h = testing::make_game(2, 2, 2, {{1, 9, 9, 20, 20}, {1, 9, 9, 20, 20}});
  EXPECT_EQ(best_response(h, 0, {0, 3}), 0u);
  EXPECT_EQ(best_response(h, 1, {0, 0}), 3u);
}

TEST(BestResponse, MatchesExhaustiveScanOnTwoByFive) {
  const auto g = testing::make_game(2, 2, 2, {{1, 30, 45, 70, 65}, {1, 25, 40, 90, 80}});
  for (std::size_t b = 0; b < g.num_actions(1); ++b) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < g.num_actions(0); ++a) {
      if (utility(g, 0, {a, b}) > utility(g, 0, {best, b})) best = a;
    }
    EXPECT_EQ(best_response(g, 0, {0, b}), best) << "opponent action " << b;
  }
}

TEST(ExpectedUtility, DegenerateAndUniform) {
  const auto g = small_game();
  std::vector<std::vector<double>> point{{}, {0.0, 0.0, 1.0}};
  EXPECT_DOUBLE_EQ(expected_utility(g, 0, 1, point), utility(g, 0, {1, 2}));
  std::vector<std::vector<double>> half{{}, {0.0, 0.5, 0.5}};
  EXPECT_DOUBLE_EQ(expected_utility(g, 0, 1, half),
                   0.5 * utility(g, 0, {1, 1}) + 0.5 * utility(g, 0, {1, 2}));
  std::vector<std::vector<double>> bad{{}, {0.5, 0.6, 0.0}};
  EXPECT_THROW((void)expected_utility(g, 0, 1, bad), InvalidArgument);
}

TEST(ExpectedUtility, ThreePlayerBruteForce) {
  const auto g = testing::make_game(3, 2, 1, {{1, 10, 12}, {1, 11, 9}, {1, 14, 13}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.1, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> mix(3);
    for (auto& m : mix) {
      m = {u01(rng), u01(rng), u01(rng)};
      const double z = std::accumulate(m.begin(), m.end(), 0.0);
      for (double& p : m) p /= z;
    }
    for (std::size_t a = 0; a < 3; ++a) {
      double brute = 0.0;
      for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t c = 0; c < 3; ++c) brute += mix[1][b] * mix[2][c] * utility(g, 0, {a, b, c});
      }
      EXPECT_NEAR(expected_utility(g, 0, a, mix), brute, 1e-12 * std::max(1.0, std::abs(brute)));
    }
  }
}

TEST(Run, DeterministicAndBounded) {
  const auto g = testing::random_game(3, 4, 2, 17);
  for (auto alg : {Algorithm::kBestResponse, Algorithm::kFictitiousPlay, Algorithm::kGeometricFP,
                   Algorithm::kJSFP}) {
    LearnerConfig c;
    c.algorithm = alg;
    if (alg == Algorithm::kGeometricFP) c.gamma = 0.3;
    c.max_iterations = 60;
    c.rng_seed = 11;
    const auto a = run(g, c);
    const auto b = run(g, c);
    ASSERT_EQ(a.records.size(), 60u);
    for (std::size_t t = 0; t < a.records.size(); ++t) {
      EXPECT_EQ(a.records[t].joint, b.records[t].joint);
      EXPECT_DOUBLE_EQ(a.records[t].team_cost, game::team_cost(g, a.records[t].joint));
    }
    EXPECT_EQ(a.converged_at, b.converged_at);
    if (a.converged_at) {
      for (std::size_t t = *a.converged_at; t < a.records.size(); ++t) {
        EXPECT_EQ(a.records[t].joint, a.final().joint);
      }
    }
  }
}

TEST(Run, SeedChangesInitialDraw) {
  const auto g = testing::random_game(3, 4, 2, 17);
  LearnerConfig c;
  c.max_iterations = 1;
  int differing = 0;
  const auto base = run(g, c).records[0].joint;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    c.rng_seed = seed;
    differing += run(g, c).records[0].joint != base ? 1 : 0;
  }
  EXPECT_GT(differing, 5);
}

TEST(Run, FictitiousPlayAbsorbsStrictEquilibrium) {
  // Player 0 covers sensor 1, player 1 covers sensor 2, each via its only cheap action.
  const auto g = testing::make_game(2, 2, 1, {{1, 10, 60}, {1, 60, 10}});
  FPState beliefs = FPState::uniform(g);
  for (int k = 0; k < 20; ++k) beliefs = fp_update(beliefs, {1, 2});
  LearnerConfig c;
  c.algorithm = Algorithm::kFictitiousPlay;
  c.max_iterations = 40;
  const auto trace = run(g, c, {JointAction{1, 2}, beliefs});
  for (const auto& r : trace.records) EXPECT_EQ(r.joint, (JointAction{1, 2}));
  EXPECT_EQ(trace.converged_at, std::optional<std::size_t>{0});
}

TEST(Run, JSFPReachesAcceptableJointActions) {
  int acceptable = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = testing::random_game(3, 4, 2, 100 + seed);
    LearnerConfig c;
    c.rng_seed = seed;
    c.max_iterations = 300;
    acceptable += run(g, c).final().acceptable ? 1 : 0;
  }
  EXPECT_GE(acceptable, 8);
}

TEST(ConvergencePoint, TrailingRun) {
  std::vector<IterationRecord> r;
  for (auto s : {JointAction{0}, JointAction{1}, JointAction{1}, JointAction{1}}) {
    r.push_back({s, 0.0, true});
  }
  EXPECT_EQ(convergence_point(r, 3), std::optional<std::size_t>{1});
  EXPECT_EQ(convergence_point(r, 4), std::nullopt);
  EXPECT_EQ(convergence_point({}, 1), std::nullopt);
}

TEST(PlayerRng, IndependentStreams) {
  auto a = player_rng(7, 0);
  auto b = player_rng(7, 1);
  auto c = player_rng(7, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_EQ(x, c());
}

}  // namespace
}  // namespace mulegame::learning
