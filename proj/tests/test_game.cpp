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

#include "mulegame/game.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gtest/gtest.h"
#include "mulegame/error.hpp"
#include "support/games.hpp"

namespace mulegame::game {
namespace {

using geometry::Point;
using geometry::Pose;
using geometry::Region;
using geometry::Sensor;

TEST(ActionCount, KnownValues) {
  EXPECT_EQ(action_count(4, 2), 17u);
  EXPECT_EQ(action_count(4, 3), 41u);
  EXPECT_EQ(action_count(7, 0), 1u);
  EXPECT_EQ(action_count(0, 0), 1u);
  EXPECT_THROW((void)action_count(2, 3), InvalidArgument);
}

TEST(EnumerateActions, SmallCasesByHand) {
  const std::vector<int> one{1};
  const auto a = enumerate_actions(one, 1);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_TRUE(a[0].nodes.empty());
  EXPECT_EQ(a[1].nodes, std::vector<int>{1});

  const std::vector<int> two{2, 1};
  const auto b = enumerate_actions(two, 2);
  ASSERT_EQ(b.size(), 5u);
  const std::vector<std::vector<int>> expected{{}, {1}, {2}, {1, 2}, {2, 1}};
  for (std::size_t k = 0; k < b.size(); ++k) {
    EXPECT_EQ(b[k].nodes, expected[k]);
    EXPECT_EQ(b[k].id, static_cast<int>(k));
  }
}

TEST(EnumerateActions, MatchesFormulaExhaustively) {
  for (int m = 0; m <= 5; ++m) {
    std::vector<int> ids;
    for (int k = 0; k < m; ++k) ids.push_back(10 * k + 3);
    for (int m_max = 0; m_max <= std::min(m, 3); ++m_max) {
      const auto actions = enumerate_actions(ids, m_max);
      EXPECT_EQ(actions.size(), action_count(m, m_max)) << m << " " << m_max;
      std::set<std::vector<int>> distinct;
      for (const auto& a : actions) {
        EXPECT_LE(a.nodes.size(), static_cast<std::size_t>(m_max));
        EXPECT_EQ(std::set<int>(a.nodes.begin(), a.nodes.end()).size(), a.nodes.size());
        distinct.insert(a.nodes);
      }
      EXPECT_EQ(distinct.size(), actions.size());
      EXPECT_TRUE(std::is_sorted(actions.begin(), actions.end(), [](const Action& x, const Action& y) {
        return x.nodes.size() != y.nodes.size() ? x.nodes.size() < y.nodes.size() : x.nodes < y.nodes;
      }));
    }
  }
}

TEST(EnumerateActions, RejectsDuplicatesAndLargeMmax) {
  const std::vector<int> dup{1, 1};
  EXPECT_THROW((void)enumerate_actions(dup, 1), InvalidArgument);
  const std::vector<int> one{1};
  EXPECT_THROW((void)enumerate_actions(one, 2), InvalidArgument);
}

// Two players, sensors {1, 2}, M_max = 1: actions are {}, (1), (2).
GameSpec two_by_two() {
  return testing::make_game(2, 2, 1, {{1.0, 100.0, 200.0}, {1.0, 50.0, 80.0}});
}

TEST(GameSpecTest, DerivedQuantities) {
  const auto g = two_by_two();
  EXPECT_EQ(g.max_cost(0), 200.0);
  EXPECT_EQ(g.min_cost(1), 1.0);
  // C = 1 + max(200/1, 200) + max(80/1, 80)
  EXPECT_DOUBLE_EQ(g.penalty(), 281.0);
  EXPECT_EQ(g.coverage(0, 2), 0b10u);
  EXPECT_EQ(g.full_coverage(), 0b11u);
}

TEST(GameSpecTest, Validation) {
  std::vector<int> ids{1};
  const auto acts = enumerate_actions(ids, 1);
  EXPECT_THROW(GameSpec({0}, ids, {acts}, {{0.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(GameSpec({0}, ids, {acts}, {{1.0}}), InvalidArgument);
  EXPECT_THROW(GameSpec({0}, ids, {acts}, {{1.0, 2.0}}, 2.0), InvalidArgument);
  EXPECT_NO_THROW(GameSpec({0}, ids, {acts}, {{1.0, 2.0}}, 2.5));
  EXPECT_THROW(GameSpec({0}, {2}, {acts}, {{1.0, 2.0}}), InvalidArgument);

  const auto g = two_by_two();
  EXPECT_THROW(g.check({0}), InvalidArgument);
  EXPECT_THROW(g.check({0, 3}), InvalidArgument);
}

TEST(Utility, WorkedValues) {
  const auto g = two_by_two();
  // Player 0 takes sensor 1 (c = 100, P = 200), player 1 takes sensor 2.
  EXPECT_DOUBLE_EQ(utility(g, 0, {1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(utility(g, 1, {1, 2}), 1.0);
  // Overlap on sensor 1 while player 0 covers the rest.
  const auto h = testing::make_game(2, 2, 2, {{1, 100, 150, 190, 200}, {1, 50, 60, 70, 80}});
  EXPECT_DOUBLE_EQ(utility(h, 0, {3, 1}), -190.0);
  EXPECT_TRUE(is_acceptable(h, {3, 1}));
  EXPECT_FALSE(is_conflict_free(h, {3, 1}));
  // Unacceptable.
  EXPECT_DOUBLE_EQ(utility(g, 0, {1, 0}), -g.penalty());
  EXPECT_DOUBLE_EQ(utility(g, 1, {0, 0}), -g.penalty());
}

TEST(Acceptability, Cases) {
  const auto g = two_by_two();
  EXPECT_FALSE(is_acceptable(g, {0, 0}));
  EXPECT_TRUE(is_acceptable(g, {2, 1}));
  EXPECT_TRUE(is_conflict_free(g, {2, 1}));
  EXPECT_FALSE(is_acceptable(g, {1, 1}));
  EXPECT_FALSE(is_conflict_free(g, {1, 1}));
}

TEST(Potential, Definitions) {
  const auto g = two_by_two();
  EXPECT_DOUBLE_EQ(potential(g, {1, 2}), 2.0 + 1.0);
  EXPECT_DOUBLE_EQ(potential(g, {0, 0}), 200.0 + 80.0);
  EXPECT_DOUBLE_EQ(global_reward(g, {0, 0}), -g.penalty());
  EXPECT_DOUBLE_EQ(global_reward(g, {2, 1}), potential(g, {2, 1}));
}

// Every joint action of a game, by mixed-radix counting.
std::vector<JointAction> all_joint(const GameSpec& g) {
  std::vector<JointAction> out;
  JointAction s(g.num_players(), 0);
  while (true) {
    out.push_back(s);
    std::size_t k = 0;
    for (; k < s.size(); ++k) {
      if (++s[k] < g.num_actions(k)) break;
      s[k] = 0;
    }
    if (k == s.size()) return out;
  }
}

TEST(Potential, ExactOnConflictFreeAcceptableSubspace) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = testing::random_game(2, 3, 2, seed);
    int pairs = 0;
    for (const auto& s : all_joint(g)) {
      if (!is_acceptable(g, s) || !is_conflict_free(g, s)) continue;
      for (std::size_t i = 0; i < g.num_players(); ++i) {
        for (std::size_t a = 0; a < g.num_actions(i); ++a) {
          auto t = s;
          t[i] = a;
          if (!is_acceptable(g, t) || !is_conflict_free(g, t)) continue;
          // Equal up to the rounding of summing the other players' terms.
          const double scale = std::abs(potential(g, s)) + std::abs(potential(g, t));
          EXPECT_NEAR(utility(g, i, s) - utility(g, i, t), potential(g, s) - potential(g, t),
                      1e-13 * scale);
          ++pairs;
        }
      }
    }
    EXPECT_GT(pairs, 0);
  }
}

TEST(Utility, RangeCheck) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = testing::random_game(3, 3, 2, seed);
    double max_p = 0.0;
    double upper = 0.0;
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      max_p = std::max(max_p, g.max_cost(i));
      upper = std::max(upper, g.max_cost(i) / g.min_cost(i));
    }
    double bound = 0.0;
    for (std::size_t i = 0; i < g.num_players(); ++i) bound += g.max_cost(i) / g.min_cost(i);
    for (const auto& s : all_joint(g)) {
      for (std::size_t i = 0; i < g.num_players(); ++i) {
        const double u = utility(g, i, s);
        EXPECT_TRUE(u == -g.penalty() || u >= -max_p) << u;
        EXPECT_LE(u, upper);
      }
      EXPECT_LE(global_reward(g, s), bound);
    }
  }
}

TEST(TeamCost, SumAndPermutationInvariance) {
  const auto g = testing::random_game(2, 3, 2, 9);
  // Swap the two players together with their cost tables.
  std::vector<std::vector<Action>> spaces{g.actions(1), g.actions(0)};
  const GameSpec swapped({1, 0}, g.sensors(), spaces, {g.costs(1), g.costs(0)});
  for (const auto& s : all_joint(g)) {
    EXPECT_DOUBLE_EQ(team_cost(g, s), g.cost(0, s[0]) + g.cost(1, s[1]));
    EXPECT_DOUBLE_EQ(team_cost(g, s), team_cost(swapped, {s[1], s[0]}));
  }
  const auto idle = testing::random_game(3, 2, 1, 4, 2.5);
  EXPECT_DOUBLE_EQ(team_cost(idle, {0, 0, 0}), 7.5);
}

TEST(RelativeChange, Values) {
  EXPECT_NEAR(relative_change(493.2, 660.7), 0.2535, 5e-5);
  EXPECT_NEAR(relative_change(493.2, 716.4), 0.3116, 5e-5);
  EXPECT_NEAR(relative_change(633.3, 493.2), 0.2212, 5e-5);
  EXPECT_EQ(relative_change(4.0, 4.0), 0.0);
  EXPECT_THROW((void)relative_change(0.0, 0.0), InvalidArgument);
}

class CostTableTest : public ::testing::Test {
 protected:
  const energy::EnergyModel model_{0.5, 2.0, 5.0, 3.0, 1.0};
  const Region field_{0.0, 20.0, 0.0, 20.0};
  const energy::LatticeSpec lattice_ = energy::default_lattice(model_, field_, 40);
};

TEST_F(CostTableTest, CostsAndBounds) {
  const std::vector<Robot> robots{{0, Pose(2, 2, 0)}, {1, Pose(18, 18, std::numbers::pi)}};
  const std::vector<Sensor> sensors{{1, {6, 14}}, {2, {14, 6}}};
  const auto table = build_cost_table(robots, sensors, 2, model_, lattice_, field_, 1.0, {}, 2);
  const auto& g = table.game;
  ASSERT_EQ(g.num_players(), 2u);
  EXPECT_TRUE(g.warnings().empty());
  const double rate = energy::heuristic_rate(model_);
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(g.num_actions(i), 5u);
    EXPECT_DOUBLE_EQ(g.cost(i, 0), 1.0);
    EXPECT_DOUBLE_EQ(g.max_cost(i), *std::max_element(g.costs(i).begin(), g.costs(i).end()));
    for (std::size_t a = 0; a < g.num_actions(i); ++a) {
      EXPECT_DOUBLE_EQ(table.tours[i][a].total_energy, g.cost(i, a));
      // Closed Euclidean tour length through the visited sensors.
      Point prev = robots[i].pose.position();
      double length = 0.0;
      for (int id : g.actions(i)[a].nodes) {
        const Point p = sensors[static_cast<std::size_t>(id - 1)].position;
        length += geometry::distance(prev, p);
        prev = p;
      }
      length += geometry::distance(prev, robots[i].pose.position());
      EXPECT_GE(g.cost(i, a), rate * length - 1e-9);
    }
  }
}

TEST_F(CostTableTest, ThreadCountDoesNotChangeCosts) {
  const std::vector<Robot> robots{{4, Pose(3, 10, 0.5)}};
  const std::vector<Sensor> sensors{{1, {10, 3}}, {2, {12, 16}}};
  const auto a = build_cost_table(robots, sensors, 2, model_, lattice_, field_, 1.0, {}, 1);
  const auto b = build_cost_table(robots, sensors, 2, model_, lattice_, field_, 1.0, {}, 3);
  EXPECT_EQ(a.game.costs(0), b.game.costs(0));
  EXPECT_EQ(a.game.players(), std::vector<int>{4});
}

TEST_F(CostTableTest, UnreachableActionsArePruned) {
  const Region strip(0.0, 10.0, 0.0, 0.1);
  auto lattice = lattice_;
  lattice.grid_step = 0.1;
  const std::vector<Robot> robots{{0, Pose(1, 0, 0)}};
  const std::vector<Sensor> sensors{{1, {5, 0}}};
  const auto table = build_cost_table(robots, sensors, 1, model_, lattice, strip);
  ASSERT_EQ(table.game.num_actions(0), 1u);
  EXPECT_TRUE(table.game.actions(0)[0].nodes.empty());
  ASSERT_EQ(table.game.warnings().size(), 1u);
  EXPECT_EQ(table.game.warnings()[0].action_id, 1);
}

TEST_F(CostTableTest, RejectsOutsidePositions) {
  const std::vector<Robot> robots{{0, Pose(2, 2, 0)}};
  const std::vector<Sensor> outside{{1, {30, 3}}};
  EXPECT_THROW((void)build_cost_table(robots, outside, 1, model_, lattice_, field_),
               InvalidArgument);
}

}  // namespace
}  // namespace mulegame::game
