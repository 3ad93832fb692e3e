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
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "mulegame/error.hpp"

namespace mulegame::game {

std::uint64_t action_count(int sensor_count, int m_max) {
  if (sensor_count < 0 || m_max < 0) {
    throw InvalidArgument("action_count arguments must be non-negative");
  }
  if (m_max > sensor_count) throw InvalidArgument("m_max exceeds the number of sensors");
  std::uint64_t total = 1;
  std::uint64_t falling = 1;  // M!/(M-k)!
  for (int k = 1; k <= m_max; ++k) {
    falling *= static_cast<std::uint64_t>(sensor_count - k + 1);
    total += falling;
  }
  return total;
}

namespace {

void extend(const std::vector<int>& ids, std::size_t length, std::vector<int>& prefix,
            std::vector<bool>& used, std::vector<Action>& out) {
  if (prefix.size() == length) {
    out.push_back({static_cast<int>(out.size()), prefix});
    return;
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    prefix.push_back(ids[k]);
    extend(ids, length, prefix, used, out);
    prefix.pop_back();
    used[k] = false;
  }
}

}  // namespace

std::vector<Action> enumerate_actions(std::span<const int> sensors, int m_max) {
  std::vector<int> ids(sensors.begin(), sensors.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InvalidArgument("sensor ids must be unique");
  }
  const auto expected = action_count(static_cast<int>(ids.size()), m_max);

  std::vector<Action> out;
  out.reserve(expected);
  std::vector<int> prefix;
  std::vector<bool> used(ids.size(), false);
  for (int length = 0; length <= m_max; ++length) {
    extend(ids, static_cast<std::size_t>(length), prefix, used, out);
  }
  return out;
}

GameSpec::GameSpec(std::vector<int> players, std::vector<int> sensors,
                   std::vector<std::vector<Action>> action_spaces,
                   std::vector<std::vector<double>> costs, std::optional<double> penalty,
                   std::vector<PruneWarning> warnings)
    : players_(std::move(players)),
      sensors_(std::move(sensors)),
      action_spaces_(std::move(action_spaces)),
      costs_(std::move(costs)),
      warnings_(std::move(warnings)) {
  if (players_.empty()) throw InvalidArgument("a game needs at least one player");
  if (sensors_.size() > 64) throw InvalidArgument("at most 64 sensors are supported");
  if (action_spaces_.size() != players_.size() || costs_.size() != players_.size()) {
    throw InvalidArgument("one action space and cost vector per player required");
  }
  std::map<int, std::size_t> bit;
  for (std::size_t k = 0; k < sensors_.size(); ++k) {
    if (!bit.emplace(sensors_[k], k).second) throw InvalidArgument("duplicate sensor id");
    full_mask_ |= std::uint64_t{1} << k;
  }

  coverage_.resize(players_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < players_.size(); ++i) {
    const auto& space = action_spaces_[i];
    if (space.empty()) throw InvalidArgument("every player needs at least one action");
    if (costs_[i].size() != space.size()) {
      throw InvalidArgument("cost vector does not match the action space");
    }
    for (std::size_t a = 0; a < space.size(); ++a) {
      std::uint64_t mask = 0;
      for (int id : space[a].nodes) {
        const auto it = bit.find(id);
        if (it == bit.end()) throw InvalidArgument("action visits an unknown sensor");
        const std::uint64_t b = std::uint64_t{1} << it->second;
        if (mask & b) throw InvalidArgument("action visits a sensor twice");
        mask |= b;
      }
      coverage_[i].push_back(mask);
      if (!(costs_[i][a] > 0.0) || !std::isfinite(costs_[i][a])) {
        throw InvalidArgument("action costs must be positive and finite");
      }
    }
    max_cost_.push_back(*std::max_element(costs_[i].begin(), costs_[i].end()));
    min_cost_.push_back(*std::min_element(costs_[i].begin(), costs_[i].end()));
    sum += std::max(max_cost_[i] / min_cost_[i], max_cost_[i]);
  }

  if (penalty) {
    if (!(*penalty > sum)) {
      throw InvalidArgument("penalty C must exceed Σ max(P/min c, P)");
    }
    penalty_ = *penalty;
  } else {
    penalty_ = 1.0 + sum;
  }
}

void GameSpec::check(const JointAction& s) const {
  if (s.size() != players_.size()) throw InvalidArgument("joint action size mismatch");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= action_spaces_[i].size()) throw InvalidArgument("action index out of range");
  }
}

namespace {

std::uint64_t union_coverage(const GameSpec& spec, const JointAction& s) {
  std::uint64_t all = 0;
  for (std::size_t i = 0; i < s.size(); ++i) all |= spec.coverage(i, s[i]);
  return all;
}

std::uint64_t others_coverage(const GameSpec& spec, std::size_t player, const JointAction& s) {
  std::uint64_t all = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j != player) all |= spec.coverage(j, s[j]);
  }
  return all;
}

}  // namespace

bool is_acceptable(const GameSpec& spec, const JointAction& s) {
  spec.check(s);
  return union_coverage(spec, s) == spec.full_coverage();
}

bool is_conflict_free(const GameSpec& spec, const JointAction& s) {
  spec.check(s);
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint64_t mask = spec.coverage(i, s[i]);
    if (seen & mask) return false;
    seen |= mask;
  }
  return true;
}

double reward(const GameSpec& spec, std::size_t player, const JointAction& s) {
  spec.check(s);
  const double c = spec.cost(player, s[player]);
  if ((spec.coverage(player, s[player]) & others_coverage(spec, player, s)) == 0) {
    return spec.max_cost(player) / c;
  }
  return -c;
}

double utility(const GameSpec& spec, std::size_t player, const JointAction& s) {
  if (!is_acceptable(spec, s)) return -spec.penalty();
  return reward(spec, player, s);
}

double potential(const GameSpec& spec, const JointAction& s) {
  double phi = 0.0;
  for (std::size_t i = 0; i < spec.num_players(); ++i) phi += reward(spec, i, s);
  return phi;
}

double global_reward(const GameSpec& spec, const JointAction& s) {
  if (!is_acceptable(spec, s)) return -spec.penalty();
  return potential(spec, s);
}

double team_cost(const GameSpec& spec, const JointAction& s) {
  spec.check(s);
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) total += spec.cost(i, s[i]);
  return total;
}

double relative_change(double x, double y) {
  const double scale = std::max(x, y);
  if (!(scale > 0.0)) throw InvalidArgument("relative change needs max(x, y) > 0");
  return std::abs(x - y) / scale;
}

namespace {

// Snapped (x, y, heading) of a leg's start and goal.
using LegKey = std::array<double, 6>;

LegKey leg_key(const energy::LatticeSpec& lattice, const geometry::Region& region,
               const geometry::WaypointLeg& leg) {
  const auto a = energy::snap_pose(lattice, region, leg.start);
  const auto b = energy::snap_pose(lattice, region, leg.goal);
  return {a.x, a.y, a.theta, b.x, b.y, b.theta};
}

struct LegResult {
  std::optional<energy::PlannedSegment> plan;
  std::string error;
};

}  // namespace

CostTable build_cost_table(std::span<const Robot> robots,
                           std::span<const geometry::Sensor> sensors, int m_max,
                           const energy::EnergyModel& model,
                           const energy::LatticeSpec& lattice, const geometry::Region& region,
                           double idle_energy, std::optional<double> penalty,
                           unsigned threads) {
  model.validate();
  lattice.validate(model);
  if (!(idle_energy > 0.0)) throw InvalidArgument("idle energy must be positive");
  if (robots.empty()) throw InvalidArgument("at least one robot is required");
  for (const auto& r : robots) {
    if (!region.contains(r.pose.position())) {
      throw InvalidArgument("robot " + std::to_string(r.id) + " starts outside the region");
    }
  }

  std::vector<int> ids;
  std::map<int, geometry::Point> where;
  for (const auto& s : sensors) {
    if (!region.contains(s.position)) {
      throw InvalidArgument("sensor " + std::to_string(s.id) + " lies outside the region");
    }
    ids.push_back(s.id);
    where[s.id] = s.position;
  }
  const auto actions = enumerate_actions(ids, m_max);

  // Collect the distinct legs of every tour.
  std::map<LegKey, std::size_t> leg_index;
  std::vector<geometry::WaypointLeg> unique_legs;
  std::vector<std::vector<std::vector<std::size_t>>> tour_legs(robots.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    tour_legs[i].resize(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
      std::vector<geometry::Point> nodes;
      for (int id : actions[a].nodes) nodes.push_back(where.at(id));
      for (const auto& leg : geometry::build_route_waypoints(robots[i].pose, nodes, region)) {
        const auto [it, inserted] = leg_index.try_emplace(leg_key(lattice, region, leg),
                                                          unique_legs.size());
        if (inserted) unique_legs.push_back(leg);
        tour_legs[i][a].push_back(it->second);
      }
    }
  }

  std::vector<LegResult> planned(unique_legs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < unique_legs.size(); k = next++) {
      try {
        planned[k].plan = energy::plan_segment(model, lattice, region, unique_legs[k].start,
                                               unique_legs[k].goal);
      } catch (const Unreachable& e) {
        planned[k].error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, unique_legs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<int> players;
  std::vector<std::vector<Action>> spaces(robots.size());
  std::vector<std::vector<double>> costs(robots.size());
  std::vector<std::vector<energy::PlannedTour>> tours(robots.size());
  std::vector<PruneWarning> warnings;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    players.push_back(robots[i].id);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      std::vector<energy::PlannedSegment> legs;
      std::string error;
      for (std::size_t k : tour_legs[i][a]) {
        if (!planned[k].plan) {
          error = planned[k].error;
          break;
        }
        legs.push_back(*planned[k].plan);
      }
      if (!error.empty()) {
        warnings.push_back({robots[i].id, actions[a].id, error});
        continue;
      }
      std::vector<geometry::Sensor> nodes;
      for (int id : actions[a].nodes) nodes.push_back({id, where.at(id)});
      auto tour = energy::assemble_tour(std::move(legs), nodes, idle_energy);
      spaces[i].push_back(actions[a]);
      costs[i].push_back(tour.total_energy);
      tours[i].push_back(std::move(tour));
    }
  }

  return CostTable{GameSpec(std::move(players), std::move(ids), std::move(spaces),
                            std::move(costs), penalty, std::move(warnings)),
                   std::move(tours)};
}

}  // namespace mulegame::game
