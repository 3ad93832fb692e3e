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

#include "mulegame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "mulegame/error.hpp"

namespace mulegame::oracle {

namespace {

constexpr double kTolerance = 1e-9;

bool negligible(double delta, double scale) {
  return std::abs(delta) <= kTolerance * std::max(1.0, std::abs(scale));
}

int sign(double delta, double scale) {
  if (negligible(delta, scale)) return 0;
  return delta > 0.0 ? 1 : -1;
}

void require_budget(const GameSpec& spec, std::uint64_t budget) {
  const auto n = joint_action_count(spec);
  if (n > budget) {
    throw BudgetExceeded("joint action space of " + std::to_string(n) +
                         " exceeds the enumeration budget of " + std::to_string(budget));
  }
}

// Visits every joint action whose player-0 entry lies in [first, last), in
// lexicographic order with player 0 most significant.
template <typename F>
void for_each_joint(const GameSpec& spec, std::size_t first, std::size_t last, F&& f) {
  const std::size_t n = spec.num_players();
  JointAction s(n, 0);
  for (std::size_t a = first; a < last; ++a) {
    s.assign(n, 0);
    s[0] = a;
    bool more = true;
    while (more) {
      f(s);
      more = false;
      for (std::size_t k = n - 1; k >= 1; --k) {
        if (++s[k] < spec.num_actions(k)) {
          more = true;
          break;
        }
        s[k] = 0;
      }
    }
  }
}

struct Partial {
  std::optional<JointAction> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::optional<JointAction> worst;
  double worst_cost = -std::numeric_limits<double>::infinity();
  std::uint64_t acceptable = 0;
};

// Joint actions arrive in increasing lexicographic order within a chunk and
// chunks are merged in order, so strict comparisons keep the smallest one.
void absorb(Partial& into, const Partial& from) {
  into.acceptable += from.acceptable;
  if (from.best && from.best_cost < into.best_cost) {
    into.best = from.best;
    into.best_cost = from.best_cost;
  }
  if (from.worst && from.worst_cost > into.worst_cost) {
    into.worst = from.worst;
    into.worst_cost = from.worst_cost;
  }
}

nlohmann::json ids_of(const GameSpec& spec, const JointAction& s) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(spec.actions(i)[s[i]].id);
  return out;
}

}  // namespace

std::uint64_t joint_action_count(const GameSpec& spec) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < spec.num_players(); ++i) {
    const std::uint64_t m = spec.num_actions(i);
    if (total > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= m;
  }
  return total;
}

Optimum brute_force_optimum(const GameSpec& spec, std::uint64_t budget, unsigned threads) {
  require_budget(spec, budget);
  const std::size_t first = spec.num_actions(0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, first));

  std::vector<Partial> partial(threads);
  auto scan = [&](unsigned t) {
    const std::size_t lo = first * t / threads;
    const std::size_t hi = first * (t + 1) / threads;
    auto& p = partial[t];
    for_each_joint(spec, lo, hi, [&](const JointAction& s) {
      if (!game::is_acceptable(spec, s)) return;
      ++p.acceptable;
      const double c = game::team_cost(spec, s);
      if (c < p.best_cost) {
        p.best = s;
        p.best_cost = c;
      }
      if (c > p.worst_cost) {
        p.worst = s;
        p.worst_cost = c;
      }
    });
  };
  if (threads <= 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(scan, t);
  }

  Partial total;
  for (const auto& p : partial) absorb(total, p);
  if (!total.best) throw Infeasible("no joint action visits every sensor");
  return {*total.best, total.best_cost, *total.worst, total.worst_cost, total.acceptable};
}

NashCheck check_nash(const GameSpec& spec, const JointAction& s) {
  spec.check(s);
  NashCheck out;
  out.nash = true;
  out.strict = true;
  JointAction t = s;
  for (std::size_t i = 0; i < spec.num_players(); ++i) {
    const double here = game::utility(spec, i, s);
    for (std::size_t a = 0; a < spec.num_actions(i); ++a) {
      if (a == s[i]) continue;
      t[i] = a;
      const double gain = game::utility(spec, i, t) - here;
      if (gain > 0.0 && !negligible(gain, here)) {
        out.nash = false;
        if (!out.improving || gain > out.improving->gain) out.improving = Deviation{i, a, gain};
      }
      if (gain >= 0.0 || negligible(gain, here)) out.strict = false;
    }
    t[i] = s[i];
  }
  if (!out.nash) out.strict = false;
  return out;
}

bool is_nash(const GameSpec& spec, const JointAction& s) { return check_nash(spec, s).nash; }

std::vector<JointAction> nash_set(const GameSpec& spec, std::uint64_t budget) {
  require_budget(spec, budget);
  std::vector<JointAction> out;
  for_each_joint(spec, 0, spec.num_actions(0), [&](const JointAction& s) {
    if (is_nash(spec, s)) out.push_back(s);
  });
  return out;
}

bool PotentialAudit::exact_on_subspace() const { return max_subspace_error <= kTolerance; }

PotentialAudit audit_potential(const GameSpec& spec, std::uint64_t budget) {
  require_budget(spec, budget);
  PotentialAudit audit;
  for_each_joint(spec, 0, spec.num_actions(0), [&](const JointAction& s) {
    const bool s_inside = game::is_acceptable(spec, s) && game::is_conflict_free(spec, s);
    const double phi = game::potential(spec, s);
    JointAction t = s;
    for (std::size_t i = 0; i < spec.num_players(); ++i) {
      const double u = game::utility(spec, i, s);
      for (std::size_t a = 0; a < spec.num_actions(i); ++a) {
        if (a == s[i]) continue;
        t[i] = a;
        const double du = game::utility(spec, i, t) - u;
        const double dphi = game::potential(spec, t) - phi;
        ++audit.deviations;
        if (s_inside && game::is_acceptable(spec, t) && game::is_conflict_free(spec, t)) {
          ++audit.subspace_deviations;
          audit.max_subspace_error = std::max(audit.max_subspace_error, std::abs(du - dphi));
        }
        if (sign(du, u) != sign(dphi, phi)) audit.violations.push_back({s, i, a, du, dphi});
      }
      t[i] = s[i];
    }
  });
  return audit;
}

OracleReport build_report(const GameSpec& spec, std::uint64_t budget) {
  OracleReport report;
  try {
    report.optimum = brute_force_optimum(spec, budget);
  } catch (const Infeasible&) {
    report.optimum.reset();
  }
  report.nash = nash_set(spec, budget);
  report.audit = audit_potential(spec, budget);
  return report;
}

void write_report(const GameSpec& spec, const OracleReport& report, std::ostream& out,
                  std::size_t max_violations) {
  nlohmann::json j;
  j["players"] = spec.players();
  j["joint_actions"] = joint_action_count(spec);
  if (report.optimum) {
    const auto& o = *report.optimum;
    j["optimum"] = {{"action_ids", ids_of(spec, o.joint)},
                    {"team_cost_joules", o.team_cost},
                    {"worst_action_ids", ids_of(spec, o.worst_joint)},
                    {"worst_acceptable_joules", o.worst_acceptable},
                    {"acceptable_joint_actions", o.acceptable_count}};
  } else {
    j["optimum"] = nullptr;
    j["infeasible"] = true;
  }
  auto nash = nlohmann::json::array();
  for (const auto& s : report.nash) nash.push_back(ids_of(spec, s));
  j["nash_set"] = nash;

  const auto& a = report.audit;
  auto violations = nlohmann::json::array();
  for (const auto& v : a.violations) {
    if (violations.size() >= max_violations) break;
    violations.push_back({{"from_action_ids", ids_of(spec, v.from)},
                          {"player_id", spec.players()[v.player]},
                          {"to_action_id", spec.actions(v.player)[v.to].id},
                          {"delta_utility", v.delta_utility},
                          {"delta_potential", v.delta_potential}});
  }
  j["potential_audit"] = {{"deviations", a.deviations},
                          {"subspace_deviations", a.subspace_deviations},
                          {"max_subspace_error", a.max_subspace_error},
                          {"exact_on_subspace", a.exact_on_subspace()},
                          {"violation_count", a.violations.size()},
                          {"violations_listed", violations.size()},
                          {"violations", violations}};
  out << j.dump(2) << '\n';
}

}  // namespace mulegame::oracle
