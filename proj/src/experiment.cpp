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

#include "mulegame/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "mulegame/error.hpp"

namespace mulegame::experiment {

namespace {

// Shortest text that reads back as the same double, so files are exact and
// byte-stable.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Slot {
  std::size_t group = 0;
  std::size_t player = 0;
};

std::map<int, Slot> robot_slots(const RunResult& result) {
  std::map<int, Slot> slots;
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    const auto& ids = result.groups[g].robot_ids;
    for (std::size_t p = 0; p < ids.size(); ++p) slots[ids[p]] = {g, p};
  }
  return slots;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  return out;
}

nlohmann::json action_ids(const game::GameSpec& spec, const game::JointAction& s) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(spec.actions(i)[s[i]].id);
  return out;
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

RunResult run(const scenario::Scenario& sc, const Options& options) {
  const auto lattice = sc.lattice_spec();
  RunResult result;
  result.partition = partition::partition_team(sc.robots, sc.sensors, sc.region, sc.comm_range);

  for (std::size_t g = 0; g < result.partition.groups.size(); ++g) {
    std::vector<game::Robot> robots;
    for (int id : result.partition.groups[g]) {
      robots.push_back(*std::find_if(sc.robots.begin(), sc.robots.end(),
                                     [id](const game::Robot& r) { return r.id == id; }));
    }
    const auto sensors = result.partition.sensors_of(g, sc.sensors);
    const int m_max = std::min(sc.m_max, static_cast<int>(sensors.size()));

    GroupResult group{result.partition.groups[g], {},
                      game::build_cost_table(robots, sensors, m_max, sc.energy, lattice, sc.region,
                                             sc.epsilon_idle, {}, options.threads),
                      {}, {}, {}, {}, {}};
    for (const auto& s : sensors) group.sensor_ids.push_back(s.id);
    group.trace = learning::run(group.table.game, sc.learner);

    if (options.oracle) {
      try {
        group.report = oracle::build_report(group.table.game, options.oracle_budget);
        group.optimum = group.report->optimum;
        if (!group.optimum) group.oracle_note = "no acceptable joint action";
        group.final_is_nash = oracle::is_nash(group.table.game, group.trace.final().joint);
      } catch (const BudgetExceeded& e) {
        group.report.reset();
        group.oracle_note = e.what();
      }
    }
    result.groups.push_back(std::move(group));
  }

  auto& s = result.summary;
  s.acceptable = true;
  bool all_converged = true;
  bool all_optimal = true;
  std::size_t converged = 0;
  double optimum = 0.0;
  for (const auto& g : result.groups) {
    s.final_team_cost += g.trace.final().team_cost;
    s.acceptable = s.acceptable && g.trace.final().acceptable;
    if (g.trace.converged_at) {
      converged = std::max(converged, *g.trace.converged_at);
    } else {
      all_converged = false;
    }
    if (g.optimum) {
      optimum += g.optimum->team_cost;
    } else {
      all_optimal = false;
    }
  }
  if (all_converged) s.converged_at = converged;
  if (all_optimal) {
    s.optimum_cost = optimum;
    s.delta = game::relative_change(optimum, s.final_team_cost);
  }
  return result;
}

void write_trace(const scenario::Scenario& sc, const RunResult& result, std::ostream& out) {
  const auto slots = robot_slots(result);
  out << "iteration";
  for (const auto& r : sc.robots) out << ",action_id_" << r.id;
  out << ",team_cost_joules,acceptable,converged\n";

  const std::size_t rows = result.groups.front().trace.records.size();
  for (std::size_t t = 0; t < rows; ++t) {
    out << t;
    for (const auto& r : sc.robots) {
      const auto slot = slots.at(r.id);
      const auto& g = result.groups[slot.group];
      const auto a = g.trace.records[t].joint[slot.player];
      out << ',' << g.table.game.actions(slot.player)[a].id;
    }
    double cost = 0.0;
    bool acceptable = true;
    for (const auto& g : result.groups) {
      cost += g.trace.records[t].team_cost;
      acceptable = acceptable && g.trace.records[t].acceptable;
    }
    const bool converged = result.summary.converged_at && t >= *result.summary.converged_at;
    out << ',' << num(cost) << ',' << (acceptable ? 1 : 0) << ',' << (converged ? 1 : 0) << '\n';
  }
}

void write_cost_table(const RunResult& result, std::ostream& out) {
  out << "player_id,action_id,node_sequence,cost_joules\n";
  for (const auto& g : result.groups) {
    const auto& spec = g.table.game;
    for (std::size_t i = 0; i < spec.num_players(); ++i) {
      for (std::size_t a = 0; a < spec.num_actions(i); ++a) {
        const auto& action = spec.actions(i)[a];
        out << spec.players()[i] << ',' << action.id << ',';
        for (std::size_t k = 0; k < action.nodes.size(); ++k) {
          out << (k ? ";" : "") << action.nodes[k];
        }
        out << ',' << num(spec.cost(i, a)) << '\n';
      }
    }
  }
}

void write_summary(const scenario::Scenario& sc, const RunResult& result, std::ostream& out) {
  nlohmann::json j;
  j["algorithm"] = learning::to_string(sc.learner.algorithm);
  j["gamma"] = optional_json(sc.learner.gamma);
  j["seed"] = sc.learner.rng_seed;
  j["max_iterations"] = sc.learner.max_iterations;
  j["convergence_window"] = sc.learner.convergence_window;

  auto groups = nlohmann::json::array();
  for (const auto& g : result.groups) {
    const auto& spec = g.table.game;
    nlohmann::json e;
    e["robot_ids"] = g.robot_ids;
    e["sensor_ids"] = g.sensor_ids;
    e["actions_per_robot"] = [&] {
      auto a = nlohmann::json::array();
      for (std::size_t i = 0; i < spec.num_players(); ++i) a.push_back(spec.num_actions(i));
      return a;
    }();
    e["penalty_c"] = spec.penalty();
    e["final_action_ids"] = action_ids(spec, g.trace.final().joint);
    e["final_team_cost_joules"] = g.trace.final().team_cost;
    e["acceptable"] = g.trace.final().acceptable;
    e["converged_at"] = optional_json(g.trace.converged_at);
    e["final_is_nash"] = optional_json(g.final_is_nash);
    if (g.optimum) {
      e["optimum_action_ids"] = action_ids(spec, g.optimum->joint);
      e["optimum_cost_joules"] = g.optimum->team_cost;
      e["worst_acceptable_joules"] = g.optimum->worst_acceptable;
      e["delta"] = game::relative_change(g.optimum->team_cost, g.trace.final().team_cost);
    } else {
      e["optimum_cost_joules"] = nullptr;
      e["delta"] = nullptr;
    }
    if (!g.oracle_note.empty()) e["oracle_note"] = g.oracle_note;
    auto warnings = nlohmann::json::array();
    for (const auto& w : spec.warnings()) {
      warnings.push_back({{"player_id", w.player}, {"action_id", w.action_id}, {"message", w.message}});
    }
    e["prune_warnings"] = warnings;
    groups.push_back(e);
  }
  j["groups"] = groups;

  const auto& s = result.summary;
  j["team"] = {{"final_team_cost_joules", s.final_team_cost},
               {"acceptable", s.acceptable},
               {"converged_at", optional_json(s.converged_at)},
               {"optimum_cost_joules", optional_json(s.optimum_cost)},
               {"delta", optional_json(s.delta)}};
  out << j.dump(2) << '\n';
}

void emit_trajectories(const energy::EnergyModel& model, std::span<const RobotTour> tours,
                       double sample_step, std::ostream& out) {
  if (!(sample_step > 0.0)) throw InvalidArgument("sample_step must be positive");
  out << "robot_id,leg,s_meters,x,y,theta,v,t_seconds,e_joules\n";
  auto row = [&](int robot, std::size_t leg, double s, const geometry::Pose& p, double v,
                 double t, double e) {
    out << robot << ',' << leg << ',' << num(s) << ',' << num(p.x) << ',' << num(p.y) << ','
        << num(p.theta) << ',' << num(v) << ',' << num(t) << ',' << num(e) << '\n';
  };

  for (const auto& rt : tours) {
    const auto& tour = *rt.tour;
    if (tour.legs.empty()) {
      row(rt.robot_id, 0, 0.0, rt.start, 0.0, 0.0, tour.total_energy);
      continue;
    }
    double t0 = 0.0;
    double e0 = 0.0;
    for (std::size_t k = 0; k < tour.legs.size(); ++k) {
      const auto& leg = tour.legs[k];
      if (leg.segments.empty()) {
        row(rt.robot_id, k, 0.0, leg.start, 0.0, t0, e0);
        continue;
      }
      double total = 0.0;
      for (const auto& seg : leg.segments) total += seg.length;

      std::size_t i = 0;      // current segment
      double offset = 0.0;    // arc length before segment i
      double t_before = 0.0;  // time and energy before segment i
      double e_before = 0.0;
      std::vector<double> samples;
      for (std::size_t j = 0; static_cast<double>(j) * sample_step < total - 1e-9; ++j) {
        samples.push_back(static_cast<double>(j) * sample_step);
      }
      samples.push_back(total);
      for (const double s : samples) {
        while (i + 1 < leg.segments.size() && s > offset + leg.segments[i].length) {
          t_before += leg.profiles[i].duration;
          e_before += leg.profiles[i].energy;
          offset += leg.segments[i].length;
          ++i;
        }
        const double local = std::clamp(s - offset, 0.0, leg.segments[i].length);
        const auto pp = energy::profile_at(model, leg.profiles[i], local);
        row(rt.robot_id, k, s, leg.segments[i].pose_at(local), pp.v, t0 + t_before + pp.t,
            e0 + e_before + pp.energy);
      }
      for (const auto& p : leg.profiles) {
        t0 += p.duration;
        e0 += p.energy;
      }
    }
  }
}

void write_artifacts(const scenario::Scenario& sc, const Options& options, const RunResult& result,
                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  // Oracle reports from an earlier run in the same directory would be stale.
  for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("oracle_group") && entry.path().extension() == ".json") {
      std::filesystem::remove(entry.path());
    }
  }
  {
    auto out = open_output(out_dir / "trace.csv");
    write_trace(sc, result, out);
  }
  {
    auto out = open_output(out_dir / "cost_table.csv");
    write_cost_table(result, out);
  }
  {
    auto out = open_output(out_dir / "summary.json");
    write_summary(sc, result, out);
  }
  {
    // Each robot's tour under its final action.
    const auto slots = robot_slots(result);
    std::vector<RobotTour> tours;
    for (const auto& r : sc.robots) {
      const auto slot = slots.at(r.id);
      const auto& g = result.groups[slot.group];
      const auto a = g.trace.final().joint[slot.player];
      tours.push_back({r.id, r.pose, &g.table.tours[slot.player][a]});
    }
    auto out = open_output(out_dir / "trajectory.csv");
    emit_trajectories(sc.energy, tours, options.sample_step, out);
  }
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    if (!result.groups[g].report) continue;
    auto out = open_output(out_dir / ("oracle_group" + std::to_string(g) + ".json"));
    oracle::write_report(result.groups[g].table.game, *result.groups[g].report, out, 200);
  }
  {
    auto out = open_output(out_dir / "partition.csv");
    partition::write_label_grid(result.partition.grid, out);
  }
}

RunResult run_experiment(const scenario::Scenario& sc, const Options& options,
                         const std::filesystem::path& out_dir) {
  if (!(options.sample_step > 0.0)) throw InvalidArgument("sample_step must be positive");
  auto result = run(sc, options);
  write_artifacts(sc, options, result, out_dir);
  return result;
}

}  // namespace mulegame::experiment
