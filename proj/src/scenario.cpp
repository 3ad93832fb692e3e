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

#include "mulegame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mulegame/error.hpp"

namespace mulegame::scenario {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const {
    std::ostringstream out;
    out << source_;
    if (!mark.is_null()) out << ':' << mark.line + 1 << ':' << mark.column + 1;
    out << ": " << message;
    throw ScenarioError(out.str());
  }

  // Rejects unknown keys and lists every missing required key at once.
  void check_keys(const YAML::Node& map, const std::string& context,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) const {
    if (!map.IsMap()) fail(map.Mark(), context + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(required.begin(), required.end(), key) == required.end() &&
          std::find(optional.begin(), optional.end(), key) == optional.end()) {
        fail(kv.first.Mark(), "unknown key '" + key + "' in " + context);
      }
    }
    std::string missing;
    for (const auto& key : required) {
      if (!map[key]) missing += (missing.empty() ? "" : ", ") + key;
    }
    if (!missing.empty()) fail(map.Mark(), context + " is missing keys: " + missing);
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node.Mark(), what + " must be a number");
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), what + " must be a number, got '" + node.Scalar() + "'");
    }
    if (std::isnan(v)) fail(node.Mark(), what + " must not be NaN");
    return v;
  }

  double finite(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (!std::isfinite(v)) fail(node.Mark(), what + " must be finite");
    return v;
  }

  long long integer(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node.Mark(), what + " must be an integer");
    try {
      return node.as<long long>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), what + " must be an integer, got '" + node.Scalar() + "'");
    }
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node.Mark(), what + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(finite(item, what + " entry"));
    return out;
  }

 private:
  std::string source_;
};

Scenario build(const YAML::Node& root, const Reader& r) {
  Scenario sc;
  r.check_keys(root, "scenario", {"region", "sensors", "robots", "energy", "m_max"},
               {"epsilon_idle", "comm_range", "lattice", "learner"});

  const auto region = root["region"];
  r.check_keys(region, "region", {"xmin", "xmax", "ymin", "ymax"}, {});
  const double xmin = r.finite(region["xmin"], "region.xmin");
  const double xmax = r.finite(region["xmax"], "region.xmax");
  const double ymin = r.finite(region["ymin"], "region.ymin");
  const double ymax = r.finite(region["ymax"], "region.ymax");
  if (!(xmin < xmax && ymin < ymax)) r.fail(region.Mark(), "region must have positive area");
  sc.region = geometry::Region(xmin, xmax, ymin, ymax);

  const auto sensors = root["sensors"];
  if (!sensors.IsSequence()) r.fail(sensors.Mark(), "sensors must be a list");
  std::set<int> sensor_ids;
  for (const auto& node : sensors) {
    r.check_keys(node, "sensor entry", {"id", "x", "y"}, {});
    const int id = static_cast<int>(r.integer(node["id"], "sensor id"));
    const geometry::Point p{r.finite(node["x"], "sensor x"), r.finite(node["y"], "sensor y")};
    if (!sensor_ids.insert(id).second) r.fail(node.Mark(), "duplicate sensor id " + std::to_string(id));
    if (!sc.region.contains(p)) {
      r.fail(node.Mark(), "sensor " + std::to_string(id) + " lies outside the region");
    }
    sc.sensors.push_back({id, p});
  }
  if (sc.sensors.size() > 64) r.fail(sensors.Mark(), "at most 64 sensors are supported");

  const auto robots = root["robots"];
  if (!robots.IsSequence() || robots.size() == 0) {
    r.fail(robots.Mark(), "robots must be a non-empty list");
  }
  std::set<int> robot_ids;
  for (const auto& node : robots) {
    r.check_keys(node, "robot entry", {"id", "x", "y"}, {"theta"});
    const int id = static_cast<int>(r.integer(node["id"], "robot id"));
    const double x = r.finite(node["x"], "robot x");
    const double y = r.finite(node["y"], "robot y");
    const double theta = node["theta"] ? r.finite(node["theta"], "robot theta") : 0.0;
    if (!robot_ids.insert(id).second) r.fail(node.Mark(), "duplicate robot id " + std::to_string(id));
    if (!sc.region.contains({x, y})) {
      r.fail(node.Mark(), "robot " + std::to_string(id) + " starts outside the region");
    }
    sc.robots.push_back({id, geometry::Pose(x, y, theta)});
  }

  const auto e = root["energy"];
  r.check_keys(e, "energy", {"c1", "c2", "c3", "c4", "v_max"}, {});
  sc.energy = {r.finite(e["c1"], "energy.c1"), r.finite(e["c2"], "energy.c2"),
               r.finite(e["c3"], "energy.c3"), r.finite(e["c4"], "energy.c4"),
               r.finite(e["v_max"], "energy.v_max")};
  try {
    sc.energy.validate();
  } catch (const InvalidArgument& ex) {
    r.fail(e.Mark(), ex.what());
  }

  const auto m_max = root["m_max"];
  const auto m = r.integer(m_max, "m_max");
  if (m < 0) r.fail(m_max.Mark(), "m_max must be non-negative");
  if (m > static_cast<long long>(sc.sensors.size())) {
    r.fail(m_max.Mark(), "m_max " + std::to_string(m) + " exceeds the sensor count " +
                             std::to_string(sc.sensors.size()));
  }
  sc.m_max = static_cast<int>(m);

  if (const auto n = root["epsilon_idle"]) {
    sc.epsilon_idle = r.finite(n, "epsilon_idle");
    if (!(sc.epsilon_idle > 0.0)) r.fail(n.Mark(), "epsilon_idle must be positive");
  }
  if (const auto n = root["comm_range"]) {
    sc.comm_range = r.number(n, "comm_range");
    if (!(sc.comm_range >= 0.0)) r.fail(n.Mark(), "comm_range must be non-negative");
  }

  if (const auto l = root["lattice"]) {
    r.check_keys(l, "lattice", {},
                 {"max_cells", "grid_step", "heading_count", "velocity_levels", "arc_radii"});
    if (l["max_cells"]) {
      const auto cells = r.integer(l["max_cells"], "lattice.max_cells");
      if (cells <= 0) r.fail(l["max_cells"].Mark(), "lattice.max_cells must be positive");
      sc.lattice.max_cells = static_cast<int>(cells);
    }
    if (l["grid_step"]) sc.lattice.grid_step = r.finite(l["grid_step"], "lattice.grid_step");
    if (l["heading_count"]) {
      sc.lattice.heading_count = static_cast<int>(r.integer(l["heading_count"], "lattice.heading_count"));
    }
    if (l["velocity_levels"]) {
      sc.lattice.velocity_levels = r.numbers(l["velocity_levels"], "lattice.velocity_levels");
    }
    if (l["arc_radii"]) sc.lattice.arc_radii = r.numbers(l["arc_radii"], "lattice.arc_radii");
    try {
      sc.lattice_spec().validate(sc.energy);
    } catch (const InvalidArgument& ex) {
      r.fail(l.Mark(), std::string("lattice: ") + ex.what());
    }
  }

  if (const auto l = root["learner"]) {
    r.check_keys(l, "learner", {},
                 {"algorithm", "gamma", "max_iterations", "convergence_window", "seed"});
    if (l["algorithm"]) {
      try {
        sc.learner.algorithm = learning::parse_algorithm(l["algorithm"].as<std::string>());
      } catch (const InvalidArgument& ex) {
        r.fail(l["algorithm"].Mark(), ex.what());
      }
    }
    if (l["gamma"]) sc.learner.gamma = r.finite(l["gamma"], "learner.gamma");
    if (l["max_iterations"]) {
      sc.learner.max_iterations = static_cast<int>(r.integer(l["max_iterations"], "learner.max_iterations"));
    }
    if (l["convergence_window"]) {
      sc.learner.convergence_window =
          static_cast<int>(r.integer(l["convergence_window"], "learner.convergence_window"));
    }
    if (l["seed"]) sc.learner.rng_seed = static_cast<std::uint64_t>(r.integer(l["seed"], "learner.seed"));
    try {
      sc.learner.validate();
    } catch (const InvalidArgument& ex) {
      r.fail(l.Mark(), std::string("learner: ") + ex.what());
    }
  }
  return sc;
}

}  // namespace

energy::LatticeSpec Scenario::lattice_spec() const {
  auto spec = energy::default_lattice(energy, region, lattice.max_cells);
  spec.heading_count = lattice.heading_count;
  if (lattice.grid_step) {
    spec.grid_step = *lattice.grid_step;
    if (!lattice.arc_radii) spec.arc_radii = {2.0 * spec.grid_step};
  }
  if (lattice.velocity_levels) spec.velocity_levels = *lattice.velocity_levels;
  if (lattice.arc_radii) spec.arc_radii = *lattice.arc_radii;
  return spec;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const Reader reader(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    reader.fail(ex.mark, ex.msg);
  }
  try {
    return build(root, reader);
  } catch (const YAML::Exception& ex) {
    reader.fail(ex.mark, ex.msg);
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

}  // namespace mulegame::scenario
