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

// mulegame: run one data-mule allocation experiment from a scenario file.
//
// On failure a single JSON object {"error": {"kind": ..., "message": ...}} is
// printed to stderr and the exit code is nonzero.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mulegame/error.hpp"
#include "mulegame/experiment.hpp"
#include "mulegame/scenario.hpp"

namespace {

int report_error(std::string_view kind, std::string_view message, int code) {
  const nlohmann::json j = {{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware multi-robot data-mule allocation by game-theoretic learning"};

  std::string scenario_path;
  std::optional<std::string> algorithm;
  std::optional<double> gamma;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  std::string oracle = "on";
  std::string out_dir = "out";
  double sample_step = 0.1;
  unsigned threads = 0;

  app.add_option("--scenario", scenario_path, "scenario YAML file")->required();
  app.add_option("--algorithm", algorithm, "learner")
      ->check(CLI::IsMember({"br", "fp", "gfp", "jsfp"}));
  app.add_option("--gamma", gamma, "geometric fictitious play discount, in (0, 1)");
  app.add_option("--iterations", iterations, "learning iterations")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--oracle", oracle, "run the brute-force oracle")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--out-dir", out_dir, "directory for the run artifacts");
  app.add_option("--sample-step", sample_step, "trajectory sample spacing in meters")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "cost-table workers (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    auto sc = mulegame::scenario::load_scenario(scenario_path);
    auto& learner = sc.learner;
    if (algorithm) {
      learner.algorithm = mulegame::learning::parse_algorithm(*algorithm);
      // A gamma from the file only applies when the file's learner is kept.
      if (learner.algorithm != mulegame::learning::Algorithm::kGeometricFP) learner.gamma.reset();
    }
    if (gamma) learner.gamma = *gamma;
    if (iterations) learner.max_iterations = *iterations;
    if (seed) learner.rng_seed = *seed;
    learner.validate();

    mulegame::experiment::Options options;
    options.oracle = oracle == "on";
    options.sample_step = sample_step;
    options.threads = threads;
    const auto result = mulegame::experiment::run_experiment(sc, options, out_dir);

    const auto& s = result.summary;
    std::cout << "final team cost " << s.final_team_cost << " J, "
              << (s.acceptable ? "acceptable" : "NOT acceptable");
    if (s.converged_at) std::cout << ", converged at iteration " << *s.converged_at;
    if (s.optimum_cost) std::cout << ", optimum " << *s.optimum_cost << " J, delta " << *s.delta;
    std::cout << "\nartifacts in " << out_dir << '\n';
    return 0;
  } catch (const mulegame::Error& e) {
    return report_error(e.kind(), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
}
