// Copyright 2026 The wsnqos Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wsnqos run|sweep|loadcheck --scenario FILE [...]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsnqos/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware topology control and QoS routing simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out = ".";
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "route one request sequence");
  run->add_option("--scenario", scenario, "scenario JSON file")->required();
  run->add_option("--out", out, "output directory");
  CLI::Option* run_seed = run->add_option("--seed", seed, "override the seed");

  wsnqos::SweepOptions sweep_options;
  CLI::App* sweep =
      app.add_subcommand("sweep", "average metrics over a parameter grid");
  sweep->add_option("--scenario", scenario, "scenario JSON file")->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--axis", sweep_options.axis, "threshold or lambda")
      ->required();
  sweep->add_option("--values", sweep_options.values,
                    "comma-separated values, 'none' for no threshold")
      ->required();
  sweep->add_option("--replications", sweep_options.replications,
                    "runs per value, seeds seed .. seed+R-1");
  CLI::Option* sweep_seed =
      sweep->add_option("--seed", seed, "override the seed");

  CLI::App* loadcheck =
      app.add_subcommand("loadcheck", "solve the bandwidth load LP");
  loadcheck->add_option("--scenario", scenario, "scenario JSON file")
      ->required();
  CLI::Option* load_seed =
      loadcheck->add_option("--seed", seed, "override the seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? wsnqos::kExitOk : wsnqos::kExitParseError;
  }

  auto seed_if = [&](const CLI::Option* opt) {
    return opt->count() > 0 ? std::optional<std::uint64_t>(seed)
                            : std::nullopt;
  };
  if (run->parsed()) {
    return wsnqos::cmd_run({scenario, out, seed_if(run_seed)}, std::cout,
                           std::cerr);
  }
  if (sweep->parsed()) {
    sweep_options.scenario = scenario;
    sweep_options.out = out;
    sweep_options.seed = seed_if(sweep_seed);
    return wsnqos::cmd_sweep(sweep_options, std::cout, std::cerr);
  }
  return wsnqos::cmd_loadcheck({scenario, seed_if(load_seed)}, std::cout,
                               std::cerr);
}
