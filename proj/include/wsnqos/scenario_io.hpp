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

// Text formats: JSON scenario files, the human-readable routing table, the
// JSON run report and the sweep CSV.
//
// Scenario file keys (all required unless marked optional):
//   n                   integer >= 2
//   region              [width, height]
//   distance_unit       optional, default 1
//   path_loss_exponent  a
//   max_power           P
//   bandwidth           B
//   request_rate        mean Poisson request count per node
//   lambda_m            mean demand per request
//   hop_bound           integer >= 1
//   threshold           number or null (no threshold rows)
//   seed                unsigned 64-bit integer
//   positions           optional, n pairs [x, y]
//   requests            optional, objects {source, destination, demand}

#ifndef WSNQOS_SCENARIO_IO_HPP
#define WSNQOS_SCENARIO_IO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsnqos/sim.hpp"

namespace wsnqos {

// Malformed text: bad syntax, missing or unknown keys, wrong types.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ParseError on malformed text and std::invalid_argument when the
// values break a parameter invariant.
ScenarioParams parse_scenario(std::string_view text);
ScenarioParams load_scenario(const std::filesystem::path& path);

std::string scenario_to_json(const ScenarioParams& params);

// Shortest decimal text that reads back as the same double.
std::string format_number(double value);

RouteStatus route_status_from_string(std::string_view text);

// Header line, column titles and one row per request.
std::string format_table(const ScenarioParams& params, const RunReport& report);

std::string report_to_json(const ScenarioParams& params,
                           const RunReport& report);

// Reads the report part back and re-checks its internal consistency; throws
// ParseError on any mismatch.
RunReport report_from_json(std::string_view text);

inline constexpr std::string_view kSweepCsvHeader =
    "axis_value,variance_mean,lost_mean,total_energy_mean,replications";

std::string sweep_to_csv(const SweepResult& result);

// Comma-separated numbers; "none" stands for no threshold. Throws ParseError.
std::vector<std::optional<double>> parse_axis_values(std::string_view text);

}  // namespace wsnqos

#endif  // WSNQOS_SCENARIO_IO_HPP
