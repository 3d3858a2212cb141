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

// Scenario generation and the sequential request simulation: nodes scattered
// uniformly over a rectangle, Poisson request counts per node, each request
// admitted one at a time against the live energy ledger.
//
// Random draws come from four independent mt19937_64 streams (positions,
// request counts, destinations, demands), each seeded by
//     splitmix64(seed + k * 0x9e3779b97f4a7c15),  k = 0, 1, 2, 3.
// A uniform variate is (word >> 11) * 2^-53; Poisson variates use inversion by
// sequential search over one uniform.

#ifndef WSNQOS_SIM_HPP
#define WSNQOS_SIM_HPP

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsnqos/milp.hpp"
#include "wsnqos/net_model.hpp"
#include "wsnqos/qos.hpp"

namespace wsnqos {

// A request as scripted by hand; the hop bound comes from the parameters.
struct ScriptedRequest {
  NodeId source = 0;
  NodeId destination = 0;
  double demand = 1.0;

  friend bool operator==(const ScriptedRequest&,
                         const ScriptedRequest&) = default;
};

struct ScenarioParams {
  int n = 15;
  double width = 180.0;
  double height = 180.0;
  // Distances are divided by this before energies d^a are formed, so P,
  // thresholds and energies share one unit.
  double distance_unit = 1.0;
  double path_loss_exponent = 2.0;
  double max_power = 1.0;
  double bandwidth = 1.0;
  double request_rate = 1.0;
  double lambda_m = 10.0;
  int hop_bound = 3;
  std::optional<double> threshold;
  std::uint64_t seed = 1;

  // Optional overrides of the random draws. Coordinates are in the same
  // length unit as width and height.
  std::optional<Eigen::Matrix2Xd> positions;
  std::optional<std::vector<ScriptedRequest>> requests;
};

// Throws std::invalid_argument naming the first offending field.
void validate_params(const ScenarioParams& params);

struct Scenario {
  NetworkModel net;
  std::vector<Request> requests;
};

// Deterministic in params. Requests are ordered by source node, then by draw
// order.
Scenario generate_scenario(const ScenarioParams& params);

// Demand drawn for mean lambda_m from uniform u: 1 + Poisson(lambda_m - 1)
// for lambda_m >= 1, otherwise 1.
double draw_demand(double lambda_m, double u);

// Smallest k with CDF(k) > u for a Poisson(mean) variable.
int poisson_inverse(double mean, double u);

std::uint64_t splitmix64(std::uint64_t x);

struct RequestRow {
  int index = 0;  // 1-based
  double demand = 0.0;
  NodeId source = 0;
  NodeId destination = 0;
  RouteStatus status = RouteStatus::kLost;
  std::optional<Path> path;
  double e_max = 0.0;  // 0 for lost requests
  double energy = 0.0;  // charged to the ledger

  friend bool operator==(const RequestRow&, const RequestRow&) = default;
};

struct RunReport {
  std::vector<RequestRow> rows;
  int lost_count = 0;
  double variance = 0.0;
  double total_energy = 0.0;
  EnergyLedger final_ledger{2};
  std::vector<std::string> diagnostics;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

// Population variance of the shares E_i / sum_k E_k; 0 when nothing has been
// consumed.
double variance_of(const EnergyLedger& ledger);

// Sequential admission of `scenario.requests` against a ledger starting at
// zero. Requests that hit a solver limit are Lost with a diagnostic.
RunReport run_scenario(const Scenario& scenario,
                       std::optional<double> threshold,
                       const SolveLimits& limits = {});

RunReport run(const ScenarioParams& params, const SolveLimits& limits = {});

enum class SweepAxis { kThreshold, kLambda };

std::string to_string(SweepAxis axis);

struct SweepPoint {
  double variance_mean = 0.0;
  double lost_mean = 0.0;
  double total_energy_mean = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kThreshold;
  // An empty entry is the unconstrained threshold.
  std::vector<std::optional<double>> values;
  std::vector<SweepPoint> points;
  int replications = 1;
};

// Replication r uses seed params.seed + r. Every point reuses the same seeds.
SweepResult sweep_threshold(const ScenarioParams& params,
                            const std::vector<std::optional<double>>& values,
                            int replications, const SolveLimits& limits = {});

SweepResult sweep_lambda(const ScenarioParams& params,
                         const std::vector<double>& values, int replications,
                         const SolveLimits& limits = {});

// Dispatches on `axis`; lambda values must all be present.
SweepResult sweep(const ScenarioParams& params, SweepAxis axis,
                  const std::vector<std::optional<double>>& values,
                  int replications, const SolveLimits& limits = {});

}  // namespace wsnqos

#endif  // WSNQOS_SIM_HPP
