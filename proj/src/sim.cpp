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

#include "wsnqos/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace wsnqos {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

enum Stream : std::uint64_t {
  kPositions = 0,
  kCounts = 1,
  kDestinations = 2,
  kDemands = 3,
};

class UniformStream {
 public:
  UniformStream(std::uint64_t seed, Stream stream)
      : engine_(splitmix64(seed + static_cast<std::uint64_t>(stream) * kGolden)) {}

  // In [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

 private:
  std::mt19937_64 engine_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid scenario: " + what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int poisson_inverse(double mean, double u) {
  if (!(mean >= 0.0) || mean > 700.0) {
    throw std::invalid_argument("Poisson mean outside [0, 700]");
  }
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  // The tail guard stops the search once the pmf underflows.
  while (u >= cdf && p > 0.0) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

double draw_demand(double lambda_m, double u) {
  if (lambda_m < 1.0) return 1.0;
  return 1.0 + poisson_inverse(lambda_m - 1.0, u);
}

void validate_params(const ScenarioParams& p) {
  require(p.n >= 2, "n must be at least 2");
  require(positive(p.width) && positive(p.height), "region must be positive");
  require(positive(p.distance_unit), "distance_unit must be positive");
  require(positive(p.path_loss_exponent),
          "path_loss_exponent must be positive");
  require(positive(p.max_power), "max_power must be positive");
  require(positive(p.bandwidth), "bandwidth must be positive");
  require(positive(p.request_rate), "request_rate must be positive");
  require(positive(p.lambda_m), "lambda_m must be positive");
  require(p.lambda_m <= 701.0, "lambda_m must be at most 701");
  require(p.request_rate <= 700.0, "request_rate must be at most 700");
  require(p.hop_bound >= 1, "hop_bound must be at least 1");
  require(!p.threshold || std::isfinite(*p.threshold),
          "threshold must be finite");
  if (p.positions) {
    require(p.positions->cols() == p.n, "positions must list exactly n nodes");
    require(p.positions->allFinite(), "positions must be finite");
  }
  if (p.requests) {
    for (const ScriptedRequest& r : *p.requests) {
      require(r.source >= 0 && r.source < p.n && r.destination >= 0 &&
                  r.destination < p.n,
              "request endpoint outside [0, n)");
      require(r.source != r.destination,
              "request source equals destination");
      require(positive(r.demand), "request demand must be positive");
    }
  }
}

Scenario generate_scenario(const ScenarioParams& p) {
  validate_params(p);
  Eigen::Matrix2Xd positions(2, p.n);
  if (p.positions) {
    positions = *p.positions;
  } else {
    UniformStream draw(p.seed, kPositions);
    for (int i = 0; i < p.n; ++i) {
      bool fresh = false;
      while (!fresh) {
        positions(0, i) = draw.next() * p.width;
        positions(1, i) = draw.next() * p.height;
        fresh = true;
        for (int j = 0; j < i && fresh; ++j) {
          fresh = positions.col(j) != positions.col(i);
        }
      }
    }
  }
  NetworkModel net(positions / p.distance_unit, p.path_loss_exponent,
                   p.max_power, p.bandwidth);

  std::vector<Request> requests;
  if (p.requests) {
    for (const ScriptedRequest& r : *p.requests) {
      requests.push_back(Request{r.source, r.destination, r.demand, p.hop_bound});
    }
  } else {
    UniformStream counts(p.seed, kCounts);
    UniformStream destinations(p.seed, kDestinations);
    UniformStream demands(p.seed, kDemands);
    for (NodeId s = 0; s < p.n; ++s) {
      const int k = poisson_inverse(p.request_rate, counts.next());
      for (int c = 0; c < k; ++c) {
        auto offset = static_cast<int>(destinations.next() * (p.n - 1));
        offset = std::min(offset, p.n - 2);
        const NodeId d = offset < s ? offset : offset + 1;
        requests.push_back(
            Request{s, d, draw_demand(p.lambda_m, demands.next()), p.hop_bound});
      }
    }
  }
  return Scenario{std::move(net), std::move(requests)};
}

double variance_of(const EnergyLedger& ledger) {
  const double total = ledger.total();
  if (total <= 0.0) return 0.0;
  const Eigen::ArrayXd shares = ledger.consumed().array() / total;
  return (shares - shares.mean()).square().mean();
}

RunReport run_scenario(const Scenario& scenario,
                       std::optional<double> threshold,
                       const SolveLimits& limits) {
  RunReport report;
  EnergyLedger ledger(scenario.net.size());
  for (std::size_t k = 0; k < scenario.requests.size(); ++k) {
    const Request& q = scenario.requests[k];
    RequestRow row;
    row.index = static_cast<int>(k) + 1;
    row.demand = q.demand;
    row.source = q.source;
    row.destination = q.destination;
    const TopologySolution s =
        solve_single_request(scenario.net, q, ledger, threshold, limits);
    row.status = s.status;
    if (s.status == RouteStatus::kRouted) {
      row.path = s.routes[0];
      row.e_max = s.e_max;
      row.energy = s.node_tx_energy.sum();
      ledger.charge(s.node_tx_energy);
    } else {
      ++report.lost_count;
      if (s.status == RouteStatus::kLostResourceLimit) {
        report.diagnostics.push_back("request " + std::to_string(row.index) +
                                     ": solver limit reached, counted as lost");
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.variance = variance_of(ledger);
  report.total_energy = ledger.total();
  report.final_ledger = std::move(ledger);
  return report;
}

RunReport run(const ScenarioParams& params, const SolveLimits& limits) {
  return run_scenario(generate_scenario(params), params.threshold, limits);
}

std::string to_string(SweepAxis axis) {
  return axis == SweepAxis::kThreshold ? "threshold" : "lambda";
}

SweepResult sweep(const ScenarioParams& params, SweepAxis axis,
                  const std::vector<std::optional<double>>& values,
                  int replications, const SolveLimits& limits) {
  if (values.empty()) throw std::invalid_argument("sweep needs a value");
  if (replications < 1) {
    throw std::invalid_argument("replications must be at least 1");
  }
  SweepResult result;
  result.axis = axis;
  result.values = values;
  result.replications = replications;
  for (const std::optional<double>& value : values) {
    ScenarioParams point = params;
    if (axis == SweepAxis::kThreshold) {
      point.threshold = value;
    } else {
      if (!value) throw std::invalid_argument("lambda values must be numbers");
      point.lambda_m = *value;
    }
    validate_params(point);
    SweepPoint sum;
    for (int r = 0; r < replications; ++r) {
      point.seed = params.seed + static_cast<std::uint64_t>(r);
      const RunReport report = run(point, limits);
      sum.variance_mean += report.variance;
      sum.lost_mean += report.lost_count;
      sum.total_energy_mean += report.total_energy;
    }
    sum.variance_mean /= replications;
    sum.lost_mean /= replications;
    sum.total_energy_mean /= replications;
    result.points.push_back(sum);
  }
  return result;
}

SweepResult sweep_threshold(const ScenarioParams& params,
                            const std::vector<std::optional<double>>& values,
                            int replications, const SolveLimits& limits) {
  return sweep(params, SweepAxis::kThreshold, values, replications, limits);
}

SweepResult sweep_lambda(const ScenarioParams& params,
                         const std::vector<double>& values, int replications,
                         const SolveLimits& limits) {
  return sweep(params, SweepAxis::kLambda,
               std::vector<std::optional<double>>(values.begin(), values.end()),
               replications, limits);
}

}  // namespace wsnqos
