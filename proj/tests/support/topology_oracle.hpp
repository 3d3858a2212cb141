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

// Brute-force reference for single-request topology control on tiny
// networks: every per-node power assignment over the candidate levels times
// every simple path within the hop bound. Plus a seeded instance generator.

#ifndef WSNQOS_TESTS_TOPOLOGY_ORACLE_HPP
#define WSNQOS_TESTS_TOPOLOGY_ORACLE_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wsnqos/net_model.hpp"
#include "wsnqos/qos.hpp"

namespace wsnqos::oracle {

struct TopologyAnswer {
  double e_max = 0.0;
  Path path;
};

inline void extend_paths(int n, NodeId at, NodeId goal, int hops_left,
                         Path& current, std::vector<Path>& out) {
  if (at == goal) {
    out.push_back(current);
    return;
  }
  if (hops_left == 0) return;
  for (NodeId next = 0; next < n; ++next) {
    if (std::find(current.begin(), current.end(), next) != current.end()) {
      continue;
    }
    current.push_back(next);
    extend_paths(n, next, goal, hops_left - 1, current, out);
    current.pop_back();
  }
}

inline std::vector<Path> simple_paths(int n, NodeId s, NodeId d, int max_hops) {
  std::vector<Path> out;
  Path current{s};
  extend_paths(n, s, d, max_hops, current, out);
  return out;
}

// Bandwidth and threshold checks depend on the path only.
inline bool path_admissible(const NetworkModel& net, const Request& q,
                            const Path& path, const EnergyLedger& ledger,
                            std::optional<double> threshold) {
  const int n = net.size();
  std::vector<double> traffic(n, 0.0);
  std::vector<double> after(ledger.consumed().data(),
                            ledger.consumed().data() + n);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    traffic[path[k]] += q.demand;
    traffic[path[k + 1]] += q.demand;
    const double dx = net.positions()(0, path[k]) - net.positions()(0, path[k + 1]);
    const double dy = net.positions()(1, path[k]) - net.positions()(1, path[k + 1]);
    after[path[k]] +=
        q.demand * std::pow(std::hypot(dx, dy), net.path_loss_exponent());
  }
  for (int i = 0; i < n; ++i) {
    if (traffic[i] > net.bandwidth() + 1e-9) return false;
  }
  if (threshold) {
    double mean = 0.0;
    for (double e : after) mean += e;
    mean /= n;
    for (double e : after) {
      if (e - mean > *threshold + 1e-9 * std::max(1.0, std::abs(e))) {
        return false;
      }
    }
  }
  return true;
}

// Optimal E_max and one optimal path, nullopt when no power assignment and
// path satisfy every constraint.
inline std::optional<TopologyAnswer> brute_force_topology(
    const NetworkModel& net, const Request& q, const EnergyLedger& ledger,
    std::optional<double> threshold) {
  const int n = net.size();
  std::vector<Path> paths;
  for (const Path& p : simple_paths(n, q.source, q.destination, q.hop_bound)) {
    if (path_admissible(net, q, p, ledger, threshold)) paths.push_back(p);
  }
  if (paths.empty()) return std::nullopt;

  const PowerLevelSet levels = power_levels(net);
  std::vector<std::size_t> pick(n, 0);
  std::optional<TopologyAnswer> best;
  while (true) {
    Eigen::VectorXd power(n);
    double e_max = 0.0;
    for (int i = 0; i < n; ++i) {
      power[i] = levels[i][pick[i]];
      e_max = std::max(e_max, power[i]);
    }
    if (!best || e_max < best->e_max) {
      const LinkMatrix links = induced_links(net, power);
      bool symmetric = true;
      for (int i = 0; i < n && symmetric; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j && links(i, j) != links(j, i)) {
            symmetric = false;
            break;
          }
        }
      }
      if (symmetric) {
        for (const Path& p : paths) {
          bool usable = true;
          for (std::size_t k = 0; k + 1 < p.size(); ++k) {
            usable = usable && links(p[k], p[k + 1]);
          }
          if (usable) {
            best = TopologyAnswer{e_max, p};
            break;
          }
        }
      }
    }
    int i = 0;
    while (i < n && ++pick[i] == levels[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return best;
}

// Smallest E_max of any symmetric, distance-closed link set containing the
// path: grow node powers until reaching j forces j to reach back.
inline double path_e_max(const NetworkModel& net, const Path& path) {
  const int n = net.size();
  std::vector<double> power(n, 0.0);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double e = link_energy(net, path[k], path[k + 1]);
    power[path[k]] = std::max(power[path[k]], e);
    power[path[k + 1]] = std::max(power[path[k + 1]], e);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double e = link_energy(net, i, j);
        if (e <= power[i] && power[j] < e) {
          power[j] = e;
          changed = true;
        }
      }
    }
  }
  return *std::max_element(power.begin(), power.end());
}

struct TopologyCase {
  NetworkModel net;
  Request request;
  EnergyLedger ledger;
  std::optional<double> threshold;
};

// Up to six nodes on a 10 x 10 grid of integer coordinates, a = 2. The cap,
// bandwidth, ledger and threshold are drawn so that a fair share of cases is
// infeasible for each reason.
inline TopologyCase random_topology_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int n = uniform_int(3, 6);
  Eigen::Matrix2Xd positions(2, n);
  for (int i = 0; i < n; ++i) {
    bool fresh = false;
    while (!fresh) {
      positions.col(i) << uniform_int(0, 10), uniform_int(0, 10);
      fresh = true;
      for (int j = 0; j < i; ++j) {
        fresh = fresh && positions.col(j) != positions.col(i);
      }
    }
  }
  const double cap = uniform_int(20, 200);
  const double demand = uniform_int(1, 4);
  const double bandwidth = uniform_int(0, 3) == 0 ? demand : 4 * demand;
  NetworkModel net(positions, 2.0, cap, bandwidth);
  Request q;
  q.source = uniform_int(0, n - 1);
  q.destination = (q.source + uniform_int(1, n - 1)) % n;
  q.demand = demand;
  q.hop_bound = uniform_int(1, 3);
  Eigen::VectorXd consumed(n);
  for (int i = 0; i < n; ++i) consumed[i] = uniform_int(0, 3) * 50.0;
  std::optional<double> threshold;
  if (uniform_int(0, 2) != 0) threshold = uniform_int(0, 8) * 50.0;
  return TopologyCase{std::move(net), q, EnergyLedger(consumed), threshold};
}

}  // namespace wsnqos::oracle

#endif  // WSNQOS_TESTS_TOPOLOGY_ORACLE_HPP
