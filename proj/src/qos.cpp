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

#include "wsnqos/qos.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace wsnqos {
namespace {

std::string pair_name(const char* prefix, NodeId i, NodeId j) {
  return std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string route_name(int r, NodeId i, NodeId j) {
  return "r" + std::to_string(r) + "_" + std::to_string(i) + "_" +
         std::to_string(j);
}

bool selected(const Solution& raw, VarId v) { return raw.value(v) > 0.5; }

// Tolerance for comparisons on energy-scale quantities.
double scaled_tol(double magnitude) {
  return kFeasibilityTol * std::max(1.0, std::abs(magnitude));
}

std::string path_string(const Path& path) {
  std::ostringstream out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) out << "->";
    out << path[k];
  }
  return out.str();
}

// Fewest-hop walk over the selected arcs; neighbours in index order.
std::optional<Path> shortest_walk(const LinkMatrix& arcs, NodeId from,
                                  NodeId to) {
  const int n = static_cast<int>(arcs.rows());
  std::vector<int> parent(n, -2);
  std::deque<NodeId> frontier{from};
  parent[from] = -1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    if (u == to) break;
    for (NodeId v = 0; v < n; ++v) {
      if (arcs(u, v) && parent[v] == -2) {
        parent[v] = u;
        frontier.push_back(v);
      }
    }
  }
  if (parent[to] == -2) return std::nullopt;
  Path path;
  for (NodeId v = to; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Splits a balanced arc set into directed cycles.
std::vector<Path> split_cycles(LinkMatrix arcs) {
  const int n = static_cast<int>(arcs.rows());
  std::vector<Path> cycles;
  while (arcs.any()) {
    NodeId start = 0;
    while (!arcs.row(start).any()) ++start;
    Path walk{start};
    std::vector<int> where(n, -1);
    where[start] = 0;
    while (true) {
      const NodeId u = walk.back();
      NodeId v = 0;
      while (v < n && !arcs(u, v)) ++v;
      if (v == n) return cycles;  // unbalanced leftovers; caller reports
      if (where[v] >= 0) {
        Path cycle(walk.begin() + where[v], walk.end());
        for (std::size_t k = 0; k < cycle.size(); ++k) {
          arcs(cycle[k], cycle[(k + 1) % cycle.size()]) = false;
        }
        cycles.push_back(std::move(cycle));
        break;
      }
      where[v] = static_cast<int>(walk.size());
      walk.push_back(v);
    }
  }
  return cycles;
}

}  // namespace

void validate_request(const NetworkModel& net, const Request& request) {
  const int n = net.size();
  if (request.source < 0 || request.source >= n || request.destination < 0 ||
      request.destination >= n) {
    throw std::invalid_argument("request endpoint outside the network");
  }
  if (request.source == request.destination) {
    throw std::invalid_argument("request source equals destination");
  }
  if (!(request.demand > 0.0) || !std::isfinite(request.demand)) {
    throw std::invalid_argument("request demand must be positive");
  }
  if (request.hop_bound < 1) {
    throw std::invalid_argument("request hop bound must be at least 1");
  }
}

EnergyLedger::EnergyLedger(Eigen::VectorXd consumed)
    : consumed_(std::move(consumed)) {
  if (consumed_.size() < 1) {
    throw std::invalid_argument("energy ledger needs at least one node");
  }
  if (!consumed_.allFinite() || (consumed_.array() < 0.0).any()) {
    throw std::invalid_argument("consumed energy must be finite and >= 0");
  }
}

void EnergyLedger::charge(const Eigen::VectorXd& increment) {
  if (increment.size() != consumed_.size()) {
    throw std::invalid_argument("energy increment has the wrong length");
  }
  if (!increment.allFinite() || (increment.array() < 0.0).any()) {
    throw std::invalid_argument("energy increment must be finite and >= 0");
  }
  consumed_ += increment;
}

// ---------------------------------------------------------------------------

LoadLp build_load_lp(const NetworkModel& net,
                     const std::vector<Request>& requests) {
  for (const Request& r : requests) validate_request(net, r);
  const int n = net.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  LoadLp lp;
  lp.l_max = lp.model.add_continuous(0.0, kInf, "L_max");
  lp.model.set_objective({{lp.l_max, 1.0}});

  std::vector<LinearExpr> load(n);
  Eigen::VectorXd endpoint_traffic = Eigen::VectorXd::Zero(n);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    PairVars f(n);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        // Nothing flows back into the source or out of the destination.
        const bool pinned = j == q.source || i == q.destination;
        f(i, j) = lp.model.add_continuous(0.0, pinned ? 0.0 : kInf,
                                          pair_name("f", i, j) + "_r" +
                                              std::to_string(r));
      }
    }
    for (NodeId i = 0; i < n; ++i) {
      LinearExpr balance;
      for (NodeId j = 0; j < n; ++j) {
        if (j == i) continue;
        balance.emplace_back(f(i, j), 1.0);
        balance.emplace_back(f(j, i), -1.0);
        load[i].emplace_back(f(i, j), 1.0);
        load[i].emplace_back(f(j, i), 1.0);
      }
      const double net_out = i == q.source        ? q.demand
                             : i == q.destination ? -q.demand
                                                  : 0.0;
      lp.model.add_constraint(std::move(balance), Sense::kEqual, net_out,
                              "flow_r" + std::to_string(r) + "_" +
                                  std::to_string(i));
    }
    endpoint_traffic[q.source] += q.demand;
    endpoint_traffic[q.destination] += q.demand;
    lp.flow.push_back(std::move(f));
  }
  for (NodeId i = 0; i < n; ++i) {
    LinearExpr row = std::move(load[i]);
    row.emplace_back(lp.l_max, -net.bandwidth());
    lp.model.add_constraint(std::move(row), Sense::kLessEqual,
                            -endpoint_traffic[i],
                            "load_" + std::to_string(i));
  }
  return lp;
}

LoadLpResult solve_load_lp(const NetworkModel& net,
                           const std::vector<Request>& requests,
                           const SolveLimits& limits) {
  const LoadLp lp = build_load_lp(net, requests);
  const Solution s = solve(lp.model, limits);
  if (s.status == SolveStatus::kResourceLimit) {
    throw SolverLimitError("load LP hit a solver limit");
  }
  if (s.status != SolveStatus::kOptimal) {
    throw ConsistencyError("load LP is " + to_string(s.status));
  }
  LoadLpResult result;
  result.l_max = s.value(lp.l_max);
  result.overloaded = result.l_max > 1.0 + kObjectiveTol;
  const int n = net.size();
  for (const PairVars& f : lp.flow) {
    Eigen::MatrixXd flows = Eigen::MatrixXd::Zero(n, n);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i != j) flows(i, j) = s.value(f(i, j));
      }
    }
    result.flows.push_back(std::move(flows));
  }
  return result;
}

// ---------------------------------------------------------------------------

TopologyMilp build_topology_milp(const NetworkModel& net,
                                 const std::vector<Request>& requests,
                                 const EnergyLedger& ledger,
                                 std::optional<double> threshold) {
  for (const Request& r : requests) validate_request(net, r);
  const int n = net.size();
  if (ledger.size() != n) {
    throw std::invalid_argument("ledger size differs from node count");
  }
  if (threshold && !std::isfinite(*threshold)) {
    throw std::invalid_argument("threshold must be finite");
  }
  const Eigen::MatrixXd& energy = net.energies();
  const Eigen::MatrixXd& dist = net.distances();

  TopologyMilp milp;
  MilpModel& m = milp.model;
  milp.e_max = m.add_continuous(0.0, net.max_power(), "E_max");
  m.set_objective({{milp.e_max, 1.0}});

  milp.link = PairVars(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j) milp.link(i, j) = m.add_binary(pair_name("x", i, j));
    }
  }

  // Both directions of every edge.
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      m.add_constraint({{milp.link(i, j), 1.0}, {milp.link(j, i), -1.0}},
                       Sense::kEqual, 0.0, pair_name("sym", i, j));
    }
  }

  // Broadcast ordering: x_{i,far} <= x_{i,near}. Chaining consecutive
  // neighbours by distance implies the row for every pair; equal distances get
  // both directions.
  for (NodeId i = 0; i < n; ++i) {
    std::vector<NodeId> order;
    for (NodeId j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return dist(i, a) < dist(i, b);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
      const NodeId near = order[k - 1];
      const NodeId far = order[k];
      m.add_constraint({{milp.link(i, far), 1.0}, {milp.link(i, near), -1.0}},
                       Sense::kLessEqual, 0.0,
                       "order_" + std::to_string(i) + "_" +
                           std::to_string(far) + "_" + std::to_string(near));
      if (dist(i, near) == dist(i, far)) {
        m.add_constraint(
            {{milp.link(i, near), 1.0}, {milp.link(i, far), -1.0}},
            Sense::kLessEqual, 0.0,
            "order_" + std::to_string(i) + "_" + std::to_string(near) + "_" +
                std::to_string(far));
      }
    }
  }

  // E_max >= d^a x_{i,j}; the cap E_max <= P is the variable's upper bound.
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      m.add_constraint({{milp.e_max, 1.0}, {milp.link(i, j), -energy(i, j)}},
                       Sense::kGreaterEqual, 0.0, pair_name("emax", i, j));
    }
  }

  std::vector<LinearExpr> bandwidth(n);
  std::vector<LinearExpr> spent(n);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    const int ri = static_cast<int>(r);
    PairVars route(n);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i != j) route(i, j) = m.add_binary(route_name(ri, i, j));
      }
    }
    LinearExpr hops;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        hops.emplace_back(route(i, j), 1.0);
        m.add_constraint({{route(i, j), 1.0}, {milp.link(i, j), -1.0}},
                         Sense::kLessEqual, 0.0,
                         "couple_" + route_name(ri, i, j));
        bandwidth[i].emplace_back(route(i, j), q.demand);
        bandwidth[j].emplace_back(route(i, j), q.demand);
        spent[i].emplace_back(route(i, j), q.demand * energy(i, j));
      }
    }
    m.add_constraint(std::move(hops), Sense::kLessEqual, q.hop_bound,
                     "hops_r" + std::to_string(r));
    for (NodeId i = 0; i < n; ++i) {
      LinearExpr balance;
      for (NodeId j = 0; j < n; ++j) {
        if (j == i) continue;
        balance.emplace_back(route(i, j), 1.0);
        balance.emplace_back(route(j, i), -1.0);
      }
      const double net_out = i == q.source        ? 1.0
                             : i == q.destination ? -1.0
                                                  : 0.0;
      m.add_constraint(std::move(balance), Sense::kEqual, net_out,
                       "route_r" + std::to_string(r) + "_" +
                           std::to_string(i));
    }
    milp.route.push_back(std::move(route));
  }

  for (NodeId i = 0; i < n; ++i) {
    if (bandwidth[i].empty()) continue;
    m.add_constraint(bandwidth[i], Sense::kLessEqual, net.bandwidth(),
                     "bw_" + std::to_string(i));
  }

  if (threshold) {
    // consumed_i + inc_i - mean_k(consumed_k + inc_k) <= threshold, with the
    // constant part moved to the right-hand side.
    LinearExpr mean_spent;
    for (const LinearExpr& row : spent) {
      for (const auto& [v, c] : row) mean_spent.emplace_back(v, -c / n);
    }
    for (NodeId i = 0; i < n; ++i) {
      LinearExpr row = spent[i];
      row.insert(row.end(), mean_spent.begin(), mean_spent.end());
      m.add_constraint(std::move(row), Sense::kLessEqual,
                       *threshold - ledger[i] + ledger.average(),
                       "threshold_" + std::to_string(i));
    }
  }
  return milp;
}

void add_cycle_cut(TopologyMilp& milp, int r, const Path& cycle) {
  LinearExpr terms;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    terms.emplace_back(milp.route.at(r)(cycle[k], cycle[(k + 1) % cycle.size()]),
                       1.0);
  }
  milp.model.add_constraint(std::move(terms), Sense::kLessEqual,
                            static_cast<double>(cycle.size()) - 1.0,
                            "cycle_r" + std::to_string(r) + "_" +
                                std::to_string(milp.model.num_constraints()));
}

void add_simple_path_rows(const NetworkModel& net,
                          const std::vector<Request>& requests,
                          TopologyMilp& milp) {
  const int n = net.size();
  const Eigen::MatrixXd& energy = net.energies();
  MilpModel& m = milp.model;
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    const PairVars& route = milp.route.at(r);
    const std::string tag = "_r" + std::to_string(r) + "_";
    for (NodeId i = 0; i < n; ++i) {
      LinearExpr out;
      LinearExpr in;
      LinearExpr out_energy{{milp.e_max, -1.0}};
      LinearExpr in_energy{{milp.e_max, -1.0}};
      for (NodeId j = 0; j < n; ++j) {
        if (j == i) continue;
        out.emplace_back(route(i, j), 1.0);
        in.emplace_back(route(j, i), 1.0);
        out_energy.emplace_back(route(i, j), energy(i, j));
        in_energy.emplace_back(route(j, i), energy(j, i));
      }
      const std::string node = tag + std::to_string(i);
      m.add_constraint(std::move(out), Sense::kLessEqual,
                       i == q.destination ? 0.0 : 1.0, "outdeg" + node);
      m.add_constraint(std::move(in), Sense::kLessEqual,
                       i == q.source ? 0.0 : 1.0, "indeg" + node);
      m.add_constraint(std::move(out_energy), Sense::kLessEqual, 0.0,
                       "outpow" + node);
      m.add_constraint(std::move(in_energy), Sense::kLessEqual, 0.0,
                       "inpow" + node);
    }
  }
}

std::string to_string(RouteStatus status) {
  switch (status) {
    case RouteStatus::kRouted:
      return "Routed";
    case RouteStatus::kLost:
      return "Lost";
    case RouteStatus::kLostResourceLimit:
      return "LostResourceLimit";
  }
  return "Unknown";
}

Eigen::VectorXd path_energy(const NetworkModel& net, const Path& path,
                            double demand) {
  Eigen::VectorXd spent = Eigen::VectorXd::Zero(net.size());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    spent[path[k]] += demand * link_energy(net, path[k], path[k + 1]);
  }
  return spent;
}

DecodedTopology decode_topology(const NetworkModel& net,
                                const std::vector<Request>& requests,
                                const TopologyMilp& milp, const Solution& raw) {
  if (raw.status != SolveStatus::kOptimal ||
      static_cast<int>(raw.values.size()) != milp.model.num_variables()) {
    throw ConsistencyError("decoding needs an Optimal solution of this model");
  }
  const int n = net.size();
  DecodedTopology decoded;
  TopologySolution& sol = decoded.solution;
  sol.status = RouteStatus::kRouted;
  sol.e_max = raw.value(milp.e_max);
  sol.links = LinkMatrix::Constant(n, n, false);
  sol.node_tx_energy = Eigen::VectorXd::Zero(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j) sol.links(i, j) = selected(raw, milp.link(i, j));
    }
  }
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    LinkMatrix arcs = LinkMatrix::Constant(n, n, false);
    int count = 0;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i != j && selected(raw, milp.route[r](i, j))) {
          arcs(i, j) = true;
          ++count;
        }
      }
    }
    decoded.raw_arc_count.push_back(count);
    std::optional<Path> path = shortest_walk(arcs, q.source, q.destination);
    if (!path) {
      throw ConsistencyError("request " + std::to_string(r) +
                             ": no walk from source to destination");
    }
    for (std::size_t k = 0; k + 1 < path->size(); ++k) {
      arcs((*path)[k], (*path)[k + 1]) = false;
    }
    decoded.stripped_cycles.push_back(split_cycles(arcs));
    sol.node_tx_energy += path_energy(net, *path, q.demand);
    sol.routes.push_back(std::move(path));
  }
  sol.stats = raw.stats;
  return decoded;
}

std::vector<Violation> validate_topology(const NetworkModel& net,
                                         const std::vector<Request>& requests,
                                         const EnergyLedger& ledger,
                                         std::optional<double> threshold,
                                         const DecodedTopology& decoded) {
  using Kind = Violation::Kind;
  std::vector<Violation> out;
  const TopologySolution& sol = decoded.solution;
  const int n = net.size();
  const LinkMatrix& links = sol.links;

  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      if (links(i, j) != links(j, i)) {
        out.push_back({Kind::kSymmetry, "link " + std::to_string(i) + "->" +
                                            std::to_string(j) +
                                            " has no reverse"});
      }
      if (!links(i, j)) continue;
      for (NodeId k = 0; k < n; ++k) {
        if (k != i && distance(net, i, k) <= distance(net, i, j) &&
            !links(i, k)) {
          out.push_back({Kind::kOrdering,
                         "node " + std::to_string(i) + " reaches " +
                             std::to_string(j) + " but not closer " +
                             std::to_string(k)});
        }
      }
      if (link_energy(net, i, j) > sol.e_max + scaled_tol(sol.e_max)) {
        out.push_back({Kind::kEnergyBound,
                       "link " + std::to_string(i) + "->" + std::to_string(j) +
                           " exceeds E_max"});
      }
    }
  }
  if (sol.e_max > net.max_power() + scaled_tol(net.max_power()) ||
      sol.e_max < -kFeasibilityTol) {
    out.push_back({Kind::kEnergyBound, "E_max outside [0, P]"});
  }

  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    const std::string tag = "request " + std::to_string(r) + ": ";
    if (r < decoded.raw_arc_count.size() &&
        decoded.raw_arc_count[r] > q.hop_bound) {
      out.push_back({Kind::kHopBound, tag + "solver used " +
                                          std::to_string(
                                              decoded.raw_arc_count[r]) +
                                          " arcs"});
    }
    if (r >= sol.routes.size() || !sol.routes[r]) continue;
    const Path& path = *sol.routes[r];
    if (path.size() < 2 || path.front() != q.source ||
        path.back() != q.destination) {
      out.push_back({Kind::kRoute, tag + "path " + path_string(path) +
                                       " does not join the endpoints"});
      continue;
    }
    if (std::set<NodeId>(path.begin(), path.end()).size() != path.size()) {
      out.push_back({Kind::kRoute, tag + "path " + path_string(path) +
                                       " revisits a node"});
    }
    if (static_cast<int>(path.size()) - 1 > q.hop_bound) {
      out.push_back({Kind::kHopBound, tag + "path " + path_string(path) +
                                          " is too long"});
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const NodeId u = path[k];
      const NodeId v = path[k + 1];
      if (u < 0 || u >= n || v < 0 || v >= n || u == v) {
        out.push_back({Kind::kRoute, tag + "bad hop in " + path_string(path)});
        continue;
      }
      if (!links(u, v)) {
        out.push_back({Kind::kCoupling, tag + "hop " + std::to_string(u) +
                                            "->" + std::to_string(v) +
                                            " is not a link"});
      }
      load[u] += q.demand;
      load[v] += q.demand;
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    if (load[i] > net.bandwidth() + scaled_tol(net.bandwidth())) {
      out.push_back({Kind::kBandwidth,
                     "node " + std::to_string(i) + " carries " +
                         std::to_string(load[i])});
    }
  }

  if (threshold) {
    const Eigen::VectorXd after = ledger.consumed() + sol.node_tx_energy;
    const double mean = after.mean();
    const double tol = scaled_tol(after.cwiseAbs().maxCoeff());
    for (NodeId i = 0; i < n; ++i) {
      if (after[i] > mean + *threshold + tol) {
        out.push_back({Kind::kThreshold,
                       "node " + std::to_string(i) + " would consume " +
                           std::to_string(after[i]) + " against mean " +
                           std::to_string(mean)});
      }
    }
  }
  return out;
}

TopologySolution decode_and_validate(const NetworkModel& net,
                                     const std::vector<Request>& requests,
                                     const EnergyLedger& ledger,
                                     std::optional<double> threshold,
                                     const TopologyMilp& milp,
                                     const Solution& raw) {
  DecodedTopology decoded = decode_topology(net, requests, milp, raw);
  const auto violations =
      validate_topology(net, requests, ledger, threshold, decoded);
  if (!violations.empty()) {
    throw ConsistencyError("decoded topology violates constraints: " +
                           violations.front().detail);
  }
  return std::move(decoded.solution);
}

std::optional<std::vector<Path>> admissible_paths(
    const NetworkModel& net, const Request& request, const EnergyLedger& ledger,
    std::optional<double> threshold, std::size_t max_visits) {
  validate_request(net, request);
  const int n = net.size();
  const double bandwidth_limit =
      net.bandwidth() + scaled_tol(net.bandwidth());
  std::vector<Path> out;
  if (request.demand > bandwidth_limit) return out;
  const bool relays = 2.0 * request.demand <= bandwidth_limit;
  const Eigen::MatrixXd& energy = net.energies();

  auto meets_threshold = [&](const Path& path) {
    if (!threshold) return true;
    const Eigen::VectorXd after =
        ledger.consumed() + path_energy(net, path, request.demand);
    const double bound =
        after.mean() + *threshold + scaled_tol(after.cwiseAbs().maxCoeff());
    return after.maxCoeff() <= bound;
  };

  std::size_t visits = 0;
  std::vector<char> on_path(n, 0);
  Path path{request.source};
  on_path[request.source] = 1;
  // Returns false once the visit budget is spent.
  auto extend = [&](auto&& self) -> bool {
    if (++visits > max_visits) return false;
    const NodeId at = path.back();
    if (at == request.destination) {
      if (meets_threshold(path)) out.push_back(path);
      return true;
    }
    if (static_cast<int>(path.size()) > request.hop_bound) return true;
    for (NodeId next = 0; next < n; ++next) {
      if (on_path[next] || energy(at, next) > net.max_power()) continue;
      if (next != request.destination && !relays) continue;
      path.push_back(next);
      on_path[next] = 1;
      const bool more = self(self);
      on_path[next] = 0;
      path.pop_back();
      if (!more) return false;
    }
    return true;
  };
  if (!extend(extend)) return std::nullopt;
  return out;
}

void restrict_route_arcs(const std::vector<Path>& paths, int r,
                         TopologyMilp& milp) {
  const int n = milp.link.size();
  std::vector<char> keep(static_cast<std::size_t>(n) * n, 0);
  for (const Path& p : paths) {
    for (std::size_t k = 0; k + 1 < p.size(); ++k) keep[p[k] * n + p[k + 1]] = 1;
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const VarId v = milp.route[r](i, j);
      if (v.valid() && !keep[i * n + j]) milp.model.tighten_bounds(v, 0.0, 0.0);
    }
  }
}

TopologySolution solve_single_request(const NetworkModel& net,
                                      const Request& request,
                                      const EnergyLedger& ledger,
                                      std::optional<double> threshold,
                                      const SolveLimits& limits,
                                      Presolve presolve) {
  constexpr int kMaxCutRounds = 64;
  const std::vector<Request> requests{request};
  TopologyMilp milp = build_topology_milp(net, requests, ledger, threshold);
  add_simple_path_rows(net, requests, milp);
  TopologySolution lost;
  lost.links = LinkMatrix::Constant(net.size(), net.size(), false);
  lost.routes.assign(1, std::nullopt);
  lost.node_tx_energy = Eigen::VectorXd::Zero(net.size());
  if (presolve == Presolve::kPaths) {
    const auto paths = admissible_paths(net, request, ledger, threshold);
    if (paths && paths->empty()) {
      lost.status = RouteStatus::kLost;
      return lost;
    }
    if (paths) restrict_route_arcs(*paths, 0, milp);
  }

  for (int round = 0; round < kMaxCutRounds; ++round) {
    const Solution raw = solve(milp.model, limits);
    lost.stats.nodes += raw.stats.nodes;
    lost.stats.lp_iterations += raw.stats.lp_iterations;
    if (raw.status == SolveStatus::kInfeasible) {
      lost.status = RouteStatus::kLost;
      return lost;
    }
    if (raw.status != SolveStatus::kOptimal) {
      lost.status = RouteStatus::kLostResourceLimit;
      return lost;
    }
    DecodedTopology decoded = decode_topology(net, requests, milp, raw);
    const auto violations =
        validate_topology(net, requests, ledger, threshold, decoded);
    if (violations.empty()) {
      decoded.solution.stats = lost.stats;
      return std::move(decoded.solution);
    }
    // Detached loops can lift the network average the threshold rows see.
    // Once they are stripped the route may break that row; forbid the loops
    // and solve again. Anything else is a defect.
    const bool only_threshold = std::all_of(
        violations.begin(), violations.end(), [](const Violation& v) {
          return v.kind == Violation::Kind::kThreshold;
        });
    if (!only_threshold || decoded.stripped_cycles[0].empty()) {
      throw ConsistencyError("decoded topology violates constraints: " +
                             violations.front().detail);
    }
    for (const Path& cycle : decoded.stripped_cycles[0]) {
      add_cycle_cut(milp, 0, cycle);
    }
  }
  lost.status = RouteStatus::kLostResourceLimit;
  return lost;
}

}  // namespace wsnqos
