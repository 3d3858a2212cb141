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

// Optimization models for energy-aware topology control and QoS routing:
//
//  * the min-max node-load flow LP, whose optimum L_max reports bandwidth
//    utilization (L_max > 1 means some node is over capacity);
//  * the topology + routing MILP minimizing the largest transmission energy
//    E_max subject to link symmetry, broadcast (distance) ordering, the power
//    cap, per-request hop bounds, link coupling, unit route flow, node
//    bandwidth and, optionally, the consumed-energy threshold
//        E_i <= E_average + threshold      for every node i,
//    where E_i includes the energy of the routes being decided.
//
// Decoders turn solver output back into link sets and node paths, and an
// independent validator re-checks every constraint on the decoded structures.

#ifndef WSNQOS_QOS_HPP
#define WSNQOS_QOS_HPP

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnqos/milp.hpp"
#include "wsnqos/net_model.hpp"

namespace wsnqos {

struct Request {
  NodeId source = 0;
  NodeId destination = 0;
  double demand = 1.0;
  int hop_bound = 1;

  friend bool operator==(const Request&, const Request&) = default;
};

// Throws std::invalid_argument unless source != destination, both are nodes of
// `net`, demand > 0 and hop_bound >= 1.
void validate_request(const NetworkModel& net, const Request& request);

// Cumulative transmission energy per node.
class EnergyLedger {
 public:
  explicit EnergyLedger(int n) : consumed_(Eigen::VectorXd::Zero(n)) {}
  explicit EnergyLedger(Eigen::VectorXd consumed);

  int size() const { return static_cast<int>(consumed_.size()); }
  const Eigen::VectorXd& consumed() const { return consumed_; }
  double operator[](NodeId i) const { return consumed_[i]; }
  double total() const { return consumed_.sum(); }
  double average() const { return total() / size(); }

  void charge(const Eigen::VectorXd& increment);

  friend bool operator==(const EnergyLedger& a, const EnergyLedger& b) {
    return a.consumed_ == b.consumed_;
  }

 private:
  Eigen::VectorXd consumed_;
};

// Ordered node sequence from source to destination.
using Path = std::vector<NodeId>;

// Raised when solver output fails the independent re-check. Signals a bug, not
// an unroutable request.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the solver stops on a node or iteration limit where a caller
// needs a proven answer.
class SolverLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Variable handles over ordered node pairs; diagonal entries stay invalid.
class PairVars {
 public:
  PairVars() = default;
  explicit PairVars(int n) : n_(n), ids_(static_cast<std::size_t>(n) * n) {}
  int size() const { return n_; }
  VarId operator()(NodeId i, NodeId j) const { return ids_[i * n_ + j]; }
  VarId& operator()(NodeId i, NodeId j) { return ids_[i * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<VarId> ids_;
};

// ---------------------------------------------------------------------------
// Load-balancing flow LP.

// flow[r](i, j) is the flow of request r on the ordered pair (i, j).
struct LoadLp {
  MilpModel model;
  VarId l_max;
  std::vector<PairVars> flow;
};

// A node's load is the traffic it relays plus the traffic it originates or
// terminates; L_max bounds every load as a fraction of the bandwidth B.
// An empty request list is accepted and yields L_max = 0.
LoadLp build_load_lp(const NetworkModel& net,
                     const std::vector<Request>& requests);

struct LoadLpResult {
  double l_max = 0.0;
  bool overloaded = false;
  std::vector<Eigen::MatrixXd> flows;
};

// Throws SolverLimitError on ResourceLimit.
LoadLpResult solve_load_lp(const NetworkModel& net,
                           const std::vector<Request>& requests,
                           const SolveLimits& limits = {});

// ---------------------------------------------------------------------------
// Topology + routing MILP.

struct TopologyMilp {
  MilpModel model;
  VarId e_max;
  PairVars link;
  std::vector<PairVars> route;
};

// `threshold` absent omits the consumed-energy rows.
TopologyMilp build_topology_milp(const NetworkModel& net,
                                 const std::vector<Request>& requests,
                                 const EnergyLedger& ledger,
                                 std::optional<double> threshold);

// Excludes one directed cycle of request r's route variables. Valid for every
// simple path, so it only removes solutions that carry detached loops.
void add_cycle_cut(TopologyMilp& milp, int r, const Path& cycle);

// Rows satisfied by every simple route: each node sends and receives on at
// most one arc (none into the source or out of the destination), and the
// energy of that arc is covered by E_max from both ends. They leave the
// optimum unchanged and tighten the relaxation.
void add_simple_path_rows(const NetworkModel& net,
                          const std::vector<Request>& requests,
                          TopologyMilp& milp);

// Simple source-destination paths within the hop bound whose hops fit the
// power cap and that meet the bandwidth and threshold rows on their own.
// Returns nullopt once more than `max_visits` partial paths were explored.
std::optional<std::vector<Path>> admissible_paths(
    const NetworkModel& net, const Request& request, const EnergyLedger& ledger,
    std::optional<double> threshold, std::size_t max_visits = 200'000);

// Fixes to zero every route arc of request r that lies on none of `paths`.
void restrict_route_arcs(const std::vector<Path>& paths, int r,
                         TopologyMilp& milp);

enum class RouteStatus { kRouted, kLost, kLostResourceLimit };

std::string to_string(RouteStatus status);

struct TopologySolution {
  RouteStatus status = RouteStatus::kLost;
  double e_max = 0.0;
  LinkMatrix links;
  // One entry per request; empty optional means Lost.
  std::vector<std::optional<Path>> routes;
  // Energy each node spends transmitting the routed demands.
  Eigen::VectorXd node_tx_energy;
  SolveStats stats;
};

// Energy of sending `demand` along `path`: each transmitting node pays
// demand * d^a to its successor, the destination pays nothing.
Eigen::VectorXd path_energy(const NetworkModel& net, const Path& path,
                            double demand);

// Decoded solver output before validation, with any loops that were split off
// the routes.
struct DecodedTopology {
  TopologySolution solution;
  std::vector<std::vector<Path>> stripped_cycles;
  std::vector<int> raw_arc_count;
};

// Reads links and routes from an Optimal solution. Each route is the
// fewest-hop walk from source to destination over the selected arcs; the
// remaining arcs form cycles, which are reported and dropped. Throws
// ConsistencyError when a route cannot be walked.
DecodedTopology decode_topology(const NetworkModel& net,
                                const std::vector<Request>& requests,
                                const TopologyMilp& milp, const Solution& raw);

// Re-checks every topology and routing constraint directly on decoded
// structures; returns human-readable violations (empty when valid).
struct Violation {
  enum class Kind {
    kSymmetry,
    kOrdering,
    kEnergyBound,
    kHopBound,
    kCoupling,
    kRoute,
    kBandwidth,
    kThreshold,
  };
  Kind kind;
  std::string detail;
};

std::vector<Violation> validate_topology(const NetworkModel& net,
                                         const std::vector<Request>& requests,
                                         const EnergyLedger& ledger,
                                         std::optional<double> threshold,
                                         const DecodedTopology& decoded);

// decode_topology followed by validate_topology; throws ConsistencyError on
// any violation.
TopologySolution decode_and_validate(const NetworkModel& net,
                                     const std::vector<Request>& requests,
                                     const EnergyLedger& ledger,
                                     std::optional<double> threshold,
                                     const TopologyMilp& milp,
                                     const Solution& raw);

enum class Presolve {
  kOff,
  // Enumerate admissible paths first: none means Lost without a solve,
  // otherwise arcs on no admissible path are fixed to zero.
  kPaths,
};

// Solves the MILP for one request against the current ledger. Infeasible
// requests come back Lost with zero energy; solver limits come back
// LostResourceLimit. Never mutates the ledger.
TopologySolution solve_single_request(const NetworkModel& net,
                                      const Request& request,
                                      const EnergyLedger& ledger,
                                      std::optional<double> threshold,
                                      const SolveLimits& limits = {},
                                      Presolve presolve = Presolve::kPaths);

}  // namespace wsnqos

#endif  // WSNQOS_QOS_HPP
