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

// Geometric network model: node placement, Euclidean distances, d^a
// transmission energies and the topologies induced by per-node powers.

#ifndef WSNQOS_NET_MODEL_HPP
#define WSNQOS_NET_MODEL_HPP

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace wsnqos {

// Dense index in [0, n).
using NodeId = int;

// Directed link matrix: entry (i, j) is true iff node i reaches node j.
using LinkMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Undirected edge {first, second} with first < second.
using Edge = std::pair<NodeId, NodeId>;

// Per node, the ascending candidate transmission powers. The first entry is
// always 0 (radio off); every other entry is the energy needed to reach some
// other node and never exceeds the power cap.
using PowerLevelSet = std::vector<std::vector<double>>;

// Immutable after construction.
class NetworkModel {
 public:
  // positions: one column per node (x, y). Throws std::invalid_argument when
  // n < 2, a coordinate is not finite, two nodes coincide, or any of the
  // scalar parameters is not strictly positive.
  NetworkModel(Eigen::Matrix2Xd positions, double path_loss_exponent,
               double max_power, double bandwidth);

  int size() const { return static_cast<int>(positions_.cols()); }
  const Eigen::Matrix2Xd& positions() const { return positions_; }
  double path_loss_exponent() const { return path_loss_exponent_; }
  double max_power() const { return max_power_; }
  double bandwidth() const { return bandwidth_; }

  // Cached pairwise tables; diagonal entries are zero and meaningless.
  const Eigen::MatrixXd& distances() const { return distances_; }
  const Eigen::MatrixXd& energies() const { return energies_; }

 private:
  Eigen::Matrix2Xd positions_;
  double path_loss_exponent_;
  double max_power_;
  double bandwidth_;
  Eigen::MatrixXd distances_;
  Eigen::MatrixXd energies_;
};

// Euclidean distance. Throws std::domain_error for i == j and
// std::out_of_range for indices outside [0, n).
double distance(const NetworkModel& net, NodeId i, NodeId j);

// d_{i,j}^a, the energy node i spends to reach node j.
double link_energy(const NetworkModel& net, NodeId i, NodeId j);

PowerLevelSet power_levels(const NetworkModel& net);

// Link (i, j) is present iff link_energy(i, j) <= power[i]. Ties are
// inclusive, so the result is closed under "reach j implies reach every node
// at most as far as j". Throws std::domain_error when a power is negative,
// not finite, or above the cap.
LinkMatrix induced_links(const NetworkModel& net, const Eigen::VectorXd& power);

// Keeps {i, j} iff both (i, j) and (j, i) are present. Sorted.
std::vector<Edge> symmetric_closure(const LinkMatrix& links);

}  // namespace wsnqos

#endif  // WSNQOS_NET_MODEL_HPP
