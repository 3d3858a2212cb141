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

#include "wsnqos/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsnqos {
namespace {

void check_index(const NetworkModel& net, NodeId i) {
  if (i < 0 || i >= net.size()) {
    throw std::out_of_range("node index " + std::to_string(i) +
                            " outside [0, " + std::to_string(net.size()) +
                            ")");
  }
}

void check_pair(const NetworkModel& net, NodeId i, NodeId j) {
  check_index(net, i);
  check_index(net, j);
  if (i == j) throw std::domain_error("distance of a node to itself");
}

}  // namespace

NetworkModel::NetworkModel(Eigen::Matrix2Xd positions,
                           double path_loss_exponent, double max_power,
                           double bandwidth)
    : positions_(std::move(positions)),
      path_loss_exponent_(path_loss_exponent),
      max_power_(max_power),
      bandwidth_(bandwidth) {
  const Eigen::Index n = positions_.cols();
  if (n < 2) throw std::invalid_argument("network needs at least 2 nodes");
  if (!positions_.allFinite()) {
    throw std::invalid_argument("node coordinates must be finite");
  }
  if (!(path_loss_exponent_ > 0.0) || !std::isfinite(path_loss_exponent_)) {
    throw std::invalid_argument("path-loss exponent must be positive");
  }
  if (!(max_power_ > 0.0) || !std::isfinite(max_power_)) {
    throw std::invalid_argument("power cap must be positive");
  }
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("bandwidth must be positive");
  }

  distances_.setZero(n, n);
  energies_.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (positions_.col(i) - positions_.col(j)).norm();
      if (d == 0.0) {
        throw std::invalid_argument("nodes " + std::to_string(i) + " and " +
                                    std::to_string(j) +
                                    " share the same coordinates");
      }
      const double e = std::pow(d, path_loss_exponent_);
      distances_(i, j) = distances_(j, i) = d;
      energies_(i, j) = energies_(j, i) = e;
    }
  }
}

double distance(const NetworkModel& net, NodeId i, NodeId j) {
  check_pair(net, i, j);
  return net.distances()(i, j);
}

double link_energy(const NetworkModel& net, NodeId i, NodeId j) {
  check_pair(net, i, j);
  return net.energies()(i, j);
}

PowerLevelSet power_levels(const NetworkModel& net) {
  const int n = net.size();
  PowerLevelSet levels(n);
  for (int i = 0; i < n; ++i) {
    auto& row = levels[i];
    row.push_back(0.0);
    for (int j = 0; j < n; ++j) {
      if (j != i && net.energies()(i, j) <= net.max_power()) {
        row.push_back(net.energies()(i, j));
      }
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return levels;
}

LinkMatrix induced_links(const NetworkModel& net,
                         const Eigen::VectorXd& power) {
  const int n = net.size();
  if (power.size() != n) {
    throw std::invalid_argument("power vector length differs from node count");
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(power[i]) || power[i] < 0.0 ||
        power[i] > net.max_power()) {
      throw std::domain_error("power of node " + std::to_string(i) +
                              " outside [0, P]");
    }
  }
  LinkMatrix links = LinkMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      links(i, j) = (j != i) && net.energies()(i, j) <= power[i];
    }
  }
  return links;
}

std::vector<Edge> symmetric_closure(const LinkMatrix& links) {
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < links.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < links.cols(); ++j) {
      if (links(i, j) && links(j, i)) {
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
      }
    }
  }
  return edges;
}

}  // namespace wsnqos
