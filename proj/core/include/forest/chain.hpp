#pragma once

#include <Eigen/Dense>

#include "forest/network.hpp"

namespace forest {

/// Reversible Markov chain of a network.
///
/// Conductances are rescaled so that the per-node totals g_k (self-loops once)
/// sum to one; then p_kl = g_kl / g_k and the stationary distribution is
/// pi = (g_1, ..., g_n). The source network is left untouched; `network` holds
/// the rescaled copy, whose per-branch identity orchard weights rely on.
struct Chain {
  Network network;
  Eigen::MatrixXd P;
  Eigen::VectorXd pi;
  double scale = 1.0;  // factor applied to the source conductances

  std::size_t state_count() const noexcept { return network.node_count(); }
  /// Scaled total conductance of state k; equals pi(k).
  double g(NodeIndex k) const { return network.total_conductance_at(k); }
  /// Transition probability carried by one branch out of `from`: g_b / g_from.
  double branch_probability(BranchId b, NodeIndex from) const;
};

Chain to_markov_chain(const Network& net);

}  // namespace forest
