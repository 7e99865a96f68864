#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "forest/chain.hpp"
#include "forest/network.hpp"

namespace forest {

struct VoltageVector {
  Eigen::VectorXd v;
  std::optional<NodeIndex> ground;
};

/// Branch currents.
///
/// `node(k, l)` is the current from k to l summed over parallel branches and
/// is antisymmetric with a zero diagonal. `branch[b]`, when present, is the
/// current in branch b flowing from its u end to its v end.
struct CurrentMatrix {
  Eigen::MatrixXd node;
  std::vector<double> branch;

  bool has_branch_currents() const noexcept { return !branch.empty(); }
  /// Net current leaving each node: the injection vector J.
  Eigen::VectorXd row_sums() const { return node.rowwise().sum(); }
};

/// Voltages with the fixed set pinned and zero injected current elsewhere.
VoltageVector solve_dirichlet(const Network& net, const FixedVoltages& fixed);

/// Voltages with the fixed set pinned and `injection(k)` amperes injected at
/// every free node k (entries at fixed nodes are ignored).
VoltageVector solve_mixed(const Network& net, const FixedVoltages& fixed,
                          const Eigen::VectorXd& injection);

/// Laplacian * v = J with v(ground) = 0. Throws InvalidInjection.
VoltageVector solve_injected(const Network& net, const InjectedCurrents& injected,
                             NodeIndex ground);

/// i_b = g_b (v_u - v_v) per branch; self-loops carry nothing.
CurrentMatrix branch_currents(const Network& net, const VoltageVector& voltages);

/// Current each node draws from outside: J = Laplacian * v.
Eigen::VectorXd node_injections(const Network& net, const VoltageVector& voltages);

/// Determinant of the weighted Laplacian with the last row and column removed:
/// the weighted spanning-tree sum by the matrix-tree theorem.
double tree_sum_determinant(const Network& net);

struct HittingResult {
  double tau = 0.0;
  Eigen::VectorXd absorb;  // per state; zero outside R
};

/// Expected steps until the walk from `start` first enters R, and where it
/// enters, from the fundamental matrix of the chain with R absorbing.
HittingResult fundamental_hitting(const Chain& chain, NodeIndex start,
                                  const NodeSet& roots);

/// e_k: expected visits to k before absorption in R, counting the start and
/// not the final arrival; zero on R.
Eigen::VectorXd expected_visits(const Chain& chain, NodeIndex start,
                                const NodeSet& roots);

}  // namespace forest
