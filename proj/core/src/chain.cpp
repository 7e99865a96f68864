#include "forest/chain.hpp"

#include <numeric>

namespace forest {

double Chain::branch_probability(BranchId b, NodeIndex from) const {
  return network.branch(b).g / network.total_conductance_at(from);
}

Chain to_markov_chain(const Network& net) {
  double mass = 0.0;
  for (NodeIndex k = 0; k < net.node_count(); ++k)
    mass += net.total_conductance_at(k);

  Chain chain{net.scaled(1.0 / mass), {}, {}, 1.0 / mass};
  const Eigen::MatrixXd G = chain.network.conductance_matrix();
  const auto n = G.rows();
  chain.pi.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    chain.pi(k) = chain.network.total_conductance_at(static_cast<NodeIndex>(k));
  chain.P = chain.pi.cwiseInverse().asDiagonal() * G;
  return chain;
}

}  // namespace forest
