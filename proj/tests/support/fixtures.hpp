#pragma once

#include <cstddef>
#include <random>

#include "forest/network.hpp"

namespace forest::test {

/// Nodes {1,2}, branch (1,2,g=2).
Network g2();
/// Nodes {1,2,3}, branches (1,2,1), (2,3,2), (1,3,3).
Network g3();
/// Nodes {1,2,3}, branches (1,2,1), (2,3,1).
Network p3();
/// Branch (1,2,0.25) with self-loops (1,1,0.3) and (2,2,0.2): total mass 1.
Network two_state();

struct RandomNetworkSpec {
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 7;
  double g_lo = 0.1;
  double g_hi = 10.0;
  std::size_t max_extra_branches = 5;  // on top of a random spanning tree
  bool self_loops = false;
};

/// Connected random multigraph: a random tree plus extra branches, which may
/// be parallel to existing ones and, if enabled, self-loops.
Network random_network(std::mt19937_64& gen, const RandomNetworkSpec& spec = {});

/// Random sorted subset of {0..n-1} with size in [lo, hi].
NodeSet random_subset(std::mt19937_64& gen, std::size_t n, std::size_t lo, std::size_t hi);

/// Uniform real in (lo, hi).
double uniform(std::mt19937_64& gen, double lo, double hi);

}  // namespace forest::test
