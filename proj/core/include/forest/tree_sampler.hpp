#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "forest/enumeration.hpp"
#include "forest/network.hpp"
#include "forest/rng.hpp"

namespace forest {

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::uint64_t max_walk_steps = 100'000'000;
};

/// Spanning trees drawn with probability proportional to the product of their
/// branch conductances, by loop-erased random walk toward node 0.
///
/// The walk steps along an incident branch chosen with probability g_b / g_k,
/// so parallel branches compete individually. Self-loop steps are erased on
/// the next step out of the node and never enter the tree.
///
/// Holds per-node step distributions: one sampler per thread.
class SpanningTreeSampler {
 public:
  explicit SpanningTreeSampler(const Network& net,
                               std::uint64_t max_walk_steps = SamplerConfig{}.max_walk_steps);

  /// Sorted branch ids of a sampled tree. Throws WalkBudgetExceeded.
  std::vector<BranchId> sample_branches(Rng& rng);
  Tree sample(Rng& rng) { return Tree{sample_branches(rng)}; }

 private:
  struct Step {
    BranchId branch;
    NodeIndex to;
  };

  std::vector<std::vector<Step>> steps_;
  std::vector<std::discrete_distribution<std::size_t>> choose_;
  std::uint64_t max_walk_steps_;
  std::vector<bool> in_tree_;
  std::vector<std::size_t> next_;  // index into steps_[k] of the last exit
};

/// Members of F_R with probability proportional to their conductance product:
/// fuse R, sample a spanning tree of the result, map its branches back.
class ForestSampler {
 public:
  ForestSampler(const Network& net, NodeSet roots,
                std::uint64_t max_walk_steps = SamplerConfig{}.max_walk_steps);

  std::vector<BranchId> sample_branches(Rng& rng);
  Forest sample(Rng& rng);

  const ContractionMap& contraction() const noexcept { return map_; }

 private:
  const Network* net_;
  NodeSet roots_;
  ContractionMap map_;
  SpanningTreeSampler child_;
};

/// Branches with probability g_b / sum of all conductances, self-loops included.
class BranchSampler {
 public:
  explicit BranchSampler(const Network& net);
  BranchId sample(Rng& rng) { return pick_(rng); }

 private:
  std::discrete_distribution<BranchId> pick_;
};

Tree sample_spanning_tree(const Network& net, Rng& rng, const SamplerConfig& cfg = {});
Forest sample_separating_forest(const Network& net, const NodeSet& roots, Rng& rng,
                                const SamplerConfig& cfg = {});
BranchId sample_branch(const Network& net, Rng& rng);

}  // namespace forest
