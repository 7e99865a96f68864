#include "forest/tree_sampler.hpp"

#include <algorithm>

#include "forest/error.hpp"

namespace forest {

namespace {

NodeSet checked_roots(const Network& net, NodeSet roots) {
  if (roots.empty()) fail(ErrorCode::EmptyRootSet, "root set is empty");
  return normalize_node_set(net, std::move(roots));
}

}  // namespace

SpanningTreeSampler::SpanningTreeSampler(const Network& net,
                                         std::uint64_t max_walk_steps)
    : steps_(net.node_count()),
      choose_(net.node_count()),
      max_walk_steps_(max_walk_steps),
      in_tree_(net.node_count(), false),
      next_(net.node_count(), 0) {
  for (NodeIndex k = 0; k < net.node_count(); ++k) {
    std::vector<double> weights;
    for (BranchId id : net.incident(k)) {
      const Branch& b = net.branch(id);
      steps_[k].push_back(Step{id, b.other(k)});
      weights.push_back(b.g);
    }
    if (!weights.empty())
      choose_[k] = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }
}

std::vector<BranchId> SpanningTreeSampler::sample_branches(Rng& rng) {
  const std::size_t n = steps_.size();
  std::vector<BranchId> tree;
  if (n == 0) return tree;
  tree.reserve(n - 1);
  std::fill(in_tree_.begin(), in_tree_.end(), false);
  in_tree_[0] = true;

  std::uint64_t walked = 0;
  for (NodeIndex start = 1; start < n; ++start) {
    // Walk until the tree is hit, remembering only the last exit from each
    // node; following those exits afterwards is the loop-erased path.
    for (NodeIndex k = start; !in_tree_[k];) {
      if (++walked > max_walk_steps_)
        fail(ErrorCode::WalkBudgetExceeded,
             "walk exceeded " + std::to_string(max_walk_steps_) + " steps");
      next_[k] = choose_[k](rng);
      k = steps_[k][next_[k]].to;
    }
    for (NodeIndex k = start; !in_tree_[k];) {
      in_tree_[k] = true;
      const Step& s = steps_[k][next_[k]];
      tree.push_back(s.branch);
      k = s.to;
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

ForestSampler::ForestSampler(const Network& net, NodeSet roots,
                             std::uint64_t max_walk_steps)
    : net_(&net),
      roots_(checked_roots(net, std::move(roots))),
      map_(contract(net, roots_)),
      child_(map_.child, max_walk_steps) {}

std::vector<BranchId> ForestSampler::sample_branches(Rng& rng) {
  std::vector<BranchId> branches = child_.sample_branches(rng);
  for (BranchId& b : branches) b = map_.parent_branch[b];
  std::sort(branches.begin(), branches.end());
  return branches;
}

Forest ForestSampler::sample(Rng& rng) {
  return Forest::build(*net_, sample_branches(rng), roots_);
}

BranchSampler::BranchSampler(const Network& net) {
  if (net.branch_count() == 0) fail(ErrorCode::Disconnected, "network has no branches");
  std::vector<double> weights;
  weights.reserve(net.branch_count());
  for (const Branch& b : net.branches()) weights.push_back(b.g);
  pick_ = std::discrete_distribution<BranchId>(weights.begin(), weights.end());
}

Tree sample_spanning_tree(const Network& net, Rng& rng, const SamplerConfig& cfg) {
  return SpanningTreeSampler(net, cfg.max_walk_steps).sample(rng);
}

Forest sample_separating_forest(const Network& net, const NodeSet& roots, Rng& rng,
                                const SamplerConfig& cfg) {
  return ForestSampler(net, roots, cfg.max_walk_steps).sample(rng);
}

BranchId sample_branch(const Network& net, Rng& rng) {
  return BranchSampler(net).sample(rng);
}

}  // namespace forest
