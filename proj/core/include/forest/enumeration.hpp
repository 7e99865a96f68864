#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "forest/chain.hpp"
#include "forest/network.hpp"

namespace forest {

struct EnumerationLimits {
  /// Enumerations producing more objects than this throw TooLarge.
  std::size_t max_objects = 1'000'000;
};

/// Spanning tree: n - 1 branch ids, sorted, no self-loops.
struct Tree {
  std::vector<BranchId> branches;
};

/// A member of F_R: a forest in which every node reaches exactly one root.
///
/// Each non-root node keeps the branch leading one step toward its root, so
/// block membership, depth d_f(m) and the path to the root are all available.
class Forest {
 public:
  /// Throws InvalidForest unless `branches` separate `roots` and span the net.
  static Forest build(const Network& net, std::vector<BranchId> branches,
                      NodeSet roots);

  const std::vector<BranchId>& branches() const noexcept { return branches_; }
  const NodeSet& roots() const noexcept { return roots_; }
  std::size_t node_count() const noexcept { return block_of_.size(); }

  bool is_root(NodeIndex m) const { return parent_branch_.at(m) == kNone; }
  /// S_f(m): the root of m's block.
  NodeIndex block_of(NodeIndex m) const { return block_of_.at(m); }
  /// d_f(m): branches on the path from m to its root.
  std::size_t depth(NodeIndex m) const { return depth_.at(m); }
  std::optional<BranchId> parent_branch(NodeIndex m) const;
  /// Next node toward the root; the node itself for roots.
  NodeIndex parent(NodeIndex m) const { return parent_.at(m); }
  /// Branches from m to block_of(m), in walking order.
  std::vector<BranchId> path_to_root(NodeIndex m) const;
  /// B_f(root): nodes whose block root is `root`, ascending.
  std::vector<NodeIndex> block(NodeIndex root) const;

 private:
  static constexpr BranchId kNone = static_cast<BranchId>(-1);

  std::vector<BranchId> branches_;
  NodeSet roots_;
  std::vector<NodeIndex> block_of_;
  std::vector<NodeIndex> parent_;
  std::vector<BranchId> parent_branch_;
  std::vector<std::size_t> depth_;
};

/// A forest with every branch directed toward the root of its block. With a
/// single root this is an arborescence.
struct Orchard {
  struct Edge {
    NodeIndex from;
    NodeIndex to;
    BranchId branch;
  };

  Forest forest;

  std::vector<Edge> edges() const;
};

struct WeightedTree {
  Tree tree;
  double weight;
};

struct WeightedForest {
  Forest forest;
  double weight;
};

struct WeightedOrchard {
  Orchard orchard;
  double weight;  // o[f,R]: product of directed-edge transition probabilities
};

/// Product of the conductances of `branches`; 1 for the empty set.
double conductance_product(const Network& net, std::span<const BranchId> branches);

/// o[f,R] for the orchard on `forest`: product over non-root nodes m of the
/// probability g_b / g_m of stepping along m's rootward branch b.
double orchard_weight(const Chain& chain, const Forest& forest);

/// Calls `visit` with the sorted branch ids of each member of F_R, in
/// lexicographic order. Throws EmptyRootSet or TooLarge.
void for_each_separating_forest(
    const Network& net, const NodeSet& roots,
    const std::function<void(std::span<const BranchId>)>& visit,
    const EnumerationLimits& limits = {});

std::vector<WeightedTree> enumerate_spanning_trees(
    const Network& net, const EnumerationLimits& limits = {});

std::vector<WeightedForest> enumerate_separating_forests(
    const Network& net, const NodeSet& roots, const EnumerationLimits& limits = {});

std::vector<WeightedOrchard> enumerate_orchards(
    const Chain& chain, const NodeSet& roots, const EnumerationLimits& limits = {});

/// The lexicographically smallest spanning tree: branches taken greedily in id
/// order whenever they join two components.
Tree greedy_spanning_tree(const Network& net);

double forest_weight_sum(const Network& net, const NodeSet& roots,
                         const EnumerationLimits& limits = {});
double tree_weight_sum(const Network& net, const EnumerationLimits& limits = {});

}  // namespace forest
