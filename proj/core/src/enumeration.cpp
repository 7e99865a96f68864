#include "forest/enumeration.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "forest/error.hpp"

namespace forest {

// ---------------------------------------------------------------- Forest

Forest Forest::build(const Network& net, std::vector<BranchId> branches,
                     NodeSet roots) {
  const std::size_t n = net.node_count();
  if (roots.empty()) fail(ErrorCode::EmptyRootSet, "forest needs at least one root");
  roots = normalize_node_set(net, std::move(roots));
  std::sort(branches.begin(), branches.end());
  if (std::adjacent_find(branches.begin(), branches.end()) != branches.end())
    fail(ErrorCode::InvalidForest, "repeated branch");
  if (branches.size() + roots.size() != n)
    fail(ErrorCode::InvalidForest,
         std::to_string(branches.size()) + " branches cannot separate " +
             std::to_string(roots.size()) + " roots over " + std::to_string(n) +
             " nodes");

  std::vector<std::vector<BranchId>> adjacent(n);
  for (BranchId id : branches) {
    const Branch& b = net.branch(id);
    if (b.is_self_loop()) fail(ErrorCode::InvalidForest, "self-loop in forest");
    adjacent[b.u].push_back(id);
    adjacent[b.v].push_back(id);
  }

  Forest f;
  f.branches_ = std::move(branches);
  f.roots_ = std::move(roots);
  f.block_of_.assign(n, n);
  f.parent_.assign(n, n);
  f.parent_branch_.assign(n, kNone);
  f.depth_.assign(n, 0);

  std::deque<NodeIndex> queue;
  for (NodeIndex r : f.roots_) {
    f.block_of_[r] = r;
    f.parent_[r] = r;
    queue.push_back(r);
  }
  std::size_t reached = f.roots_.size();
  while (!queue.empty()) {
    const NodeIndex k = queue.front();
    queue.pop_front();
    for (BranchId id : adjacent[k]) {
      const NodeIndex m = net.branch(id).other(k);
      if (id == f.parent_branch_[k]) continue;
      if (f.block_of_[m] != n)
        fail(ErrorCode::InvalidForest,
             "branch " + std::to_string(id) + " closes a cycle or joins two roots");
      f.block_of_[m] = f.block_of_[k];
      f.parent_[m] = k;
      f.parent_branch_[m] = id;
      f.depth_[m] = f.depth_[k] + 1;
      ++reached;
      queue.push_back(m);
    }
  }
  if (reached != n) fail(ErrorCode::InvalidForest, "forest does not span the network");
  return f;
}

std::optional<BranchId> Forest::parent_branch(NodeIndex m) const {
  const BranchId b = parent_branch_.at(m);
  if (b == kNone) return std::nullopt;
  return b;
}

std::vector<BranchId> Forest::path_to_root(NodeIndex m) const {
  std::vector<BranchId> path;
  path.reserve(depth(m));
  for (NodeIndex k = m; !is_root(k); k = parent_[k]) path.push_back(parent_branch_[k]);
  return path;
}

std::vector<NodeIndex> Forest::block(NodeIndex root) const {
  std::vector<NodeIndex> members;
  for (NodeIndex m = 0; m < block_of_.size(); ++m)
    if (block_of_[m] == root) members.push_back(m);
  return members;
}

std::vector<Orchard::Edge> Orchard::edges() const {
  std::vector<Edge> out;
  for (NodeIndex m = 0; m < forest.node_count(); ++m)
    if (auto b = forest.parent_branch(m)) out.push_back(Edge{m, forest.parent(m), *b});
  return out;
}

// ---------------------------------------------------------------- weights

double conductance_product(const Network& net, std::span<const BranchId> branches) {
  double w = 1.0;
  for (BranchId id : branches) w *= net.branch(id).g;
  return w;
}

double orchard_weight(const Chain& chain, const Forest& forest) {
  double w = 1.0;
  for (NodeIndex m = 0; m < forest.node_count(); ++m)
    if (auto b = forest.parent_branch(m)) w *= chain.branch_probability(*b, m);
  return w;
}

// ---------------------------------------------------------------- search

namespace {

/// Union-find over nodes where a component is "rooted" when it holds a root.
struct Components {
  std::vector<NodeIndex> parent;
  std::vector<bool> rooted;

  NodeIndex find(NodeIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[a] = b;
    rooted[b] = rooted[b] || rooted[a];
  }
};

/// Include/exclude recursion over branch ids in increasing order, which is
/// deletion/contraction on the multigraph. A branch may be included when it
/// joins two components that are not both rooted; either choice is explored
/// only while the chosen branches plus the undecided ones can still attach
/// every component to a root, so every leaf is a member of F_R.
class ForestSearch {
 public:
  ForestSearch(const Network& net, const NodeSet& roots,
               const std::function<void(std::span<const BranchId>)>& visit,
               const EnumerationLimits& limits)
      : net_(net), visit_(visit), limits_(limits),
        target_(net.node_count() - roots.size()) {
    for (const Branch& b : net.branches())
      if (!b.is_self_loop()) candidates_.push_back(b.id);
    start_.parent.resize(net.node_count());
    std::iota(start_.parent.begin(), start_.parent.end(), NodeIndex{0});
    start_.rooted.assign(net.node_count(), false);
    for (NodeIndex r : roots) start_.rooted[r] = true;
  }

  void run() {
    if (feasible(start_, 0)) recurse(0, start_);
  }

 private:
  bool feasible(const Components& c, std::size_t from) const {
    Components tmp = c;
    for (std::size_t i = from; i < candidates_.size(); ++i) {
      const Branch& b = net_.branch(candidates_[i]);
      tmp.unite(b.u, b.v);
    }
    for (NodeIndex k = 0; k < net_.node_count(); ++k)
      if (!tmp.rooted[tmp.find(k)]) return false;
    return true;
  }

  void recurse(std::size_t pos, Components c) {
    if (chosen_.size() == target_) {
      if (++emitted_ > limits_.max_objects)
        fail(ErrorCode::TooLarge,
             "more than " + std::to_string(limits_.max_objects) + " forests");
      visit_(chosen_);
      return;
    }
    if (pos == candidates_.size()) return;

    const Branch& b = net_.branch(candidates_[pos]);
    const NodeIndex a = c.find(b.u);
    const NodeIndex z = c.find(b.v);
    if (a != z && !(c.rooted[a] && c.rooted[z])) {
      Components with = c;
      with.unite(a, z);
      chosen_.push_back(b.id);
      if (feasible(with, pos + 1)) recurse(pos + 1, std::move(with));
      chosen_.pop_back();
    }
    if (feasible(c, pos + 1)) recurse(pos + 1, std::move(c));
  }

  const Network& net_;
  const std::function<void(std::span<const BranchId>)>& visit_;
  const EnumerationLimits& limits_;
  const std::size_t target_;
  std::vector<BranchId> candidates_;
  std::vector<BranchId> chosen_;
  Components start_;
  std::size_t emitted_ = 0;
};

}  // namespace

void for_each_separating_forest(
    const Network& net, const NodeSet& roots,
    const std::function<void(std::span<const BranchId>)>& visit,
    const EnumerationLimits& limits) {
  if (roots.empty()) fail(ErrorCode::EmptyRootSet, "root set is empty");
  const NodeSet normalized = normalize_node_set(net, roots);
  ForestSearch(net, normalized, visit, limits).run();
}

std::vector<WeightedTree> enumerate_spanning_trees(const Network& net,
                                                   const EnumerationLimits& limits) {
  std::vector<WeightedTree> out;
  for_each_separating_forest(
      net, {0},
      [&](std::span<const BranchId> branches) {
        out.push_back(WeightedTree{Tree{{branches.begin(), branches.end()}},
                                   conductance_product(net, branches)});
      },
      limits);
  return out;
}

std::vector<WeightedForest> enumerate_separating_forests(
    const Network& net, const NodeSet& roots, const EnumerationLimits& limits) {
  std::vector<WeightedForest> out;
  for_each_separating_forest(
      net, roots,
      [&](std::span<const BranchId> branches) {
        out.push_back(WeightedForest{
            Forest::build(net, {branches.begin(), branches.end()}, roots),
            conductance_product(net, branches)});
      },
      limits);
  return out;
}

std::vector<WeightedOrchard> enumerate_orchards(const Chain& chain,
                                                const NodeSet& roots,
                                                const EnumerationLimits& limits) {
  std::vector<WeightedOrchard> out;
  for_each_separating_forest(
      chain.network, roots,
      [&](std::span<const BranchId> branches) {
        Forest f = Forest::build(chain.network, {branches.begin(), branches.end()}, roots);
        const double o = orchard_weight(chain, f);
        out.push_back(WeightedOrchard{Orchard{std::move(f)}, o});
      },
      limits);
  return out;
}

Tree greedy_spanning_tree(const Network& net) {
  Components c;
  c.parent.resize(net.node_count());
  std::iota(c.parent.begin(), c.parent.end(), NodeIndex{0});
  c.rooted.assign(net.node_count(), false);
  Tree t;
  for (const Branch& b : net.branches()) {
    if (c.find(b.u) == c.find(b.v)) continue;
    c.unite(b.u, b.v);
    t.branches.push_back(b.id);
  }
  return t;
}

double forest_weight_sum(const Network& net, const NodeSet& roots,
                         const EnumerationLimits& limits) {
  double sum = 0.0;
  for_each_separating_forest(
      net, roots,
      [&](std::span<const BranchId> branches) {
        sum += conductance_product(net, branches);
      },
      limits);
  return sum;
}

double tree_weight_sum(const Network& net, const EnumerationLimits& limits) {
  return forest_weight_sum(net, {0}, limits);
}

}  // namespace forest
