#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "forest/chain.hpp"
#include "forest/enumeration.hpp"
#include "forest/error.hpp"
#include "oracles.hpp"

namespace forest {
namespace {

std::vector<std::vector<BranchId>> listed(const Network& net, const NodeSet& roots) {
  std::vector<std::vector<BranchId>> out;
  for_each_separating_forest(net, roots, [&](std::span<const BranchId> f) {
    out.emplace_back(f.begin(), f.end());
  });
  return out;
}

TEST(Enumeration, G3SpanningTrees) {
  const auto trees = enumerate_spanning_trees(test::g3());
  ASSERT_EQ(trees.size(), 3u);
  EXPECT_EQ(trees[0].tree.branches, (std::vector<BranchId>{0, 1}));
  EXPECT_EQ(trees[1].tree.branches, (std::vector<BranchId>{0, 2}));
  EXPECT_EQ(trees[2].tree.branches, (std::vector<BranchId>{1, 2}));
  EXPECT_EQ(trees[0].weight, 2.0);
  EXPECT_EQ(trees[1].weight, 3.0);
  EXPECT_EQ(trees[2].weight, 6.0);
  EXPECT_EQ(tree_weight_sum(test::g3()), 11.0);
}

TEST(Enumeration, G3SeparatingForests) {
  const Network g3 = test::g3();
  const auto forests = enumerate_separating_forests(g3, {0, 1});
  ASSERT_EQ(forests.size(), 2u);
  EXPECT_EQ(forests[0].forest.branches(), (std::vector<BranchId>{1}));
  EXPECT_EQ(forests[0].forest.block_of(2), 1u);
  EXPECT_EQ(forests[1].forest.block_of(2), 0u);
  EXPECT_EQ(forest_weight_sum(g3, {0, 1}), 5.0);

  const auto everything = enumerate_separating_forests(g3, {0, 1, 2});
  ASSERT_EQ(everything.size(), 1u);
  EXPECT_TRUE(everything[0].forest.branches().empty());
  EXPECT_EQ(everything[0].weight, 1.0);
}

TEST(Enumeration, G2HasOneTree) {
  const auto trees = enumerate_spanning_trees(test::g2());
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].weight, 2.0);
}

TEST(Enumeration, ParallelBranchesAreDistinctTrees) {
  const Network net =
      Network::build({"a", "b", "c"}, {{"a", "b", 1}, {"a", "b", 2}, {"b", "c", 3}, {"c", "c", 5}});
  const auto trees = enumerate_spanning_trees(net);
  ASSERT_EQ(trees.size(), 2u);
  EXPECT_EQ(trees[0].tree.branches, (std::vector<BranchId>{0, 2}));
  EXPECT_EQ(trees[1].tree.branches, (std::vector<BranchId>{1, 2}));
  EXPECT_EQ(tree_weight_sum(net), 9.0);
}

TEST(Enumeration, MatchesBruteForceOnRandomMultigraphs) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 150; ++trial) {
    const Network net = test::random_network(gen, {.max_nodes = 6, .self_loops = true});
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, net.node_count());
    EXPECT_EQ(listed(net, roots), test::brute_force_forests(net, roots)) << "trial " << trial;
  }
}

TEST(Enumeration, RootOrderDoesNotMatter) {
  const Network g3 = test::g3();
  EXPECT_EQ(listed(g3, {1, 0}), listed(g3, {0, 1, 1}));
}

TEST(Enumeration, LimitAndErrors) {
  const Network g3 = test::g3();
  try {
    enumerate_spanning_trees(g3, EnumerationLimits{2});
    ADD_FAILURE() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  EXPECT_NO_THROW(enumerate_spanning_trees(g3, EnumerationLimits{3}));
  EXPECT_THROW(forest_weight_sum(g3, {}), Error);
  EXPECT_THROW(forest_weight_sum(g3, {3}), Error);
}

TEST(Enumeration, WeightSumShrinksAsRootsGrow) {
  for (const Network& net : {test::g3(), test::p3(), test::g2()}) {
    double previous = tree_weight_sum(net);
    NodeSet roots{0};
    for (NodeIndex k = 1; k < net.node_count(); ++k) {
      roots.push_back(k);
      const double w = forest_weight_sum(net, roots);
      EXPECT_LE(w, previous);
      previous = w;
    }
  }
}

TEST(Forest, PathsAndBlocks) {
  const Network p3 = test::p3();
  const Forest f = Forest::build(p3, {1, 0}, {2});
  EXPECT_EQ(f.branches(), (std::vector<BranchId>{0, 1}));
  EXPECT_TRUE(f.is_root(2));
  EXPECT_EQ(f.depth(0), 2u);
  EXPECT_EQ(f.depth(2), 0u);
  EXPECT_EQ(f.parent(0), 1u);
  EXPECT_EQ(f.parent(2), 2u);
  EXPECT_EQ(f.path_to_root(0), (std::vector<BranchId>{0, 1}));
  EXPECT_TRUE(f.path_to_root(2).empty());
  EXPECT_EQ(f.block(2), (std::vector<NodeIndex>{0, 1, 2}));
  EXPECT_EQ(f.parent_branch(1), std::optional<BranchId>{1});
  EXPECT_FALSE(f.parent_branch(2).has_value());

  const Orchard o{f};
  const auto edges = o.edges();
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0].from, 0u);
  EXPECT_EQ(edges[0].to, 1u);
  EXPECT_EQ(edges[1].from, 1u);
  EXPECT_EQ(edges[1].to, 2u);
}

TEST(Forest, RejectsNonMembers) {
  const Network g3 = test::g3();
  const Network looped = Network::build({"a", "b"}, {{"a", "b", 1}, {"a", "a", 1}});
  const auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::SingularSystem;
  };
  EXPECT_EQ(code([&] { Forest::build(g3, {0, 1, 2}, {0}); }), ErrorCode::InvalidForest);
  EXPECT_EQ(code([&] { Forest::build(g3, {0}, {0}); }), ErrorCode::InvalidForest);
  EXPECT_EQ(code([&] { Forest::build(g3, {0, 0}, {0}); }), ErrorCode::InvalidForest);
  EXPECT_EQ(code([&] { Forest::build(g3, {0}, {0, 1}); }), ErrorCode::InvalidForest);
  EXPECT_EQ(code([&] { Forest::build(looped, {1}, {0}); }), ErrorCode::InvalidForest);
  EXPECT_EQ(code([&] { Forest::build(g3, {}, {}); }), ErrorCode::EmptyRootSet);
}

TEST(Forest, PathsEndAtBlockRootOnRandomNets) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, 3);
    for (const auto& wf : enumerate_separating_forests(net, roots)) {
      const Forest& f = wf.forest;
      for (NodeIndex m = 0; m < net.node_count(); ++m) {
        NodeIndex at = m;
        for (BranchId b : f.path_to_root(m)) at = net.branch(b).other(at);
        EXPECT_EQ(at, f.block_of(m));
        EXPECT_LE(f.depth(m), net.node_count() - roots.size());
      }
    }
  }
}

TEST(Orchard, WeightIdentity) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    const Chain chain = to_markov_chain(net);
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, 3);
    for (const auto& wo : enumerate_orchards(chain, roots)) {
      double lhs = wo.weight;
      for (NodeIndex k = 0; k < net.node_count(); ++k)
        if (!wo.orchard.forest.is_root(k)) lhs *= chain.g(k);
      const double rhs = conductance_product(chain.network, wo.orchard.forest.branches());
      EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
    }
  }
}

TEST(Enumeration, GreedyTreeIsFirstInOrder) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    EXPECT_EQ(greedy_spanning_tree(net).branches, enumerate_spanning_trees(net)[0].tree.branches);
  }
}

}  // namespace
}  // namespace forest
