#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "forest/error.hpp"
#include "forest/linear_oracle.hpp"
#include "forest/markov.hpp"
#include "forest/theorems.hpp"
#include "oracles.hpp"

namespace forest {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SingularSystem;
}

TEST(HittingTime, Fixtures) {
  EXPECT_NEAR(expected_hitting_time(to_markov_chain(test::p3()), 0, {2}), 4.0, 1e-12);
  EXPECT_NEAR(expected_hitting_time(to_markov_chain(test::g2()), 0, {1}), 1.0, 1e-12);
  const Chain g3 = to_markov_chain(test::g3());
  EXPECT_NEAR(expected_hitting_time(g3, 2, {0, 1}), fundamental_hitting(g3, 2, {0, 1}).tau,
              1e-12);
}

TEST(HittingTime, Errors) {
  const Chain c = to_markov_chain(test::p3());
  EXPECT_EQ(code_of([&] { expected_hitting_time(c, 2, {2}); }), ErrorCode::StartInR);
  EXPECT_EQ(code_of([&] { expected_hitting_time(c, 0, {}); }), ErrorCode::EmptyRootSet);
  EXPECT_EQ(code_of([&] { expected_hitting_time(c, 9, {2}); }), ErrorCode::UnknownNode);
}

TEST(HittingTime, MatchesFundamentalMatrix) {
  std::mt19937_64 gen(89);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    const Chain c = to_markov_chain(net);
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, net.node_count() - 1);
    for (NodeIndex s = 0; s < net.node_count(); ++s) {
      if (std::binary_search(roots.begin(), roots.end(), s)) continue;
      const double tau = expected_hitting_time(c, s, roots);
      EXPECT_NEAR(tau, fundamental_hitting(c, s, roots).tau, 1e-9 * tau);
    }
  }
}

TEST(HittingTime, ConductanceFormEqualsOrchardForm) {
  // Before dividing by the product of g_k, the formula is a ratio of plain
  // conductance-weighted sums over F_Q and F_R.
  std::mt19937_64 gen(97);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    const Chain c = to_markov_chain(net);
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, net.node_count() - 1);
    NodeIndex s = 0;
    while (std::binary_search(roots.begin(), roots.end(), s)) ++s;
    NodeSet q = roots;
    q.insert(std::upper_bound(q.begin(), q.end(), s), s);

    const Network& scaled = c.network;
    double visits = 0.0;
    for (const auto& wf : enumerate_separating_forests(scaled, q))
      for (NodeIndex k : wf.forest.block(s)) visits += wf.weight * c.g(k);
    const double stopped = forest_weight_sum(scaled, roots);
    const double tau = expected_hitting_time(c, s, roots);
    EXPECT_NEAR(visits / stopped, tau, 1e-12 * tau);
  }
}

TEST(Absorption, Fixtures) {
  const Chain p3 = to_markov_chain(test::p3());
  EXPECT_NEAR(absorption_probability(p3, 1, {0, 2}, 2), 0.5, 1e-15);
  const Chain g3 = to_markov_chain(test::g3());
  EXPECT_NEAR(absorption_probability(g3, 2, {0, 1}, 0), 0.6, 1e-15);
  EXPECT_NEAR(absorption_probability(g3, 2, {0}, 0), 1.0, 1e-15);
  EXPECT_EQ(code_of([&] { absorption_probability(g3, 2, {0}, 1); }), ErrorCode::BadNodeRole);
}

TEST(Absorption, MatchesFundamentalMatrix) {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = test::random_network(gen, {.self_loops = true});
    const Chain c = to_markov_chain(net);
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, net.node_count() - 1);
    NodeIndex s = 0;
    while (std::binary_search(roots.begin(), roots.end(), s)) ++s;
    const Eigen::VectorXd p = absorption_distribution(c, s, roots);
    EXPECT_NEAR(p.sum(), 1.0, 1e-10);
    EXPECT_LE(test::rel_err(p, fundamental_hitting(c, s, roots).absorb), 1e-9);
  }
}

TEST(Absorption, EstimateWithinFourStandardErrors) {
  const Chain g3 = to_markov_chain(test::g3());
  const EstimateReport r = absorption_estimate(g3, 2, {0, 1}, {.samples = 200'000, .seed = 17});
  EXPECT_NEAR(r.value(0, 0), 0.6, 4 * r.std_error(0, 0));
  EXPECT_NEAR(r.value(1, 0), 0.4, 4 * r.std_error(1, 0));
  EXPECT_EQ(r.value(2, 0), 0.0);
  EXPECT_NEAR(r.value.sum(), 1.0, 1e-12);
}

TEST(FlowMatrix, P3Arborescence) {
  const Network p3 = test::p3();
  const Orchard a{Forest::build(p3, {0, 1}, {2})};
  FlowMatrix u = flow_matrix(a, Eigen::Vector3d(1, 0, 0));
  EXPECT_EQ(u.u(0, 1), 1.0);
  EXPECT_EQ(u.u(1, 2), 1.0);
  EXPECT_EQ(u.u(1, 0), -1.0);
  u = flow_matrix(a, Eigen::Vector3d(0, 1, 0));
  EXPECT_EQ(u.u(0, 1), 0.0);
  EXPECT_EQ(u.u(1, 2), 1.0);
  EXPECT_TRUE(flow_matrix(a, Eigen::Vector3d(0, 0, 1)).u.isZero());
}

TEST(FlowMatrix, Errors) {
  const Network p3 = test::p3();
  const Orchard two{Forest::build(p3, {0}, {1, 2})};
  EXPECT_EQ(code_of([&] { flow_matrix(two, Eigen::Vector3d(1, 0, 0)); }),
            ErrorCode::NotArborescence);
  const Orchard a{Forest::build(p3, {0, 1}, {2})};
  EXPECT_EQ(code_of([&] { flow_matrix(a, Eigen::Vector3d(0.5, 0, 0)); }),
            ErrorCode::BadDistribution);
  EXPECT_EQ(code_of([&] { flow_matrix(a, Eigen::Vector3d(1.5, -0.5, 0)); }),
            ErrorCode::BadDistribution);
  EXPECT_EQ(code_of([&] { flow_matrix(a, Eigen::Vector2d(1, 0)); }), ErrorCode::BadDistribution);
}

TEST(EquilibriumFlow, TwoState) {
  const Chain c = to_markov_chain(test::two_state());
  const FlowMatrix I = equilibrium_flow(c, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(I.u(0, 1), 0.45, 1e-12);
  EXPECT_NEAR(I.u(1, 0), -0.45, 1e-12);
  const Eigen::MatrixXd sim = test::transient_flow(c.P, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(sim(0, 1), 0.45, 1e-12);
}

TEST(EquilibriumFlow, StationaryStartHasNoFlow) {
  const Chain c = to_markov_chain(test::g3());
  EXPECT_LE(equilibrium_flow(c, c.pi).u.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EquilibriumFlow, MatchesElectricalCurrentsAndTransientSums) {
  std::mt19937_64 gen(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = test::random_network(gen, {.max_nodes = 6, .self_loops = true});
    const Chain c = to_markov_chain(net);
    Eigen::VectorXd p0(static_cast<Eigen::Index>(net.node_count()));
    for (Eigen::Index k = 0; k < p0.size(); ++k) p0(k) = test::uniform(gen, 0, 1);
    p0 /= p0.sum();
    const FlowMatrix I = equilibrium_flow(c, p0);
    EXPECT_EQ(I.u, -I.u.transpose());
    EXPECT_LE((I.u.rowwise().sum() - (p0 - c.pi)).cwiseAbs().maxCoeff(), 1e-9);
    const Eigen::MatrixXd ref = ji_exact(c.network, InjectedCurrents{p0 - c.pi}).node;
    EXPECT_LE(test::rel_err(I.u, ref), 1e-9);
  }
}

TEST(VisitCount, P3) {
  const VisitCountReport r = visit_count_identity_check(test::p3(), 0, {2});
  EXPECT_NEAR(r.visits(0), 2.0, 1e-12);
  EXPECT_NEAR(r.visits(1), 2.0, 1e-12);
  EXPECT_NEAR(r.voltages(0), 8.0, 1e-12);
  EXPECT_NEAR(r.voltages(1), 4.0, 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(code_of([] { visit_count_identity_check(test::p3(), 2, {2}); }), ErrorCode::StartInR);
}

TEST(VisitCount, RandomFixtures) {
  std::mt19937_64 gen(107);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = test::random_network(gen, {.max_nodes = 10, .self_loops = true});
    const NodeSet roots = test::random_subset(gen, net.node_count(), 1, net.node_count() - 1);
    NodeIndex s = 0;
    while (std::binary_search(roots.begin(), roots.end(), s)) ++s;
    const VisitCountReport r = visit_count_identity_check(net, s, roots);
    EXPECT_TRUE(r.holds) << r.max_rel_err;
  }
}

}  // namespace
}  // namespace forest
