#include "forest/markov.hpp"

#include <algorithm>
#include <cmath>

#include "forest/error.hpp"
#include "forest/linear_oracle.hpp"

namespace forest {

namespace {

using Index = Eigen::Index;

Index ix(NodeIndex k) { return static_cast<Index>(k); }

/// Normalized R with the walk's start outside it.
NodeSet walk_roots(const Network& net, NodeIndex start, const NodeSet& roots) {
  if (start >= net.node_count())
    fail(ErrorCode::UnknownNode, "start index " + std::to_string(start));
  if (roots.empty()) fail(ErrorCode::EmptyRootSet, "stopping set is empty");
  NodeSet r = normalize_node_set(net, roots);
  if (std::binary_search(r.begin(), r.end(), start))
    fail(ErrorCode::StartInR, "start state " + net.name(start) + " is in the stopping set");
  return r;
}

NodeSet with(NodeSet set, NodeIndex k) {
  set.insert(std::upper_bound(set.begin(), set.end(), k), k);
  return set;
}

void check_distribution(const Eigen::VectorXd& p, std::size_t n) {
  if (static_cast<std::size_t>(p.size()) != n)
    fail(ErrorCode::BadDistribution, "distribution has " + std::to_string(p.size()) +
                                         " entries, expected " + std::to_string(n));
  if (!p.allFinite() || (p.array() < 0.0).any())
    fail(ErrorCode::BadDistribution, "negative or non-finite probability");
  if (std::abs(p.sum() - 1.0) > 1e-10)
    fail(ErrorCode::BadDistribution, "probabilities sum to " + std::to_string(p.sum()));
}

}  // namespace

double expected_hitting_time(const Chain& chain, NodeIndex start, const NodeSet& roots,
                             const EnumerationLimits& limits) {
  const Network& net = chain.network;
  const NodeSet r = walk_roots(net, start, roots);
  const NodeSet q = with(r, start);

  double stopped = 0.0;
  for_each_separating_forest(
      net, r,
      [&](std::span<const BranchId> branches) {
        stopped += orchard_weight(chain, Forest::build(net, {branches.begin(), branches.end()}, r));
      },
      limits);

  // Each F_Q member contributes once per state of the start block, with that
  // block re-rooted at the state.
  double visits = 0.0;
  for_each_separating_forest(
      net, q,
      [&](std::span<const BranchId> branches) {
        const std::vector<BranchId> f(branches.begin(), branches.end());
        const Forest by_q = Forest::build(net, f, q);
        for (NodeIndex k : by_q.block(start))
          visits += orchard_weight(chain, Forest::build(net, f, with(r, k)));
      },
      limits);
  return visits / stopped;
}

Eigen::VectorXd absorption_distribution(const Chain& chain, NodeIndex start,
                                        const NodeSet& roots,
                                        const EnumerationLimits& limits) {
  const Network& net = chain.network;
  const NodeSet r = walk_roots(net, start, roots);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(ix(net.node_count()));
  for_each_separating_forest(
      net, r,
      [&](std::span<const BranchId> branches) {
        const Forest h = Forest::build(net, {branches.begin(), branches.end()}, r);
        mass(ix(h.block_of(start))) += orchard_weight(chain, h);
      },
      limits);
  return mass / mass.sum();
}

double absorption_probability(const Chain& chain, NodeIndex start, const NodeSet& roots,
                              NodeIndex target, const EnumerationLimits& limits) {
  const NodeSet r = walk_roots(chain.network, start, roots);
  if (!std::binary_search(r.begin(), r.end(), target))
    fail(ErrorCode::BadNodeRole, "target is not in the stopping set");
  return absorption_distribution(chain, start, r, limits)(ix(target));
}

EstimateReport absorption_estimate(const Chain& chain, NodeIndex start,
                                   const NodeSet& roots, const EstimateOptions& options) {
  const NodeSet r = walk_roots(chain.network, start, roots);
  const auto n = ix(chain.state_count());
  return run_estimate(options, [&]() -> Draw {
    return [start, n, forests = ForestSampler(chain.network, r, options.max_walk_steps)](
               Rng& rng) mutable -> Eigen::MatrixXd {
      Eigen::MatrixXd hit = Eigen::MatrixXd::Zero(n, 1);
      hit(ix(forests.sample(rng).block_of(start)), 0) = 1.0;
      return hit;
    };
  });
}

FlowMatrix flow_matrix(const Orchard& arborescence, const Eigen::VectorXd& p) {
  const Forest& a = arborescence.forest;
  if (a.roots().size() != 1)
    fail(ErrorCode::NotArborescence,
         "orchard has " + std::to_string(a.roots().size()) + " roots");
  check_distribution(p, a.node_count());

  std::vector<NodeIndex> order;
  for (NodeIndex m = 0; m < a.node_count(); ++m)
    if (!a.is_root(m)) order.push_back(m);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex x, NodeIndex y) { return a.depth(x) > a.depth(y); });

  const auto n = ix(a.node_count());
  FlowMatrix flow{Eigen::MatrixXd::Zero(n, n)};
  Eigen::VectorXd upstream = p;
  for (NodeIndex m : order) {
    const NodeIndex next = a.parent(m);
    flow.u(ix(m), ix(next)) = upstream(ix(m));
    flow.u(ix(next), ix(m)) = -upstream(ix(m));
    upstream(ix(next)) += upstream(ix(m));
  }
  return flow;
}

FlowMatrix equilibrium_flow(const Chain& chain, const Eigen::VectorXd& p0,
                            const EnumerationLimits& limits) {
  const Network& net = chain.network;
  check_distribution(p0, net.node_count());
  const auto n = ix(net.node_count());

  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  for (NodeIndex root = 0; root < net.node_count(); ++root) {
    for_each_separating_forest(
        net, {root},
        [&](std::span<const BranchId> branches) {
          Orchard a{Forest::build(net, {branches.begin(), branches.end()}, {root})};
          const double o = orchard_weight(chain, a.forest);
          weighted += o * flow_matrix(a, p0).u;
          total += o;
        },
        limits);
  }
  return FlowMatrix{weighted / total};
}

VisitCountReport visit_count_identity_check(const Network& net, NodeIndex start,
                                            const NodeSet& roots, double tol) {
  const NodeSet r = walk_roots(net, start, roots);
  const Chain chain = to_markov_chain(net);

  VisitCountReport report;
  report.visits = expected_visits(chain, start, r);
  report.conductances = chain.pi;

  FixedVoltages grounded;
  for (NodeIndex k : r) grounded.assignments[k] = 0.0;
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(ix(net.node_count()));
  unit(ix(start)) = 1.0;
  report.voltages = solve_mixed(chain.network, grounded, unit).v;

  const Eigen::VectorXd predicted = report.voltages.cwiseProduct(report.conductances);
  const double scale = report.visits.cwiseAbs().maxCoeff();
  report.max_rel_err = (report.visits - predicted).cwiseAbs().maxCoeff() / scale;
  report.holds = report.max_rel_err <= tol;
  return report;
}

}  // namespace forest
