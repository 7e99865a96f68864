#include "forest/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forest/error.hpp"

namespace forest {

namespace {

using Index = Eigen::Index;

Index ix(NodeIndex k) { return static_cast<Index>(k); }

NodeSet keys(const FixedVoltages& fixed) {
  NodeSet out;
  for (const auto& [k, volts] : fixed.assignments) out.push_back(k);
  return out;
}

/// Non-root nodes, deepest first: children always precede their parents.
std::vector<NodeIndex> leaves_first(const Forest& f) {
  std::vector<NodeIndex> order;
  for (NodeIndex m = 0; m < f.node_count(); ++m)
    if (!f.is_root(m)) order.push_back(m);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return f.depth(a) > f.depth(b); });
  return order;
}

CurrentMatrix route_through_tree(const Network& net, const Forest& rooted,
                                 const Eigen::VectorXd& J) {
  const auto n = ix(net.node_count());
  CurrentMatrix I{Eigen::MatrixXd::Zero(n, n),
                  std::vector<double>(net.branch_count(), 0.0)};
  Eigen::VectorXd below = J;  // net injection of each subtree
  for (NodeIndex m : leaves_first(rooted)) {
    const NodeIndex p = rooted.parent(m);
    const Branch& b = net.branch(*rooted.parent_branch(m));
    const double out = below(ix(m));
    I.branch[b.id] = m == b.u ? out : -out;
    I.node(ix(m), ix(p)) += out;
    I.node(ix(p), ix(m)) -= out;
    below(ix(p)) += out;
  }
  return I;
}

Eigen::VectorXd potentials_on_tree(const Network& net, const Forest& rooted,
                                   const CurrentMatrix& I,
                                   const Eigen::MatrixXd& pair_conductance) {
  const std::size_t n = net.node_count();
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return rooted.depth(a) < rooted.depth(b);
  });

  Eigen::VectorXd v = Eigen::VectorXd::Zero(ix(n));
  for (NodeIndex m : order) {
    if (rooted.is_root(m)) continue;
    const NodeIndex p = rooted.parent(m);
    const Branch& b = net.branch(*rooted.parent_branch(m));
    double drop;
    if (I.has_branch_currents()) {
      const double cur = m == b.u ? I.branch[b.id] : -I.branch[b.id];
      drop = cur / b.g;
    } else {
      drop = I.node(ix(m), ix(p)) / pair_conductance(ix(m), ix(p));
    }
    v(ix(m)) = v(ix(p)) + drop;
  }
  return v;
}

Eigen::VectorXd flatten(const CurrentMatrix& I) {
  const Index nn = I.node.size();
  Eigen::VectorXd out(nn + static_cast<Index>(I.branch.size()));
  out.head(nn) = Eigen::Map<const Eigen::VectorXd>(I.node.data(), nn);
  out.tail(static_cast<Index>(I.branch.size())) =
      Eigen::Map<const Eigen::VectorXd>(I.branch.data(), static_cast<Index>(I.branch.size()));
  return out;
}

EstimateReport slice(const EstimateReport& r, Index row) {
  return EstimateReport{r.value.block(row, 0, 1, r.value.cols()),
                        r.std_error.block(row, 0, 1, r.std_error.cols()), r.samples,
                        r.seed, r.workers};
}

void check_node(const Network& net, NodeIndex k, const char* role) {
  if (k >= net.node_count())
    fail(ErrorCode::UnknownNode, std::string(role) + " index " + std::to_string(k));
}

}  // namespace

// ---------------------------------------------------------------- VJ

double vj_exact(const Network& net, const FixedVoltages& fixed, NodeIndex target,
                const EnumerationLimits& limits) {
  validate(net, fixed);
  check_node(net, target, "target");
  if (fixed.assignments.size() < 2)
    fail(ErrorCode::QTooSmall, "VJ needs at least two fixed nodes");
  if (!fixed.assignments.contains(target))
    fail(ErrorCode::BadNodeRole, "target " + net.name(target) + " is not fixed");

  const double v_target = fixed.assignments.at(target);
  NodeSet rest = keys(fixed);
  std::erase(rest, target);

  double numerator = 0.0;
  for_each_separating_forest(
      net, rest,
      [&](std::span<const BranchId> branches) {
        const Forest h = Forest::build(net, {branches.begin(), branches.end()}, rest);
        const double v_root = fixed.assignments.at(h.block_of(target));
        numerator += (v_target - v_root) * conductance_product(net, branches);
      },
      limits);
  return numerator / forest_weight_sum(net, keys(fixed), limits);
}

Eigen::VectorXd vj_exact_all(const Network& net, const FixedVoltages& fixed,
                             const EnumerationLimits& limits) {
  Eigen::VectorXd J = Eigen::VectorXd::Zero(ix(net.node_count()));
  validate(net, fixed);
  for (const auto& [k, volts] : fixed.assignments) J(ix(k)) = vj_exact(net, fixed, k, limits);
  return J;
}

EstimateReport vj_estimate_all(const Network& net, const FixedVoltages& fixed,
                               const EstimateOptions& options) {
  validate(net, fixed);
  if (fixed.assignments.size() < 2)
    fail(ErrorCode::QTooSmall, "VJ needs at least two fixed nodes");
  const NodeSet q = keys(fixed);
  const double g_total = net.total_conductance();
  const auto n = ix(net.node_count());

  return run_estimate(options, [&]() -> Draw {
    return [&net, &fixed, g_total, n, forests = ForestSampler(net, q, options.max_walk_steps),
            branches = BranchSampler(net)](Rng& rng) mutable -> Eigen::MatrixXd {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, 1);
      const Forest f = forests.sample(rng);
      const Branch& b = net.branch(branches.sample(rng));
      const NodeIndex root_k = f.block_of(b.u);
      const NodeIndex root_l = f.block_of(b.v);
      if (root_k == root_l) return J;
      const double length = 1.0 + static_cast<double>(f.depth(b.u) + f.depth(b.v));
      const double flow = g_total *
                          (fixed.assignments.at(root_k) - fixed.assignments.at(root_l)) /
                          length;
      J(ix(root_k), 0) = flow;
      J(ix(root_l), 0) = -flow;
      return J;
    };
  });
}

EstimateReport vj_estimate(const Network& net, const FixedVoltages& fixed,
                           NodeIndex target, const EstimateOptions& options) {
  validate(net, fixed);
  check_node(net, target, "target");
  if (fixed.assignments.size() >= 2 && !fixed.assignments.contains(target))
    fail(ErrorCode::BadNodeRole, "target " + net.name(target) + " is not fixed");
  return slice(vj_estimate_all(net, fixed, options), ix(target));
}

// ---------------------------------------------------------------- VV

Eigen::VectorXd vv_exact_all(const Network& net, const FixedVoltages& fixed,
                             const EnumerationLimits& limits) {
  validate(net, fixed);
  const NodeSet r = keys(fixed);
  const auto n = ix(net.node_count());
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  for_each_separating_forest(
      net, r,
      [&](std::span<const BranchId> branches) {
        const Forest h = Forest::build(net, {branches.begin(), branches.end()}, r);
        const double w = conductance_product(net, branches);
        for (Index k = 0; k < n; ++k)
          weighted(k) += w * fixed.assignments.at(h.block_of(static_cast<NodeIndex>(k)));
        total += w;
      },
      limits);
  Eigen::VectorXd v = weighted / total;
  for (const auto& [k, volts] : fixed.assignments) v(ix(k)) = volts;
  return v;
}

double vv_exact(const Network& net, const FixedVoltages& fixed, NodeIndex target,
                const EnumerationLimits& limits) {
  validate(net, fixed);
  check_node(net, target, "target");
  if (fixed.assignments.contains(target))
    fail(ErrorCode::TargetIsRoot, "target " + net.name(target) + " is fixed");
  return vv_exact_all(net, fixed, limits)(ix(target));
}

EstimateReport vv_estimate_all(const Network& net, const FixedVoltages& fixed,
                               const EstimateOptions& options) {
  validate(net, fixed);
  const NodeSet r = keys(fixed);
  const auto n = ix(net.node_count());
  return run_estimate(options, [&]() -> Draw {
    return [&fixed, n, forests = ForestSampler(net, r, options.max_walk_steps)](
               Rng& rng) mutable -> Eigen::MatrixXd {
      const Forest h = forests.sample(rng);
      Eigen::MatrixXd v(n, 1);
      for (Index k = 0; k < n; ++k)
        v(k, 0) = fixed.assignments.at(h.block_of(static_cast<NodeIndex>(k)));
      return v;
    };
  });
}

EstimateReport vv_estimate(const Network& net, const FixedVoltages& fixed,
                           NodeIndex target, const EstimateOptions& options) {
  validate(net, fixed);
  check_node(net, target, "target");
  if (fixed.assignments.contains(target))
    fail(ErrorCode::TargetIsRoot, "target " + net.name(target) + " is fixed");
  return slice(vv_estimate_all(net, fixed, options), ix(target));
}

// ---------------------------------------------------------------- JI

CurrentMatrix tree_current_distribution(const Network& net, const Tree& tree,
                                        const InjectedCurrents& injected) {
  validate(net, injected);
  return route_through_tree(net, Forest::build(net, tree.branches, {0}), injected.J);
}

CurrentMatrix ji_exact(const Network& net, const InjectedCurrents& injected,
                       const EnumerationLimits& limits) {
  validate(net, injected);
  const auto n = ix(net.node_count());
  CurrentMatrix sum{Eigen::MatrixXd::Zero(n, n),
                    std::vector<double>(net.branch_count(), 0.0)};
  double total = 0.0;
  for_each_separating_forest(
      net, {0},
      [&](std::span<const BranchId> branches) {
        const Forest t = Forest::build(net, {branches.begin(), branches.end()}, {0});
        const double w = conductance_product(net, branches);
        const CurrentMatrix It = route_through_tree(net, t, injected.J);
        sum.node += w * It.node;
        for (std::size_t b = 0; b < It.branch.size(); ++b) sum.branch[b] += w * It.branch[b];
        total += w;
      },
      limits);
  sum.node /= total;
  for (double& i : sum.branch) i /= total;
  return sum;
}

CurrentEstimate ji_estimate(const Network& net, const InjectedCurrents& injected,
                            const EstimateOptions& options) {
  validate(net, injected);
  const auto n = ix(net.node_count());
  const auto m = static_cast<Index>(net.branch_count());
  const EstimateReport flat = run_estimate(options, [&]() -> Draw {
    return [&net, &injected, trees = SpanningTreeSampler(net, options.max_walk_steps)](
               Rng& rng) mutable -> Eigen::MatrixXd {
      const Forest t = Forest::build(net, trees.sample_branches(rng), {0});
      return flatten(route_through_tree(net, t, injected.J));
    };
  });

  auto unflatten = [&](const Eigen::MatrixXd& x) {
    return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n));
  };
  CurrentEstimate out;
  out.node = EstimateReport{unflatten(flat.value), unflatten(flat.std_error), flat.samples,
                            flat.seed, flat.workers};
  out.branch = EstimateReport{flat.value.bottomRows(m), flat.std_error.bottomRows(m),
                              flat.samples, flat.seed, flat.workers};
  return out;
}

// ---------------------------------------------------------------- IV

InjectedCurrents injection_of(const Network& net, const CurrentMatrix& currents) {
  const auto n = ix(net.node_count());
  if (currents.node.rows() != n || currents.node.cols() != n)
    fail(ErrorCode::InconsistentCurrentMatrix, "current matrix has the wrong shape");
  if (currents.has_branch_currents() && currents.branch.size() != net.branch_count())
    fail(ErrorCode::InconsistentCurrentMatrix, "branch current vector has the wrong length");
  InjectedCurrents J{currents.row_sums()};
  const double scale =
      std::max(J.J.cwiseAbs().maxCoeff(), currents.node.cwiseAbs().maxCoeff());
  if (!J.J.allFinite() || std::abs(J.J.sum()) > 1e-12 * scale)
    fail(ErrorCode::InconsistentCurrentMatrix,
         "row sums total " + std::to_string(J.J.sum()) + ", not zero");
  return J;
}

VoltageVector tree_voltage_vector(const Network& net, const Tree& tree,
                                  const CurrentMatrix& currents, NodeIndex ground) {
  check_node(net, ground, "ground");
  const Forest rooted = Forest::build(net, tree.branches, {ground});
  return VoltageVector{potentials_on_tree(net, rooted, currents, net.conductance_matrix()),
                       ground};
}

VoltageVector iv_exact(const Network& net, const CurrentMatrix& currents, NodeIndex ground,
                       const EnumerationLimits& limits) {
  check_node(net, ground, "ground");
  injection_of(net, currents);
  const Eigen::MatrixXd G = net.conductance_matrix();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ix(net.node_count()));
  double total = 0.0;
  for_each_separating_forest(
      net, {ground},
      [&](std::span<const BranchId> branches) {
        const Forest t = Forest::build(net, {branches.begin(), branches.end()}, {ground});
        const double w = conductance_product(net, branches);
        sum += w * potentials_on_tree(net, t, currents, G);
        total += w;
      },
      limits);
  return VoltageVector{sum / total, ground};
}

EstimateReport iv_estimate(const Network& net, const CurrentMatrix& currents,
                           NodeIndex ground, const EstimateOptions& options) {
  check_node(net, ground, "ground");
  injection_of(net, currents);
  const Eigen::MatrixXd G = net.conductance_matrix();
  return run_estimate(options, [&]() -> Draw {
    return [&net, &currents, &G, ground,
            trees = SpanningTreeSampler(net, options.max_walk_steps)](
               Rng& rng) mutable -> Eigen::MatrixXd {
      const Forest t = Forest::build(net, trees.sample_branches(rng), {ground});
      return potentials_on_tree(net, t, currents, G);
    };
  });
}

// ---------------------------------------------------------------- Kirchhoff

double equivalent_conductance(const Network& net, NodeIndex a, NodeIndex b,
                              const EnumerationLimits& limits) {
  check_node(net, a, "node");
  check_node(net, b, "node");
  if (a == b) fail(ErrorCode::SameNode, "conductance between a node and itself");
  return tree_weight_sum(net, limits) / forest_weight_sum(net, {a, b}, limits);
}

}  // namespace forest
