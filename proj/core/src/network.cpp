#include "forest/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "forest/error.hpp"

namespace forest {

namespace {

bool connected_ignoring_loops(std::size_t n, std::span<const Branch> branches) {
  if (n <= 1) return true;
  std::vector<NodeIndex> parent(n);
  std::iota(parent.begin(), parent.end(), NodeIndex{0});
  auto find = [&](NodeIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const Branch& b : branches) {
    if (b.is_self_loop()) continue;
    NodeIndex a = find(b.u), c = find(b.v);
    if (a != c) {
      parent[a] = c;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Network Network::build(std::vector<std::string> nodes,
                       const std::vector<BranchSpec>& branches) {
  Network net;
  std::unordered_map<std::string, NodeIndex> lookup;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!lookup.emplace(nodes[k], k).second)
      fail(ErrorCode::DuplicateNode, "node '" + nodes[k] + "' declared twice");
  }
  net.names_ = std::move(nodes);
  if (net.names_.empty()) fail(ErrorCode::Disconnected, "network has no nodes");

  net.branches_.reserve(branches.size());
  for (const BranchSpec& spec : branches) {
    auto u = lookup.find(spec.u);
    auto v = lookup.find(spec.v);
    if (u == lookup.end() || v == lookup.end()) {
      const std::string& missing = u == lookup.end() ? spec.u : spec.v;
      fail(ErrorCode::UnknownEndpoint,
           "branch " + std::to_string(net.branches_.size()) +
               " references undeclared node '" + missing + "'");
    }
    if (!(spec.g > 0.0) || !std::isfinite(spec.g))
      fail(ErrorCode::NonPositiveConductance,
           "branch " + std::to_string(net.branches_.size()) +
               " has conductance " + std::to_string(spec.g));
    net.branches_.push_back(
        Branch{u->second, v->second, spec.g, net.branches_.size()});
  }
  if (!connected_ignoring_loops(net.names_.size(), net.branches_))
    fail(ErrorCode::Disconnected, "network is not connected");
  net.index();
  return net;
}

void Network::index() {
  incident_.assign(names_.size(), {});
  node_g_.assign(names_.size(), 0.0);
  total_g_ = 0.0;
  for (const Branch& b : branches_) {
    incident_[b.u].push_back(b.id);
    node_g_[b.u] += b.g;
    if (!b.is_self_loop()) {
      incident_[b.v].push_back(b.id);
      node_g_[b.v] += b.g;
    }
    total_g_ += b.g;
  }
}

std::optional<NodeIndex> Network::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - names_.begin());
}

NodeIndex Network::index_of(std::string_view name) const {
  if (auto k = find(name)) return *k;
  fail(ErrorCode::UnknownNode, "no node named '" + std::string(name) + "'");
}

double Network::total_conductance_at(NodeIndex k) const {
  if (k >= node_g_.size())
    fail(ErrorCode::UnknownNode, "node index " + std::to_string(k));
  return node_g_[k];
}

Eigen::MatrixXd Network::laplacian() const {
  const auto n = static_cast<Eigen::Index>(node_count());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Branch& b : branches_) {
    if (b.is_self_loop()) continue;
    const auto u = static_cast<Eigen::Index>(b.u);
    const auto v = static_cast<Eigen::Index>(b.v);
    L(u, u) += b.g;
    L(v, v) += b.g;
    L(u, v) -= b.g;
    L(v, u) -= b.g;
  }
  return L;
}

Eigen::MatrixXd Network::conductance_matrix() const {
  const auto n = static_cast<Eigen::Index>(node_count());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (const Branch& b : branches_) {
    const auto u = static_cast<Eigen::Index>(b.u);
    const auto v = static_cast<Eigen::Index>(b.v);
    G(u, v) += b.g;
    if (u != v) G(v, u) += b.g;
  }
  return G;
}

Network Network::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    fail(ErrorCode::NonPositiveConductance, "scale factor must be positive");
  Network out = *this;
  for (Branch& b : out.branches_) b.g *= factor;
  out.index();
  return out;
}

void validate(const Network& net, const FixedVoltages& fixed) {
  if (fixed.assignments.empty())
    fail(ErrorCode::InvalidBoundary, "no fixed voltages given");
  for (const auto& [k, volts] : fixed.assignments) {
    if (k >= net.node_count())
      fail(ErrorCode::InvalidBoundary, "fixed node index " + std::to_string(k));
    if (!std::isfinite(volts))
      fail(ErrorCode::InvalidBoundary, "non-finite voltage at " + net.name(k));
  }
}

void validate(const Network& net, const InjectedCurrents& injected) {
  const Eigen::VectorXd& J = injected.J;
  if (static_cast<std::size_t>(J.size()) != net.node_count())
    fail(ErrorCode::InvalidInjection,
         "expected " + std::to_string(net.node_count()) + " components, got " +
             std::to_string(J.size()));
  if (!J.allFinite()) fail(ErrorCode::InvalidInjection, "non-finite component");
  const double scale = J.size() ? J.cwiseAbs().maxCoeff() : 0.0;
  const double sum = J.sum();
  if (std::abs(sum) > 1e-12 * scale)
    fail(ErrorCode::InvalidInjection,
         "injected currents sum to " + std::to_string(sum));
}

NodeSet normalize_node_set(const Network& net, NodeSet nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (!nodes.empty() && nodes.back() >= net.node_count())
    fail(ErrorCode::UnknownNode, "node index " + std::to_string(nodes.back()));
  return nodes;
}

ContractionMap contract(const Network& net, const NodeSet& fuse_set) {
  if (fuse_set.empty()) fail(ErrorCode::EmptyFuseSet, "nothing to fuse");
  NodeSet fused = normalize_node_set(net, fuse_set);

  std::vector<bool> in_fused(net.node_count(), false);
  for (NodeIndex k : fused) in_fused[k] = true;

  // Supernode name: fused names joined by '+', primed until unique.
  std::string super_name;
  for (NodeIndex k : fused) {
    if (!super_name.empty()) super_name += '+';
    super_name += net.name(k);
  }
  super_name = "[" + super_name + "]";
  while (net.find(super_name)) super_name += '\'';

  std::vector<NodeIndex> node_map(net.node_count(), ContractionMap::kSupernode);
  std::vector<std::string> child_nodes{super_name};
  for (NodeIndex k = 0; k < net.node_count(); ++k) {
    if (in_fused[k]) continue;
    node_map[k] = child_nodes.size();
    child_nodes.push_back(net.name(k));
  }

  std::vector<BranchSpec> child_branches;
  std::vector<std::optional<BranchId>> branch_map(net.branch_count());
  std::vector<BranchId> dropped;
  std::vector<BranchId> parent_branch;
  for (const Branch& b : net.branches()) {
    if (in_fused[b.u] && in_fused[b.v]) {
      dropped.push_back(b.id);
      continue;
    }
    branch_map[b.id] = child_branches.size();
    parent_branch.push_back(b.id);
    child_branches.push_back(
        BranchSpec{child_nodes[node_map[b.u]], child_nodes[node_map[b.v]], b.g});
  }
  return ContractionMap{Network::build(std::move(child_nodes), child_branches),
                        std::move(node_map),
                        std::move(branch_map),
                        std::move(dropped),
                        std::move(parent_branch),
                        std::move(fused)};
}

}  // namespace forest
