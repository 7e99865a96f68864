#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace forest {

using NodeIndex = std::size_t;
using BranchId = std::size_t;
using NodeSet = std::vector<NodeIndex>;

/// A branch as written by the user: endpoints by name.
struct BranchSpec {
  std::string u;
  std::string v;
  double g = 0.0;
};

struct Branch {
  NodeIndex u = 0;
  NodeIndex v = 0;
  double g = 0.0;
  BranchId id = 0;

  bool is_self_loop() const noexcept { return u == v; }

  /// The endpoint across the branch from `from`. For a self-loop this is `from`.
  NodeIndex other(NodeIndex from) const noexcept { return from == u ? v : u; }
};

/// Weighted undirected multigraph of conductances.
///
/// Node indices follow declaration order and are the canonical order of every
/// vector and matrix in the library. Parallel branches and self-loops are kept
/// as distinct branches. A self-loop contributes its conductance once to the
/// total conductance of its node and is electrically inert.
///
/// Immutable after construction.
class Network {
 public:
  /// Validates and builds. Throws DuplicateNode, UnknownEndpoint,
  /// NonPositiveConductance or Disconnected.
  static Network build(std::vector<std::string> nodes,
                       const std::vector<BranchSpec>& branches);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t branch_count() const noexcept { return branches_.size(); }

  const std::vector<std::string>& node_names() const noexcept { return names_; }
  const std::string& name(NodeIndex k) const { return names_.at(k); }
  std::span<const Branch> branches() const noexcept { return branches_; }
  const Branch& branch(BranchId id) const { return branches_.at(id); }

  /// Branches touching `k`; a self-loop is listed once.
  std::span<const BranchId> incident(NodeIndex k) const { return incident_.at(k); }

  std::optional<NodeIndex> find(std::string_view name) const;
  /// Throws UnknownNode.
  NodeIndex index_of(std::string_view name) const;

  /// g_k: sum of incident conductances, self-loops counted once.
  double total_conductance_at(NodeIndex k) const;
  /// Sum of every branch conductance, self-loops included.
  double total_conductance() const noexcept { return total_g_; }

  /// Weighted Laplacian; self-loops do not appear.
  Eigen::MatrixXd laplacian() const;
  /// Node-pair conductances summed over parallel branches; self-loops on the
  /// diagonal.
  Eigen::MatrixXd conductance_matrix() const;

  /// Copy with every conductance multiplied by `factor` (> 0).
  Network scaled(double factor) const;

 private:
  Network() = default;
  void index();

  std::vector<std::string> names_;
  std::vector<Branch> branches_;
  std::vector<std::vector<BranchId>> incident_;
  std::vector<double> node_g_;
  double total_g_ = 0.0;
};

/// Voltages pinned externally. At least one assignment.
struct FixedVoltages {
  std::map<NodeIndex, double> assignments;
};

/// Externally injected current per node; components sum to zero.
struct InjectedCurrents {
  Eigen::VectorXd J;
};

/// Throws InvalidBoundary for an empty assignment set or an index outside the
/// network.
void validate(const Network& net, const FixedVoltages& fixed);
/// Throws InvalidInjection unless the vector has one entry per node and sums
/// to zero within 1e-12 * max|J_k|.
void validate(const Network& net, const InjectedCurrents& injected);

/// Result of fusing a node set into one supernode.
///
/// The supernode is child node 0; the remaining nodes follow in parent order.
/// Branches with both endpoints in the fused set are dropped, all others
/// survive with their conductance and keep parent branch order.
struct ContractionMap {
  Network child;
  std::vector<NodeIndex> node_map;                 // parent node -> child node
  std::vector<std::optional<BranchId>> branch_map; // parent branch -> child branch
  std::vector<BranchId> dropped;                   // sorted parent branch ids
  std::vector<BranchId> parent_branch;             // child branch -> parent branch
  NodeSet fused;                                   // sorted parent nodes

  static constexpr NodeIndex kSupernode = 0;
};

/// Throws EmptyFuseSet or UnknownNode.
ContractionMap contract(const Network& net, const NodeSet& fuse_set);

/// Sorted, de-duplicated copy; throws UnknownNode for indices out of range.
NodeSet normalize_node_set(const Network& net, NodeSet nodes);

}  // namespace forest
