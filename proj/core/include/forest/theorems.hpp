#pragma once

#include <Eigen/Dense>

#include "forest/enumeration.hpp"
#include "forest/estimate.hpp"
#include "forest/linear_oracle.hpp"
#include "forest/network.hpp"

namespace forest {

// Exact engines enumerate trees or separating forests and form the
// conductance-weighted averages; estimate engines replace the enumeration by
// sampling and report the plain sample mean with its standard error.
//
// Node roles: `fixed` pins the voltages of a node set Q (or R). Injected
// currents are per node and must sum to zero.

// ---------------------------------------------------------------- VJ

/// Current injected at `target` when exactly the nodes of Q are held at
/// `fixed`. With R = Q - {target}:
///   J_target = sum_{h in F_R} (v_target - v_h(target)) h / sum_{f in F_Q} f
/// Throws QTooSmall (|Q| < 2), BadNodeRole (target outside Q), TooLarge.
double vj_exact(const Network& net, const FixedVoltages& fixed, NodeIndex target,
                const EnumerationLimits& limits = {});
/// vj_exact for every node of Q; zero elsewhere.
Eigen::VectorXd vj_exact_all(const Network& net, const FixedVoltages& fixed,
                             const EnumerationLimits& limits = {});

/// Mean of the random injection vector J(f, kl) for f drawn from F_Q and a
/// branch kl drawn in proportion to its conductance. When the two endpoints
/// lie in different blocks of f, the block roots receive
/// +-g (v_f(k) - v_f(l)) / (1 + d_f(k) + d_f(l)), g being the total
/// conductance; otherwise (self-loops included) the draw is zero.
/// Returns an n x 1 report.
EstimateReport vj_estimate_all(const Network& net, const FixedVoltages& fixed,
                               const EstimateOptions& options);
EstimateReport vj_estimate(const Network& net, const FixedVoltages& fixed,
                           NodeIndex target, const EstimateOptions& options);

// ---------------------------------------------------------------- VV

/// Voltage of a free node: the F_R-weighted average of the voltage of the
/// root its block hangs from. Throws TargetIsRoot, EmptyRootSet, TooLarge.
double vv_exact(const Network& net, const FixedVoltages& fixed, NodeIndex target,
                const EnumerationLimits& limits = {});
/// Every node's voltage from one enumeration of F_R; fixed nodes as given.
Eigen::VectorXd vv_exact_all(const Network& net, const FixedVoltages& fixed,
                             const EnumerationLimits& limits = {});

EstimateReport vv_estimate_all(const Network& net, const FixedVoltages& fixed,
                               const EstimateOptions& options);
EstimateReport vv_estimate(const Network& net, const FixedVoltages& fixed,
                           NodeIndex target, const EstimateOptions& options);

// ---------------------------------------------------------------- JI

/// The flow routing J through the tree alone: each tree branch carries the net
/// injection of the side it separates. Zero on every other branch.
CurrentMatrix tree_current_distribution(const Network& net, const Tree& tree,
                                        const InjectedCurrents& injected);

/// Tree-weighted average of tree_current_distribution.
CurrentMatrix ji_exact(const Network& net, const InjectedCurrents& injected,
                       const EnumerationLimits& limits = {});

struct CurrentEstimate {
  EstimateReport node;    // n x n, node-aggregated
  EstimateReport branch;  // m x 1, signed u -> v
};

CurrentEstimate ji_estimate(const Network& net, const InjectedCurrents& injected,
                            const EstimateOptions& options);

// ---------------------------------------------------------------- IV

/// Potentials obtained by summing branch voltage drops i/g along the tree path
/// from each node to `ground`, each branch taken in the direction walked.
///
/// Per-branch currents are used when `currents` carries them; otherwise the
/// node-aggregated current between two nodes is divided by the summed
/// conductance of all branches joining them.
VoltageVector tree_voltage_vector(const Network& net, const Tree& tree,
                                  const CurrentMatrix& currents, NodeIndex ground);

/// Tree-weighted average of tree_voltage_vector. `currents` may be any matrix
/// whose row sums form a valid injection; throws InconsistentCurrentMatrix
/// otherwise.
VoltageVector iv_exact(const Network& net, const CurrentMatrix& currents,
                       NodeIndex ground, const EnumerationLimits& limits = {});
EstimateReport iv_estimate(const Network& net, const CurrentMatrix& currents,
                           NodeIndex ground, const EstimateOptions& options);

/// Throws InconsistentCurrentMatrix when the row sums of `currents` do not
/// total zero.
InjectedCurrents injection_of(const Network& net, const CurrentMatrix& currents);

// ---------------------------------------------------------------- Kirchhoff

/// (sum over spanning trees) / (sum over forests separating a and b).
double equivalent_conductance(const Network& net, NodeIndex a, NodeIndex b,
                              const EnumerationLimits& limits = {});

}  // namespace forest
