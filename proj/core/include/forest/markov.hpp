#pragma once

#include <Eigen/Dense>

#include "forest/chain.hpp"
#include "forest/enumeration.hpp"
#include "forest/estimate.hpp"

namespace forest {

/// Antisymmetric matrix of net probability flow between state pairs.
struct FlowMatrix {
  Eigen::MatrixXd u;
};

/// Expected number of steps for the walk from `start` to first reach R,
/// written with orchard weights only. With Q = R + {start}:
///
///   tau_R = sum_{f in F_Q} sum_{k in B_f(start)} o[f, R + {k}]
///           / sum_{h in F_R} o[h, R]
///
/// Throws StartInR, EmptyRootSet, TooLarge.
double expected_hitting_time(const Chain& chain, NodeIndex start, const NodeSet& roots,
                             const EnumerationLimits& limits = {});

/// Probability that the walk from `start` stops at `target`: the orchard
/// weight of F_R members whose start block hangs from `target`, normalized.
/// Throws StartInR, BadNodeRole (target outside R), TooLarge.
double absorption_probability(const Chain& chain, NodeIndex start, const NodeSet& roots,
                              NodeIndex target, const EnumerationLimits& limits = {});
/// absorption_probability for every state (zero outside R) from one enumeration.
Eigen::VectorXd absorption_distribution(const Chain& chain, NodeIndex start,
                                        const NodeSet& roots,
                                        const EnumerationLimits& limits = {});
/// Fraction of sampled F_R members whose start block hangs from each root.
/// Forests are sampled by conductance, which orders F_R the same way as the
/// orchard weights. Returns an n x 1 report.
EstimateReport absorption_estimate(const Chain& chain, NodeIndex start,
                                   const NodeSet& roots, const EstimateOptions& options);

/// u_kl for the arborescence: for each directed edge k -> l, the probability
/// mass of the states whose path to the root runs through it; u_lk = -u_kl.
/// Throws NotArborescence, BadDistribution.
FlowMatrix flow_matrix(const Orchard& arborescence, const Eigen::VectorXd& p);

/// Limit of the expected net transition counts as the chain relaxes from p0:
/// the o(a)-weighted average of flow_matrix over every arborescence a.
/// Throws BadDistribution, TooLarge.
FlowMatrix equilibrium_flow(const Chain& chain, const Eigen::VectorXd& p0,
                            const EnumerationLimits& limits = {});

struct VisitCountReport {
  Eigen::VectorXd visits;         // e_k from the fundamental matrix
  Eigen::VectorXd voltages;       // v_k, unit injection at start, R grounded
  Eigen::VectorXd conductances;   // scaled g_k
  double max_rel_err = 0.0;       // max |e_k - v_k g_k| / max |e|
  bool holds = false;
};

/// Checks e_k = v_k g_k on the scaled network for the walk from `start`
/// stopped on R. Throws StartInR, EmptyRootSet.
VisitCountReport visit_count_identity_check(const Network& net, NodeIndex start,
                                            const NodeSet& roots, double tol = 1e-9);

}  // namespace forest
