#include "forest/linear_oracle.hpp"

#include <limits>

#include "forest/error.hpp"

namespace forest {

namespace {

using Index = Eigen::Index;

Eigen::VectorXd lu_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const char* what) {
  if (A.rows() == 0) return Eigen::VectorXd(0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon()))
    fail(ErrorCode::SingularSystem, what);
  return lu.solve(b);
}

struct Partition {
  std::vector<Index> free;   // indices into the full node set
  std::vector<Index> where;  // node -> position in `free`, -1 when fixed
};

Partition split(std::size_t n, const std::vector<bool>& fixed) {
  Partition p;
  p.where.assign(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    if (fixed[k]) continue;
    p.where[k] = static_cast<Index>(p.free.size());
    p.free.push_back(static_cast<Index>(k));
  }
  return p;
}

/// Fundamental matrix (I - Q)^-1 restricted to transient states.
struct Transient {
  Partition part;
  Eigen::MatrixXd N;
};

Transient transient_fundamental(const Chain& chain, const NodeSet& roots) {
  const std::size_t n = chain.state_count();
  if (roots.empty()) fail(ErrorCode::EmptyRootSet, "absorbing set is empty");
  const NodeSet R = normalize_node_set(chain.network, roots);
  std::vector<bool> absorbing(n, false);
  for (NodeIndex r : R) absorbing[r] = true;

  Transient t{split(n, absorbing), {}};
  const auto m = static_cast<Index>(t.part.free.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) A(i, j) -= chain.P(t.part.free[i], t.part.free[j]);
  if (m > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon()))
      fail(ErrorCode::SingularSystem, "absorbing chain fundamental matrix");
    t.N = lu.inverse();
  }
  return t;
}

}  // namespace

VoltageVector solve_mixed(const Network& net, const FixedVoltages& fixed,
                          const Eigen::VectorXd& injection) {
  validate(net, fixed);
  const std::size_t n = net.node_count();
  if (static_cast<std::size_t>(injection.size()) != n)
    fail(ErrorCode::InvalidInjection, "injection vector has the wrong length");

  std::vector<bool> is_fixed(n, false);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Index>(n));
  for (const auto& [k, volts] : fixed.assignments) {
    is_fixed[k] = true;
    v(static_cast<Index>(k)) = volts;
  }
  const Partition p = split(n, is_fixed);
  const auto m = static_cast<Index>(p.free.size());

  // Reduced Laplacian on free nodes; fixed neighbours move to the right side.
  const Eigen::MatrixXd L = net.laplacian();
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd b(m);
  for (Index i = 0; i < m; ++i) {
    const Index k = p.free[i];
    b(i) = injection(k);
    for (Index j = 0; j < static_cast<Index>(n); ++j) {
      if (p.where[j] >= 0)
        A(i, p.where[j]) = L(k, j);
      else
        b(i) -= L(k, j) * v(j);
    }
  }
  const Eigen::VectorXd x = lu_solve(A, b, "reduced Laplacian is singular");
  for (Index i = 0; i < m; ++i) v(p.free[i]) = x(i);
  return VoltageVector{std::move(v), std::nullopt};
}

VoltageVector solve_dirichlet(const Network& net, const FixedVoltages& fixed) {
  return solve_mixed(net, fixed,
                     Eigen::VectorXd::Zero(static_cast<Index>(net.node_count())));
}

VoltageVector solve_injected(const Network& net, const InjectedCurrents& injected,
                             NodeIndex ground) {
  validate(net, injected);
  if (ground >= net.node_count())
    fail(ErrorCode::UnknownNode, "ground index " + std::to_string(ground));
  VoltageVector out = solve_mixed(net, FixedVoltages{{{ground, 0.0}}}, injected.J);
  out.ground = ground;
  return out;
}

CurrentMatrix branch_currents(const Network& net, const VoltageVector& voltages) {
  const auto n = static_cast<Index>(net.node_count());
  CurrentMatrix I{Eigen::MatrixXd::Zero(n, n),
                  std::vector<double>(net.branch_count(), 0.0)};
  for (const Branch& b : net.branches()) {
    if (b.is_self_loop()) continue;
    const auto u = static_cast<Index>(b.u);
    const auto v = static_cast<Index>(b.v);
    const double i = b.g * (voltages.v(u) - voltages.v(v));
    I.branch[b.id] = i;
    I.node(u, v) += i;
    I.node(v, u) -= i;
  }
  return I;
}

Eigen::VectorXd node_injections(const Network& net, const VoltageVector& voltages) {
  return net.laplacian() * voltages.v;
}

double tree_sum_determinant(const Network& net) {
  const auto m = static_cast<Index>(net.node_count()) - 1;
  if (m == 0) return 1.0;
  return net.laplacian().topLeftCorner(m, m).partialPivLu().determinant();
}

HittingResult fundamental_hitting(const Chain& chain, NodeIndex start,
                                  const NodeSet& roots) {
  const Transient t = transient_fundamental(chain, roots);
  const auto n = static_cast<Index>(chain.state_count());
  if (start >= chain.state_count())
    fail(ErrorCode::UnknownNode, "start index " + std::to_string(start));

  HittingResult out{0.0, Eigen::VectorXd::Zero(n)};
  const Index s = t.part.where[start];
  if (s < 0) {
    out.absorb(static_cast<Index>(start)) = 1.0;
    return out;
  }
  out.tau = t.N.row(s).sum();
  for (Index r = 0; r < n; ++r) {
    if (t.part.where[r] >= 0) continue;
    double p = 0.0;
    for (Index j = 0; j < static_cast<Index>(t.part.free.size()); ++j)
      p += t.N(s, j) * chain.P(t.part.free[j], r);
    out.absorb(r) = p;
  }
  return out;
}

Eigen::VectorXd expected_visits(const Chain& chain, NodeIndex start,
                                const NodeSet& roots) {
  const Transient t = transient_fundamental(chain, roots);
  if (start >= chain.state_count())
    fail(ErrorCode::UnknownNode, "start index " + std::to_string(start));
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Index>(chain.state_count()));
  const Index s = t.part.where[start];
  if (s < 0) return e;
  for (Index j = 0; j < static_cast<Index>(t.part.free.size()); ++j)
    e(t.part.free[j]) = t.N(s, j);
  return e;
}

}  // namespace forest
