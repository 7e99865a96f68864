#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "forest/forest.hpp"
#include "json_writer.hpp"

namespace forest::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Eigen::Index;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string network;
  std::string format = "json";
  bool check = false;
  double tol = 1e-9;

  std::string theorem;
  std::string fixed;
  std::string inject;
  std::string ground;
  std::string roots;
  std::string start;
  std::string p0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t estimate = 0;
};

Index ix(NodeIndex k) { return static_cast<Index>(k); }

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(x))
    throw UsageError("not a finite number: '" + text + "'");
  return x;
}

/// "a=1,b=2" keyed by node name.
std::vector<std::pair<NodeIndex, double>> parse_assignments(const Network& net,
                                                            const std::string& text) {
  std::vector<std::pair<NodeIndex, double>> out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos) throw UsageError("expected name=value, got '" + item + "'");
    const NodeIndex k = net.index_of(item.substr(0, eq));
    for (const auto& [seen, value] : out)
      if (seen == k) throw UsageError("node " + net.name(k) + " assigned twice");
    out.emplace_back(k, parse_double(item.substr(eq + 1)));
  }
  return out;
}

NodeSet parse_nodes(const Network& net, const std::string& text) {
  NodeSet out;
  for (const std::string& name : split(text, ',')) out.push_back(net.index_of(name));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FixedVoltages parse_fixed(const Network& net, const std::string& text) {
  FixedVoltages fixed;
  for (const auto& [k, volts] : parse_assignments(net, text)) fixed.assignments[k] = volts;
  return fixed;
}

Eigen::VectorXd parse_vector(const Network& net, const std::string& text) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ix(net.node_count()));
  for (const auto& [k, value] : parse_assignments(net, text)) x(ix(k)) = value;
  return x;
}

NodeIndex parse_ground(const Network& net, const Options& o) {
  return o.ground.empty() ? NodeIndex{0} : net.index_of(o.ground);
}

// ---------------------------------------------------------------- output

/// Which entries of a result vector are printed, and how.
struct Layout {
  enum Kind { kNodes, kBranches } kind = kNodes;
  NodeSet nodes;  // kNodes: printed entries, keyed by name

  Eigen::VectorXd pick(const Eigen::VectorXd& full) const {
    if (kind == kBranches) return full;
    Eigen::VectorXd out(ix(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) out(ix(i)) = full(ix(nodes[i]));
    return out;
  }
};

Layout all_nodes(const Network& net) {
  Layout l;
  l.nodes.resize(net.node_count());
  for (NodeIndex k = 0; k < net.node_count(); ++k) l.nodes[k] = k;
  return l;
}

ojson render(const Network& net, const Layout& layout, const Eigen::VectorXd& values) {
  if (layout.kind == Layout::kBranches) {
    ojson rows = ojson::array();
    for (const Branch& b : net.branches())
      rows.push_back({{"u", net.name(b.u)}, {"v", net.name(b.v)}, {"i", values(ix(b.id))}});
    return rows;
  }
  ojson obj = ojson::object();
  for (std::size_t i = 0; i < layout.nodes.size(); ++i)
    obj[net.name(layout.nodes[i])] = values(ix(i));
  return obj;
}

ojson render_matrix(const Network& net, const Eigen::MatrixXd& m) {
  ojson obj = ojson::object();
  for (NodeIndex k = 0; k < net.node_count(); ++k) {
    ojson row = ojson::object();
    for (NodeIndex l = 0; l < net.node_count(); ++l) row[net.name(l)] = m(ix(k), ix(l));
    obj[net.name(k)] = row;
  }
  return obj;
}

Eigen::VectorXd column(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

/// max |a - b| over max |b|; absolute when the reference vanishes.
double max_rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0) return 0.0;
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double scale = b.cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

void append_check(ojson& doc, const std::string& key, const Network& net,
                  const Layout& layout, const Eigen::VectorXd& value,
                  const Eigen::VectorXd& oracle, double tol) {
  const Eigen::VectorXd a = layout.pick(value);
  const Eigen::VectorXd b = layout.pick(oracle);
  const double err = max_rel_err(a, b);
  ojson o = ojson::object();
  o[key] = render(net, layout, b);
  doc["oracle"] = o;
  doc["max_rel_err"] = err;
  doc["tol"] = tol;
  doc["passed"] = err <= tol;
}

/// Estimates pass when every component lies within four standard errors.
void append_estimate_check(ojson& doc, const std::string& key, const Network& net,
                           const Layout& layout, const Eigen::VectorXd& value,
                           const Eigen::VectorXd& std_error, const Eigen::VectorXd& oracle) {
  const Eigen::VectorXd a = layout.pick(value);
  const Eigen::VectorXd se = layout.pick(std_error);
  const Eigen::VectorXd b = layout.pick(oracle);
  bool within = true;
  for (Index i = 0; i < a.size(); ++i)
    within = within && std::abs(a(i) - b(i)) <= 4.0 * se(i) + 1e-12 * (1.0 + std::abs(b(i)));
  ojson o = ojson::object();
  o[key] = render(net, layout, b);
  doc["oracle"] = o;
  doc["max_rel_err"] = max_rel_err(a, b);
  doc["passed"] = within;
}

void emit(const ojson& doc, const Options& o, std::ostream& out) {
  if (o.format == "csv") {
    out << "key,value\n" << write_csv(doc);
  } else {
    out << write_json(doc) << '\n';
  }
}

/// One record per line for JSON; CSV keys carry the record index.
void emit_records(const std::vector<ojson>& records, const Options& o, std::ostream& out) {
  if (o.format == "csv") {
    out << "key,value\n";
    for (std::size_t i = 0; i < records.size(); ++i)
      out << write_csv(records[i], std::to_string(i));
  } else {
    for (const ojson& r : records) out << write_json(r) << '\n';
  }
}

EstimateOptions estimate_options(const Options& o, std::size_t samples) {
  EstimateOptions e;
  e.samples = samples;
  e.seed = o.seed;
  e.workers = o.workers;
  return e;
}

// ---------------------------------------------------------------- solve

void run_solve(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  if (o.fixed.empty() == o.inject.empty())
    throw UsageError("solve needs exactly one of --fixed or --inject");

  VoltageVector v;
  Eigen::VectorXd J;
  std::optional<FixedVoltages> fixed;
  if (!o.fixed.empty()) {
    fixed = parse_fixed(net, o.fixed);
    v = solve_dirichlet(net, *fixed);
  } else {
    J = parse_vector(net, o.inject);
    v = solve_injected(net, InjectedCurrents{J}, parse_ground(net, o));
  }
  const CurrentMatrix I = branch_currents(net, v);

  ojson doc;
  doc["voltages"] = render(net, all_nodes(net), v.v);
  if (v.ground) doc["ground"] = net.name(*v.ground);
  Layout branches;
  branches.kind = Layout::kBranches;
  doc["currents"] = render(net, branches,
                           Eigen::Map<const Eigen::VectorXd>(I.branch.data(),
                                                             ix(I.branch.size())));

  if (o.check) {
    // Kirchhoff's current law at every node that is not held externally.
    const Eigen::VectorXd drawn = node_injections(net, v);
    Eigen::VectorXd expected = fixed ? Eigen::VectorXd::Zero(drawn.size()) : J;
    if (fixed)
      for (const auto& [k, volts] : fixed->assignments) expected(ix(k)) = drawn(ix(k));
    double scale = std::max(expected.cwiseAbs().maxCoeff(), drawn.cwiseAbs().maxCoeff());
    const double residual = (drawn - expected).cwiseAbs().maxCoeff();
    const double err = scale > 0.0 ? residual / scale : residual;
    doc["kcl_residual"] = residual;
    doc["max_rel_err"] = err;
    doc["tol"] = o.tol;
    doc["passed"] = err <= o.tol;
  }
  emit(doc, o, out);
}

// ---------------------------------------------------------------- exact / estimate

struct TheoremResult {
  std::string key;
  Layout layout;
  Eigen::VectorXd value;
  Eigen::VectorXd std_error;  // estimates only
  std::size_t samples = 0;
};

Eigen::VectorXd branch_vector(const CurrentMatrix& I) {
  return Eigen::Map<const Eigen::VectorXd>(I.branch.data(), ix(I.branch.size()));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

void run_theorem(const Options& o, bool estimate, std::ostream& out) {
  const Network net = load_network(o.network);
  const EstimateOptions eopt = estimate_options(o, o.count ? o.count : 10'000);

  TheoremResult r;
  Eigen::VectorXd oracle;
  std::optional<NodeIndex> ground;

  if (o.theorem == "vv" || o.theorem == "vj") {
    require(!o.fixed.empty() && o.inject.empty(), "--theorem " + o.theorem + " needs --fixed");
    const FixedVoltages fixed = parse_fixed(net, o.fixed);
    const VoltageVector solved = o.check ? solve_dirichlet(net, fixed) : VoltageVector{};
    if (o.theorem == "vv") {
      r.key = "voltages";
      r.layout = all_nodes(net);
      if (estimate) {
        const EstimateReport e = vv_estimate_all(net, fixed, eopt);
        r.value = column(e.value);
        r.std_error = column(e.std_error);
        r.samples = e.samples;
      } else {
        r.value = vv_exact_all(net, fixed);
      }
      if (o.check) oracle = solved.v;
    } else {
      r.key = "injections";
      for (const auto& [k, volts] : fixed.assignments) r.layout.nodes.push_back(k);
      if (estimate) {
        const EstimateReport e = vj_estimate_all(net, fixed, eopt);
        r.value = column(e.value);
        r.std_error = column(e.std_error);
        r.samples = e.samples;
      } else {
        r.value = vj_exact_all(net, fixed);
      }
      if (o.check) oracle = node_injections(net, solved);
    }
  } else if (o.theorem == "ji" || o.theorem == "iv") {
    require(!o.inject.empty() && o.fixed.empty(), "--theorem " + o.theorem + " needs --inject");
    const InjectedCurrents injected{parse_vector(net, o.inject)};
    validate(net, injected);
    const NodeIndex g = parse_ground(net, o);
    if (o.theorem == "ji") {
      r.key = "currents";
      r.layout.kind = Layout::kBranches;
      if (estimate) {
        const CurrentEstimate e = ji_estimate(net, injected, eopt);
        r.value = column(e.branch.value);
        r.std_error = column(e.branch.std_error);
        r.samples = e.branch.samples;
      } else {
        r.value = branch_vector(ji_exact(net, injected));
      }
      if (o.check) oracle = branch_vector(branch_currents(net, solve_injected(net, injected, g)));
    } else {
      ground = g;
      r.key = "voltages";
      r.layout = all_nodes(net);
      // Any consistent current matrix will do; route J through one tree.
      const CurrentMatrix I = tree_current_distribution(net, greedy_spanning_tree(net), injected);
      if (estimate) {
        const EstimateReport e = iv_estimate(net, I, g, eopt);
        r.value = column(e.value);
        r.std_error = column(e.std_error);
        r.samples = e.samples;
      } else {
        r.value = iv_exact(net, I, g).v;
      }
      if (o.check) oracle = solve_injected(net, injected, g).v;
    }
  } else {
    throw UsageError("--theorem must be one of vj, vv, ji, iv");
  }

  ojson doc;
  doc["theorem"] = o.theorem;
  if (ground) doc["ground"] = net.name(*ground);
  doc[r.key] = render(net, r.layout, r.layout.pick(r.value));
  if (estimate) {
    doc["std_error"] = render(net, r.layout, r.layout.pick(r.std_error));
    doc["samples"] = r.samples;
    doc["seed"] = o.seed;
    doc["workers"] = std::max(o.workers, 1u);
  }
  if (o.check) {
    if (estimate)
      append_estimate_check(doc, r.key, net, r.layout, r.value, r.std_error, oracle);
    else
      append_check(doc, r.key, net, r.layout, r.value, oracle, o.tol);
  }
  emit(doc, o, out);
}

// ---------------------------------------------------------------- sample / enumerate

void run_sample(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  const std::size_t count = o.count ? o.count : 1;
  Rng rng(o.seed);
  std::vector<ojson> records;
  records.reserve(count);
  const auto record = [](const std::vector<BranchId>& branches) {
    ojson r;
    r["branches"] = branches;
    return r;
  };
  if (o.roots.empty()) {
    SpanningTreeSampler trees(net);
    for (std::size_t i = 0; i < count; ++i) records.push_back(record(trees.sample_branches(rng)));
  } else {
    ForestSampler forests(net, parse_nodes(net, o.roots));
    for (std::size_t i = 0; i < count; ++i)
      records.push_back(record(forests.sample_branches(rng)));
  }
  emit_records(records, o, out);
}

void run_enumerate(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  const NodeSet roots = o.roots.empty() ? NodeSet{0} : parse_nodes(net, o.roots);
  std::vector<ojson> records;
  for_each_separating_forest(net, roots, [&](std::span<const BranchId> branches) {
    const Forest f = Forest::build(net, {branches.begin(), branches.end()}, roots);
    ojson r;
    r["branches"] = f.branches();
    r["weight"] = conductance_product(net, branches);
    ojson blocks = ojson::object();
    for (NodeIndex k = 0; k < net.node_count(); ++k)
      blocks[net.name(k)] = net.name(f.block_of(k));
    r["block_of"] = blocks;
    records.push_back(std::move(r));
  });
  emit_records(records, o, out);
}

// ---------------------------------------------------------------- markov

NodeIndex parse_start(const Network& net, const Options& o) {
  require(!o.start.empty(), "--start is required");
  return net.index_of(o.start);
}

NodeSet parse_roots(const Network& net, const Options& o) {
  require(!o.roots.empty(), "--roots is required");
  return parse_nodes(net, o.roots);
}

void run_hitting(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  const Chain chain = to_markov_chain(net);
  const NodeIndex start = parse_start(net, o);
  const NodeSet roots = parse_roots(net, o);
  const double tau = expected_hitting_time(chain, start, roots);

  ojson doc;
  doc["start"] = net.name(start);
  doc["tau"] = tau;
  if (o.check) {
    const double ref = fundamental_hitting(chain, start, roots).tau;
    const double err = std::abs(tau - ref) / std::abs(ref);
    doc["oracle"] = {{"tau", ref}};
    doc["max_rel_err"] = err;
    doc["tol"] = o.tol;
    doc["passed"] = err <= o.tol;
  }
  emit(doc, o, out);
}

void run_absorb(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  const Chain chain = to_markov_chain(net);
  const NodeIndex start = parse_start(net, o);
  Layout layout;
  layout.nodes = parse_roots(net, o);
  const Eigen::VectorXd p = absorption_distribution(chain, start, layout.nodes);

  ojson doc;
  doc["start"] = net.name(start);
  doc["absorption"] = render(net, layout, layout.pick(p));
  if (o.estimate) {
    const EstimateReport e =
        absorption_estimate(chain, start, layout.nodes, estimate_options(o, o.estimate));
    doc["estimate"] = {{"absorption", render(net, layout, layout.pick(column(e.value)))},
                       {"std_error", render(net, layout, layout.pick(column(e.std_error)))},
                       {"samples", e.samples},
                       {"seed", o.seed},
                       {"workers", std::max(o.workers, 1u)}};
  }
  if (o.check)
    append_check(doc, "absorption", net, layout, p,
                 fundamental_hitting(chain, start, layout.nodes).absorb, o.tol);
  emit(doc, o, out);
}

void run_flow(const Options& o, std::ostream& out) {
  const Network net = load_network(o.network);
  const Chain chain = to_markov_chain(net);
  require(!o.p0.empty(), "--p0 is required");
  const Eigen::VectorXd p0 = parse_vector(net, o.p0);
  const FlowMatrix flow = equilibrium_flow(chain, p0);

  ojson doc;
  doc["flow"] = render_matrix(net, flow.u);
  if (o.check) {
    const Eigen::VectorXd J = p0 - chain.pi;
    const Eigen::MatrixXd ref = ji_exact(chain.network, InjectedCurrents{J}).node;
    const double scale = ref.cwiseAbs().maxCoeff();
    const double diff = (flow.u - ref).cwiseAbs().maxCoeff();
    const double err = scale > 0.0 ? diff / scale : diff;
    doc["oracle"] = {{"flow", render_matrix(net, ref)}};
    doc["max_rel_err"] = err;
    doc["tol"] = o.tol;
    doc["passed"] = err <= o.tol;
  }
  emit(doc, o, out);
}

// ---------------------------------------------------------------- flags

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--network", o.network, "Network JSON file")->required();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_flag("--check", o.check, "Cross-verify against the linear-algebra oracle");
  cmd->add_option("--tol", o.tol, "Relative tolerance for --check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_boundary(CLI::App* cmd, Options& o) {
  cmd->add_option("--fixed", o.fixed, "Fixed voltages, name=volts,...");
  cmd->add_option("--inject", o.inject, "Injected currents, name=amps,... (others 0)");
  cmd->add_option("--ground", o.ground, "Node held at 0 V with --inject (default: first node)");
}

void add_sampling(CLI::App* cmd, Options& o, const std::string& count_help) {
  cmd->add_option("--count", o.count, count_help)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_workers(CLI::App* cmd, Options& o) {
  cmd->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int report(std::ostream& err, const std::string& message, int code) {
  err << "forest-solve: " << message << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Resistive networks and reversible Markov chains by spanning trees and forests",
               "forest-solve"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Dense linear solve (the oracle)");
  add_common(solve, o);
  add_boundary(solve, o);

  auto* exact = app.add_subcommand("exact", "Tree/forest formulas by enumeration");
  auto* estimate = app.add_subcommand("estimate", "Tree/forest formulas by sampling");
  for (auto* cmd : {exact, estimate}) {
    add_common(cmd, o);
    add_boundary(cmd, o);
    cmd->add_option("--theorem", o.theorem, "vj, vv, ji or iv")
        ->required()
        ->check(CLI::IsMember({"vj", "vv", "ji", "iv"}));
  }
  add_sampling(estimate, o, "Samples (default 10000)");
  add_workers(estimate, o);

  auto* sample = app.add_subcommand("sample", "Draw spanning trees, or forests with --roots");
  add_common(sample, o);
  sample->add_option("--roots", o.roots, "Root set, name,...");
  add_sampling(sample, o, "Samples (default 1)");

  auto* enumerate = app.add_subcommand("enumerate", "List spanning trees, or forests with --roots");
  add_common(enumerate, o);
  enumerate->add_option("--roots", o.roots, "Root set, name,...");

  auto* markov = app.add_subcommand("markov", "Random walk quantities of the network's chain");
  add_common(markov, o);
  markov->require_subcommand(1);
  auto* hitting = markov->add_subcommand("hitting", "Expected steps to reach the roots");
  auto* absorb = markov->add_subcommand("absorb", "Where the walk first reaches the roots");
  auto* flow = markov->add_subcommand("flow", "Equilibrium net flow from p0");
  for (auto* cmd : {hitting, absorb}) {
    cmd->fallthrough();
    cmd->add_option("--start", o.start, "Start state")->required();
    cmd->add_option("--roots", o.roots, "Stopping set, name,...")->required();
  }
  absorb->add_option("--estimate", o.estimate, "Also estimate from this many sampled forests")
      ->check(CLI::PositiveNumber);
  absorb->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_workers(absorb, o);
  flow->fallthrough();
  flow->add_option("--p0", o.p0, "Initial distribution, name=prob,... (others 0)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    return report(err, e.what(), kUsage);
  }

  try {
    if (*solve) run_solve(o, out);
    else if (*exact) run_theorem(o, false, out);
    else if (*estimate) run_theorem(o, true, out);
    else if (*sample) run_sample(o, out);
    else if (*enumerate) run_enumerate(o, out);
    else if (*hitting) run_hitting(o, out);
    else if (*absorb) run_absorb(o, out);
    else if (*flow) run_flow(o, out);
  } catch (const Error& e) {
    std::string message = e.what();
    if (e.code() == ErrorCode::TooLarge)
      message += "; use `estimate` or `markov absorb --estimate` to sample instead";
    return report(err, message, is_numeric_failure(e.code()) ? kNumeric : kUsage);
  } catch (const std::invalid_argument& e) {
    return report(err, e.what(), kUsage);
  } catch (const std::out_of_range& e) {
    return report(err, e.what(), kUsage);
  } catch (const std::exception& e) {
    return report(err, e.what(), kNumeric);
  }
  return kOk;
}

}  // namespace forest::cli
