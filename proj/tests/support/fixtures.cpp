#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace forest::test {

Network g2() { return Network::build({"1", "2"}, {{"1", "2", 2.0}}); }

Network g3() {
  return Network::build({"1", "2", "3"}, {{"1", "2", 1.0}, {"2", "3", 2.0}, {"1", "3", 3.0}});
}

Network p3() { return Network::build({"1", "2", "3"}, {{"1", "2", 1.0}, {"2", "3", 1.0}}); }

Network two_state() {
  return Network::build({"1", "2"}, {{"1", "2", 0.25}, {"1", "1", 0.3}, {"2", "2", 0.2}});
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  double x = d(gen);
  while (x <= lo) x = d(gen);
  return x;
}

Network random_network(std::mt19937_64& gen, const RandomNetworkSpec& spec) {
  const std::size_t n =
      std::uniform_int_distribution<std::size_t>(spec.min_nodes, spec.max_nodes)(gen);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) names.push_back("n" + std::to_string(k));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), gen);

  std::vector<BranchSpec> branches;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(gen);
    branches.push_back({names[order[i]], names[order[j]], uniform(gen, spec.g_lo, spec.g_hi)});
  }
  const std::size_t extra =
      std::uniform_int_distribution<std::size_t>(0, spec.max_extra_branches)(gen);
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  for (std::size_t e = 0; e < extra; ++e) {
    std::size_t a = node(gen), b = node(gen);
    if (a == b && !spec.self_loops) continue;
    branches.push_back({names[a], names[b], uniform(gen, spec.g_lo, spec.g_hi)});
  }
  std::shuffle(branches.begin(), branches.end(), gen);
  return Network::build(names, branches);
}

NodeSet random_subset(std::mt19937_64& gen, std::size_t n, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, n);
  const std::size_t size = std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
  NodeSet all(n);
  std::iota(all.begin(), all.end(), NodeIndex{0});
  std::shuffle(all.begin(), all.end(), gen);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace forest::test
