#pragma once

#include <string>
#include <vector>

#include "forest/network.hpp"

namespace forest::bench {

/// side x side lattice with unit-ish conductances varying by position.
inline Network grid(int side) {
  std::vector<std::string> names;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) names.push_back(std::to_string(r) + "," + std::to_string(c));
  std::vector<BranchSpec> branches;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const auto& here = names[r * side + c];
      const double g = 1.0 + 0.1 * ((r * 7 + c * 3) % 5);
      if (c + 1 < side) branches.push_back({here, names[r * side + c + 1], g});
      if (r + 1 < side) branches.push_back({here, names[(r + 1) * side + c], g});
    }
  return Network::build(names, branches);
}

}  // namespace forest::bench
