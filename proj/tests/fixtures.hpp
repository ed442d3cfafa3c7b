#pragma once

#include <algorithm>
#include <string>

#include "hlbench/hypergraph.hpp"
#include "hlbench/rng.hpp"

namespace fixture {

using namespace hlbench;

/// Three communities of 20 nodes; hyperedges of size 3-4 drawn inside one community.
inline Hypergraph planted(std::uint64_t seed, std::size_t count = 60) {
  std::vector<std::string> labels;
  for (int i = 0; i < 60; ++i) labels.push_back("v" + std::to_string(i));
  Hypergraph h(labels);
  Rng rng(seed);
  while (h.num_edges() < count) {
    const NodeId base = static_cast<NodeId>(20 * rng.below(3));
    const std::size_t k = 3 + rng.below(2);
    NodeSet s;
    while (s.size() < k) {
      const NodeId v = base + static_cast<NodeId>(rng.below(20));
      if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    h.add(s);
  }
  return h;
}

}  // namespace fixture
