#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlbench {

using NodeId = std::uint32_t;

/// A set of nodes stored as a strictly ascending id list.
using NodeSet = std::vector<NodeId>;

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorts and deduplicates in place; returns the argument for chaining.
NodeSet& canonicalize(NodeSet& s);
NodeSet canonical(NodeSet s);

struct NodeSetHash {
  std::size_t operator()(const NodeSet& s) const noexcept {
    // FNV-1a over the ids
    std::uint64_t h = 1469598103934665603ULL;
    for (NodeId v : s) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace hlbench
