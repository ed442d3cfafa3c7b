#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hlbench/common.hpp"
#include "hlbench/graph.hpp"

namespace hlbench {

/// Node universe plus a list of distinct hyperedges, each a canonical
/// (sorted) node set of size >= 2.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::vector<std::string> labels);

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<NodeSet>& edges() const { return edges_; }
  const NodeSet& edge(std::size_t id) const { return edges_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Adds a hyperedge (canonicalized). Returns its id, or nullopt if it
  /// was already present. Throws when size < 2 or a node is out of range.
  std::optional<std::size_t> add(NodeSet nodes);

  bool contains(const NodeSet& canonical_set) const;
  std::optional<std::size_t> find(const NodeSet& canonical_set) const;

  /// Sub-hypergraph on the same node universe with the given hyperedge ids,
  /// in the given order.
  Hypergraph select(const std::vector<std::size_t>& ids) const;

  /// Graph in which u ~ v iff some hyperedge holds both.
  Graph clique_expansion() const;

 private:
  std::vector<std::string> labels_;
  std::vector<NodeSet> edges_;
  std::unordered_map<NodeSet, std::size_t, NodeSetHash> index_;
};

class CliqueLimitExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultCliqueCap = 1'000'000;

/// All maximal cliques (including maximal edges and isolated-node
/// singletons), each sorted, in lexicographic order. Throws
/// CliqueLimitExceeded when more than `cap` cliques are found.
std::vector<NodeSet> maximal_cliques(const Graph& g, std::size_t cap = kDefaultCliqueCap);

/// Clique hypergraph: one dyad per edge (in Graph::edges() order) followed
/// by every maximal clique of size >= 3 (lexicographic order).
Hypergraph derive_hypergraph(const Graph& g, std::size_t cap = kDefaultCliqueCap);

/// 0/1 node-by-hyperedge incidence, stored by rows.
class IncidenceMatrix {
 public:
  IncidenceMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<std::size_t>> row_entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Hyperedge ids containing node i, ascending.
  const std::vector<std::size_t>& row(std::size_t i) const { return entries_.at(i); }
  int at(std::size_t i, std::size_t e) const;
  std::vector<std::size_t> column_sums() const;
  std::vector<std::vector<int>> dense() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<std::size_t>> entries_;
};

IncidenceMatrix incidence(const Hypergraph& h);

/// One hyperedge per line, node labels joined by commas.
void write_hypergraph(const Hypergraph& h, std::ostream& out);

}  // namespace hlbench
