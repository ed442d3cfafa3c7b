#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hlbench/common.hpp"

namespace hlbench {

/// Simple undirected graph over dense ids 0..n-1 with string labels.
///
/// Neighbor lists are kept sorted so that intersections and membership
/// queries are logarithmic or linear merges.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);
  explicit Graph(std::vector<std::string> labels);

  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  /// Inserts {u, v}. Returns false when already present. Throws on self-loop.
  bool add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;

  std::span<const NodeId> neighbors(NodeId u) const { return adj_.at(u); }
  std::size_t degree(NodeId u) const { return adj_.at(u).size(); }

  const std::string& label(NodeId u) const { return labels_.at(u); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(const std::string& label) const;

  /// Edges as (u, v) with u < v, ascending lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  /// Induced subgraph; output ids follow the order of `nodes`.
  Graph induced(std::span<const NodeId> nodes) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<NodeId>> adj_;
  std::size_t num_edges_ = 0;
};

/// Number of common neighbors of u and v.
std::size_t count_common_neighbors(const Graph& g, NodeId u, NodeId v);
std::vector<NodeId> common_neighbors(const Graph& g, NodeId u, NodeId v);

// --- ingestion -------------------------------------------------------------

enum class EdgelistFormat { plain, csv };

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedEdgelist {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Reads one edge per line. '#' lines and blank lines are skipped. In csv
/// mode a first line whose tokens are a known header pair (source/target,
/// from/to, u/v, node1/node2, sender/recipient) is skipped.
ParsedEdgelist parse_edgelist(std::istream& in, EdgelistFormat format);
ParsedEdgelist parse_edgelist(const std::string& text, EdgelistFormat format);

/// Writes "label label" per edge in edges() order.
void write_edgelist(const Graph& g, std::ostream& out);

struct MessageRecord {
  std::string sender;
  std::string recipient;
  std::uint64_t weight = 1;
  std::optional<std::string> timestamp;
};

struct MessageLog {
  std::vector<MessageRecord> records;
};

/// CSV with header `sender,recipient,weight[,timestamp]`.
MessageLog parse_message_log(std::istream& in);

struct ProjectedGraph {
  Graph graph;
  /// Total sent + received message count per node.
  std::vector<double> volume;
  std::size_t self_messages_dropped = 0;
};

/// Undirected projection: {i, j} is an edge iff a message exists in either
/// direction. Node ids are assigned in ascending label order, so the result
/// does not depend on record order.
ProjectedGraph project_messages(const MessageLog& log);

// --- statistics ------------------------------------------------------------

struct SummaryStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  std::size_t triangles = 0;
};

SummaryStats graph_stats(const Graph& g);
std::size_t count_triangles(const Graph& g);

/// Density as printed in summary tables: four significant decimals padded
/// to six places, e.g. 24/105 -> "0.228600".
std::string format_density(double density);

/// Induced subgraph on the k nodes of highest volume. Ties go to the
/// lexicographically smaller label. Returns g unchanged when n <= k.
Graph core_k(const Graph& g, std::span<const double> volumes, std::size_t k);

/// Degree of every node, as doubles, for use as a core_k volume.
std::vector<double> degree_volumes(const Graph& g);

}  // namespace hlbench
