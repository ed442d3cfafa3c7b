#include "hlbench/hypergraph.hpp"

#include <algorithm>
#include <ostream>

namespace hlbench {

Hypergraph::Hypergraph(std::vector<std::string> labels) : labels_(std::move(labels)) {}

std::optional<std::size_t> Hypergraph::add(NodeSet nodes) {
  canonicalize(nodes);
  if (nodes.size() < 2) throw Error("hyperedge must have at least 2 nodes");
  if (nodes.back() >= labels_.size()) throw Error("hyperedge node out of range");
  if (index_.count(nodes)) return std::nullopt;
  const std::size_t id = edges_.size();
  index_.emplace(nodes, id);
  edges_.push_back(std::move(nodes));
  return id;
}

bool Hypergraph::contains(const NodeSet& s) const { return index_.count(s) > 0; }

std::optional<std::size_t> Hypergraph::find(const NodeSet& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Hypergraph Hypergraph::select(const std::vector<std::size_t>& ids) const {
  Hypergraph out(labels_);
  for (std::size_t id : ids) out.add(edges_.at(id));
  return out;
}

Graph Hypergraph::clique_expansion() const {
  Graph g(labels_);
  for (const auto& e : edges_)
    for (std::size_t a = 0; a < e.size(); ++a)
      for (std::size_t b = a + 1; b < e.size(); ++b) g.add_edge(e[a], e[b]);
  return g;
}

// --- maximal cliques --------------------------------------------------------

namespace {

/// Pivoted Bron-Kerbosch over sorted candidate/exclusion vectors.
class CliqueEnumerator {
 public:
  CliqueEnumerator(const Graph& g, std::size_t cap) : g_(g), cap_(cap) {}

  void run() {
    const auto order = degeneracy_order();
    std::vector<std::size_t> position(g_.num_nodes());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    for (NodeId v : order) {
      std::vector<NodeId> p, x;
      for (NodeId w : g_.neighbors(v)) (position[w] > position[v] ? p : x).push_back(w);
      std::sort(p.begin(), p.end());
      std::sort(x.begin(), x.end());
      r_.assign(1, v);
      expand(std::move(p), std::move(x));
    }
  }

  std::vector<NodeSet> take() { return std::move(out_); }

 private:
  std::vector<NodeId> degeneracy_order() const {
    const std::size_t n = g_.num_nodes();
    std::vector<std::size_t> deg(n);
    std::size_t max_deg = 0;
    for (NodeId v = 0; v < n; ++v) max_deg = std::max(max_deg, deg[v] = g_.degree(v));
    std::vector<std::vector<NodeId>> buckets(max_deg + 1);
    for (NodeId v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
    std::vector<char> removed(n, 0);
    std::vector<NodeId> order;
    order.reserve(n);
    std::size_t d = 0;
    while (order.size() < n) {
      d = std::min<std::size_t>(d, max_deg);
      while (buckets[d].empty()) ++d;
      const NodeId v = buckets[d].back();
      buckets[d].pop_back();
      if (removed[v] || deg[v] != d) continue;  // stale entry
      removed[v] = 1;
      order.push_back(v);
      for (NodeId w : g_.neighbors(v))
        if (!removed[w]) {
          --deg[w];
          buckets[deg[w]].push_back(w);
        }
      if (d > 0) --d;
    }
    return order;
  }

  std::vector<NodeId> intersect(const std::vector<NodeId>& s, NodeId v) const {
    auto nb = g_.neighbors(v);
    std::vector<NodeId> out;
    std::set_intersection(s.begin(), s.end(), nb.begin(), nb.end(), std::back_inserter(out));
    return out;
  }

  void expand(std::vector<NodeId> p, std::vector<NodeId> x) {
    if (p.empty()) {
      if (x.empty()) emit();
      return;
    }
    // Pivot: vertex of P u X with most neighbors in P.
    NodeId pivot = p.front();
    std::size_t best = 0;
    bool first = true;
    for (const auto* s : {&p, &x})
      for (NodeId u : *s) {
        auto nb = g_.neighbors(u);
        std::size_t c = 0;
        auto i = p.begin();
        auto j = nb.begin();
        while (i != p.end() && j != nb.end()) {
          if (*i < *j) ++i;
          else if (*j < *i) ++j;
          else { ++c; ++i; ++j; }
        }
        if (first || c > best) {
          best = c;
          pivot = u;
          first = false;
        }
      }
    std::vector<NodeId> branch;
    for (NodeId v : p)
      if (!g_.has_edge(pivot, v)) branch.push_back(v);
    for (NodeId v : branch) {
      r_.push_back(v);
      expand(intersect(p, v), intersect(x, v));
      r_.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  }

  void emit() {
    if (out_.size() >= cap_)
      throw CliqueLimitExceeded("maximal clique enumeration exceeded cap of " + std::to_string(cap_));
    NodeSet c = r_;
    std::sort(c.begin(), c.end());
    out_.push_back(std::move(c));
  }

  const Graph& g_;
  std::size_t cap_;
  std::vector<NodeId> r_;
  std::vector<NodeSet> out_;
};

}  // namespace

std::vector<NodeSet> maximal_cliques(const Graph& g, std::size_t cap) {
  CliqueEnumerator e(g, cap);
  e.run();
  auto cliques = e.take();
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

Hypergraph derive_hypergraph(const Graph& g, std::size_t cap) {
  Hypergraph h(g.labels());
  for (auto [u, v] : g.edges()) h.add({u, v});
  for (auto& c : maximal_cliques(g, cap))
    if (c.size() >= 3) h.add(std::move(c));
  return h;
}

// --- incidence --------------------------------------------------------------

IncidenceMatrix::IncidenceMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::vector<std::size_t>> row_entries)
    : rows_(rows), cols_(cols), entries_(std::move(row_entries)) {
  if (entries_.size() != rows_) throw Error("incidence: row count mismatch");
}

int IncidenceMatrix::at(std::size_t i, std::size_t e) const {
  const auto& r = entries_.at(i);
  return std::binary_search(r.begin(), r.end(), e) ? 1 : 0;
}

std::vector<std::size_t> IncidenceMatrix::column_sums() const {
  std::vector<std::size_t> sums(cols_, 0);
  for (const auto& r : entries_)
    for (std::size_t e : r) ++sums[e];
  return sums;
}

std::vector<std::vector<int>> IncidenceMatrix::dense() const {
  std::vector<std::vector<int>> m(rows_, std::vector<int>(cols_, 0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t e : entries_[i]) m[i][e] = 1;
  return m;
}

IncidenceMatrix incidence(const Hypergraph& h) {
  if (h.num_edges() == 0) throw Error("incidence: hypergraph has no hyperedges");
  std::vector<std::vector<std::size_t>> rows(h.num_nodes());
  for (std::size_t e = 0; e < h.num_edges(); ++e)
    for (NodeId v : h.edge(e)) rows[v].push_back(e);
  return IncidenceMatrix(h.num_nodes(), h.num_edges(), std::move(rows));
}

void write_hypergraph(const Hypergraph& h, std::ostream& out) {
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << h.labels()[e[i]];
    out << '\n';
  }
}

}  // namespace hlbench
