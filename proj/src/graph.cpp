#include "hlbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hlbench {

NodeSet& canonicalize(NodeSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

NodeSet canonical(NodeSet s) {
  canonicalize(s);
  return s;
}

Graph::Graph(std::size_t n) : adj_(n) {
  labels_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
}

Graph::Graph(std::vector<std::string> labels)
    : labels_(std::move(labels)), adj_(labels_.size()) {}

bool Graph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw Error("self-loop on node " + std::to_string(u));
  if (u >= adj_.size() || v >= adj_.size()) throw Error("edge endpoint out of range");
  auto& nu = adj_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return false;
  nu.insert(it, v);
  auto& nv = adj_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++num_edges_;
  return true;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId target = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), target);
}

std::optional<NodeId> Graph::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<NodeId>(i);
  return std::nullopt;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges_);
  for (NodeId u = 0; u < adj_.size(); ++u)
    for (NodeId v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
  std::vector<std::string> sub_labels;
  sub_labels.reserve(nodes.size());
  std::unordered_map<NodeId, NodeId> remap;
  for (NodeId v : nodes) {
    if (v >= adj_.size()) throw Error("induced: node out of range");
    if (!remap.emplace(v, static_cast<NodeId>(sub_labels.size())).second)
      throw Error("induced: repeated node");
    sub_labels.push_back(labels_[v]);
  }
  Graph sub(std::move(sub_labels));
  for (NodeId v : nodes)
    for (NodeId w : adj_[v]) {
      auto it = remap.find(w);
      if (it != remap.end() && remap[v] < it->second) sub.add_edge(remap[v], it->second);
    }
  return sub;
}

std::size_t count_common_neighbors(const Graph& g, NodeId u, NodeId v) {
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<NodeId> common_neighbors(const Graph& g, NodeId u, NodeId v) {
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// --- ingestion -------------------------------------------------------------

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_header_pair(const std::vector<std::string>& t) {
  static const std::set<std::pair<std::string, std::string>> known = {
      {"source", "target"}, {"from", "to"},         {"u", "v"},
      {"node1", "node2"},   {"sender", "recipient"}, {"src", "dst"}};
  return t.size() == 2 && known.count({lower(t[0]), lower(t[1])}) > 0;
}

}  // namespace

ParsedEdgelist parse_edgelist(std::istream& in, EdgelistFormat format) {
  std::vector<std::pair<std::string, std::string>> pairs;
  ParsedEdgelist result;
  std::string raw;
  std::size_t lineno = 0;
  std::size_t data_lines = 0;
  bool first_data_line = true;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto tokens = format == EdgelistFormat::csv ? split_csv(line) : split_ws(line);
    if (format == EdgelistFormat::csv && first_data_line && is_header_pair(tokens)) {
      first_data_line = false;
      continue;
    }
    first_data_line = false;
    if (tokens.size() != 2 || tokens[0].empty() || tokens[1].empty())
      throw ParseError(lineno, "expected 2 node tokens, got " + std::to_string(tokens.size()));
    ++data_lines;
    if (tokens[0] == tokens[1]) {
      ++result.self_loops_dropped;
      continue;
    }
    pairs.emplace_back(std::move(tokens[0]), std::move(tokens[1]));
  }
  if (data_lines == 0) throw Error("edgelist is empty");

  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  auto id_of = [&](const std::string& s) {
    auto [it, inserted] = ids.emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const NodeId u = id_of(a);
    edges.emplace_back(u, id_of(b));
  }
  result.graph = Graph(std::move(labels));
  for (auto [u, v] : edges)
    if (!result.graph.add_edge(u, v)) ++result.duplicates_collapsed;
  return result;
}

ParsedEdgelist parse_edgelist(const std::string& text, EdgelistFormat format) {
  std::istringstream in(text);
  return parse_edgelist(in, format);
}

void write_edgelist(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

MessageLog parse_message_log(std::istream& in) {
  MessageLog log;
  std::string raw;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto f = split_csv(line);
    if (!header_seen) {
      if (f.size() < 3 || lower(f[0]) != "sender" || lower(f[1]) != "recipient" ||
          lower(f[2]) != "weight" || (f.size() == 4 && lower(f[3]) != "timestamp") || f.size() > 4)
        throw ParseError(lineno, "expected header sender,recipient,weight[,timestamp]");
      header_seen = true;
      continue;
    }
    if (f.size() < 3 || f.size() > 4) throw ParseError(lineno, "expected 3 or 4 fields");
    MessageRecord rec{f[0], f[1], 0, std::nullopt};
    if (rec.sender.empty() || rec.recipient.empty()) throw ParseError(lineno, "empty node token");
    try {
      std::size_t pos = 0;
      const long long w = std::stoll(f[2], &pos);
      if (pos != f[2].size() || w < 1) throw std::invalid_argument("weight");
      rec.weight = static_cast<std::uint64_t>(w);
    } catch (const std::exception&) {
      throw ParseError(lineno, "weight must be a positive integer");
    }
    if (f.size() == 4 && !f[3].empty()) rec.timestamp = f[3];
    log.records.push_back(std::move(rec));
  }
  if (!header_seen) throw Error("message log is empty");
  return log;
}

ProjectedGraph project_messages(const MessageLog& log) {
  if (log.records.empty()) throw Error("message log has no records");
  ProjectedGraph out;
  std::map<std::string, double> volume;
  for (const auto& r : log.records) {
    if (r.sender == r.recipient) {
      ++out.self_messages_dropped;
      continue;
    }
    volume[r.sender] += static_cast<double>(r.weight);
    volume[r.recipient] += static_cast<double>(r.weight);
  }
  std::vector<std::string> labels;
  std::map<std::string, NodeId> ids;
  for (const auto& [label, vol] : volume) {
    ids.emplace(label, static_cast<NodeId>(labels.size()));
    labels.push_back(label);
    out.volume.push_back(vol);
  }
  out.graph = Graph(std::move(labels));
  for (const auto& r : log.records)
    if (r.sender != r.recipient) out.graph.add_edge(ids.at(r.sender), ids.at(r.recipient));
  return out;
}

// --- statistics ------------------------------------------------------------

std::size_t count_triangles(const Graph& g) {
  std::size_t t = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      for (NodeId w : g.neighbors(v))
        if (w > v && g.has_edge(u, w)) ++t;
    }
  return t;
}

SummaryStats graph_stats(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error("graph_stats needs at least 2 nodes");
  SummaryStats s;
  s.nodes = n;
  s.edges = g.num_edges();
  s.density = 2.0 * static_cast<double>(s.edges) / (static_cast<double>(n) * static_cast<double>(n - 1));
  s.triangles = count_triangles(g);
  return s;
}

std::string format_density(double density) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", std::round(density * 1e4) / 1e4);
  return buf;
}

Graph core_k(const Graph& g, std::span<const double> volumes, std::size_t k) {
  if (k < 1) throw Error("core_k: k must be >= 1");
  if (volumes.size() != g.num_nodes()) throw Error("core_k: volume vector size mismatch");
  if (g.num_nodes() <= k) return g;
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (volumes[a] != volumes[b]) return volumes[a] > volumes[b];
    return g.label(a) < g.label(b);
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return g.induced(order);
}

std::vector<double> degree_volumes(const Graph& g) {
  std::vector<double> v(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) v[u] = static_cast<double>(g.degree(u));
  return v;
}

}  // namespace hlbench
