#include "hlbench/masking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "hlbench/rng.hpp"

namespace hlbench {

std::string_view to_string(Mechanism m) { return m == Mechanism::mcar ? "MCAR" : "MNAR"; }

Mechanism parse_mechanism(std::string_view s) {
  std::string t(s);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "mcar") return Mechanism::mcar;
  if (t == "mnar") return Mechanism::mnar;
  throw Error("unknown missingness mechanism '" + std::string(s) + "' (expected mcar or mnar)");
}

std::vector<double> mask_weights(const Hypergraph& h, Mechanism mechanism, const MaskOptions& options) {
  std::vector<double> w(h.num_edges(), 1.0);
  if (mechanism == Mechanism::mcar) return w;
  const Graph g = h.clique_expansion();
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    std::size_t max_deg = 0;
    for (NodeId v : h.edge(e)) max_deg = std::max(max_deg, g.degree(v));
    w[e] = std::pow(static_cast<double>(max_deg), options.mnar_exponent);
  }
  return w;
}

MaskSplit mask(const Hypergraph& h, double rho, Mechanism mechanism, std::uint64_t seed,
               const MaskOptions& options) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error("mask: rho must lie in (0, 1)");
  const std::size_t total = h.num_edges();
  if (total < 2) throw Error("mask: need at least 2 hyperedges");
  const auto m = static_cast<std::size_t>(std::llround(rho * static_cast<double>(total)));
  if (m == 0 || m == total)
    throw Error("mask: degenerate split (" + std::to_string(m) + " of " + std::to_string(total) +
                " hyperedges hidden)");

  // Efraimidis-Spirakis: the m largest keys log(u)/w form a successive
  // weighted sample without replacement.
  const auto weights = mask_weights(h, mechanism, options);
  Rng rng(derive_seed(seed, 0x6d61736b));
  std::vector<std::pair<double, std::size_t>> keys(total);
  for (std::size_t e = 0; e < total; ++e) {
    if (!(weights[e] > 0.0) || !std::isfinite(weights[e])) throw Error("mask: non-positive weight");
    keys[e] = {std::log(rng.uniform_open()) / weights[e], e};
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(m), keys.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

  MaskSplit split;
  split.rho = rho;
  split.mechanism = mechanism;
  split.seed = seed;
  std::vector<char> hidden(total, 0);
  for (std::size_t i = 0; i < m; ++i) hidden[keys[i].second] = 1;
  for (std::size_t e = 0; e < total; ++e) (hidden[e] ? split.missing : split.observed).push_back(e);
  return split;
}

Graph observed_graph(const Hypergraph& h, const MaskSplit& split) {
  Graph g(h.labels());
  for (std::size_t id : split.observed) {
    const auto& e = h.edge(id);
    for (std::size_t a = 0; a < e.size(); ++a)
      for (std::size_t b = a + 1; b < e.size(); ++b) g.add_edge(e[a], e[b]);
  }
  return g;
}

Hypergraph observed_hypergraph(const Hypergraph& h, const MaskSplit& split) { return h.select(split.observed); }

namespace {

/// Uniform k-subset of {0..n-1} (Floyd's algorithm), sorted.
NodeSet random_subset(Rng& rng, std::size_t n, std::size_t k) {
  NodeSet s;
  s.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<NodeId>(rng.below(j + 1));
    if (std::find(s.begin(), s.end(), t) == s.end())
      s.push_back(t);
    else
      s.push_back(static_cast<NodeId>(j));
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::vector<NodeSet> sample_negatives(const Hypergraph& h, const std::vector<NodeSet>& positives,
                                      std::size_t ratio, std::uint64_t seed) {
  if (positives.empty()) throw Error("sample_negatives: no positives");
  if (ratio == 0) throw Error("sample_negatives: ratio must be >= 1");
  const std::size_t n = h.num_nodes();
  const std::size_t max_attempts = 10'000 * ratio;
  Rng rng(derive_seed(seed, 0x6e6567));
  std::unordered_set<NodeSet, NodeSetHash> emitted;
  std::vector<NodeSet> out;
  out.reserve(positives.size() * ratio);
  for (const auto& pos : positives) {
    const std::size_t k = pos.size();
    if (k < 2 || k > n)
      throw Error("sample_negatives: cannot draw a size-" + std::to_string(k) + " set from " +
                  std::to_string(n) + " nodes");
    for (std::size_t r = 0; r < ratio; ++r) {
      std::size_t attempts = 0;
      for (;;) {
        if (attempts++ >= max_attempts)
          throw Error("sample_negatives: no fresh non-hyperedge of size " + std::to_string(k) + " after " +
                      std::to_string(max_attempts) + " attempts (graph too dense at that size)");
        NodeSet s = random_subset(rng, n, k);
        if (h.contains(s) || emitted.count(s)) continue;
        emitted.insert(s);
        out.push_back(std::move(s));
        break;
      }
    }
  }
  return out;
}

std::vector<int> CandidateSet::labels() const {
  std::vector<int> y;
  y.reserve(items.size());
  for (const auto& c : items) y.push_back(c.label);
  return y;
}

std::size_t CandidateSet::positives() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const Candidate& c) { return c.label == 1; }));
}

CandidateSet hp_candidates(const Hypergraph& h, const MaskSplit& split, std::size_t ratio, std::uint64_t seed) {
  CandidateSet c;
  std::vector<NodeSet> positives;
  for (std::size_t id : split.missing) {
    positives.push_back(h.edge(id));
    c.items.push_back({h.edge(id), 1, Provenance::held_out_positive});
  }
  for (auto& s : sample_negatives(h, positives, ratio, seed))
    c.items.push_back({std::move(s), 0, Provenance::sampled_negative});
  return c;
}

CandidateSet lp_candidates(const Graph& g, const Hypergraph& h, const MaskSplit& split, std::size_t ratio,
                           std::uint64_t seed) {
  CandidateSet c;
  for (std::size_t id : split.missing)
    if (h.edge(id).size() == 2) c.items.push_back({h.edge(id), 1, Provenance::held_out_positive});
  if (c.items.empty()) throw Error("lp_candidates: no size-2 hyperedges were held out");
  if (ratio == 0) throw Error("lp_candidates: ratio must be >= 1");

  std::vector<std::pair<NodeId, NodeId>> non_edges;
  const auto n = static_cast<NodeId>(g.num_nodes());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (!g.has_edge(u, v)) non_edges.emplace_back(u, v);
  const std::size_t want = ratio * c.items.size();
  if (non_edges.size() < want)
    throw Error("lp_candidates: only " + std::to_string(non_edges.size()) + " non-edges for " +
                std::to_string(want) + " negatives");

  Rng rng(derive_seed(seed, 0x6c70));
  for (std::size_t i = 0; i < want; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(non_edges.size() - i));
    std::swap(non_edges[i], non_edges[j]);
    c.items.push_back({{non_edges[i].first, non_edges[i].second}, 0, Provenance::sampled_negative});
  }
  return c;
}

void write_candidates(const CandidateSet& c, const std::vector<std::string>& labels, std::ostream& out) {
  out << "set;label;provenance\n";
  for (const auto& item : c.items) {
    for (std::size_t i = 0; i < item.nodes.size(); ++i) out << (i ? "|" : "") << labels.at(item.nodes[i]);
    out << ';' << item.label << ';'
        << (item.provenance == Provenance::held_out_positive ? "held_out_positive" : "sampled_negative") << '\n';
  }
}

}  // namespace hlbench
