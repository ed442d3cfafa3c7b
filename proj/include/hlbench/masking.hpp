#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hlbench/common.hpp"
#include "hlbench/graph.hpp"
#include "hlbench/hypergraph.hpp"

namespace hlbench {

enum class Mechanism { mcar, mnar };

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view s);

struct MaskOptions {
  /// MNAR weight is (max member degree)^exponent.
  double mnar_exponent = 1.0;
};

/// Partition of hyperedge ids into observed and held-out sets.
struct MaskSplit {
  std::vector<std::size_t> observed;  // ascending
  std::vector<std::size_t> missing;   // ascending
  double rho = 0.0;
  Mechanism mechanism = Mechanism::mcar;
  std::uint64_t seed = 0;

  friend bool operator==(const MaskSplit&, const MaskSplit&) = default;
};

/// Hides exactly round(rho * |E|) hyperedges, drawn without replacement
/// with probability proportional to a per-hyperedge weight (constant for
/// MCAR, max member degree in the clique expansion for MNAR).
MaskSplit mask(const Hypergraph& h, double rho, Mechanism mechanism, std::uint64_t seed,
               const MaskOptions& options = {});

/// Sampling weights used by mask() for each hyperedge.
std::vector<double> mask_weights(const Hypergraph& h, Mechanism mechanism, const MaskOptions& options = {});

/// Graph on the full node set where {u, v} is an edge iff an observed
/// hyperedge contains both.
Graph observed_graph(const Hypergraph& h, const MaskSplit& split);

/// The observed hyperedges as their own hypergraph (ids renumbered).
Hypergraph observed_hypergraph(const Hypergraph& h, const MaskSplit& split);

/// For each positive of size k, draws `ratio` uniform k-subsets of V that
/// are neither hyperedges of h nor previously drawn.
std::vector<NodeSet> sample_negatives(const Hypergraph& h, const std::vector<NodeSet>& positives,
                                      std::size_t ratio, std::uint64_t seed);

enum class Provenance { held_out_positive, sampled_negative };

struct Candidate {
  NodeSet nodes;
  int label = 0;
  Provenance provenance = Provenance::sampled_negative;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateSet {
  std::vector<Candidate> items;

  std::vector<int> labels() const;
  std::size_t positives() const;
};

/// Hyperlink task: positives are all held-out hyperedges, negatives are
/// size-matched non-hyperedges.
CandidateSet hp_candidates(const Hypergraph& h, const MaskSplit& split, std::size_t ratio, std::uint64_t seed);

/// Link task: positives are the held-out dyads, negatives are uniformly
/// drawn non-edges of the full graph g.
CandidateSet lp_candidates(const Graph& g, const Hypergraph& h, const MaskSplit& split, std::size_t ratio,
                           std::uint64_t seed);

/// Debug dump: `set;label;provenance` with node labels joined by '|'.
void write_candidates(const CandidateSet& c, const std::vector<std::string>& labels, std::ostream& out);

}  // namespace hlbench
