#include "hlbench/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace hlbench {

namespace {

void check_pair(const Graph& g, NodeId i, NodeId j) {
  if (i == j) throw Error("dyad score requested for identical nodes");
  if (i >= g.num_nodes() || j >= g.num_nodes()) throw Error("dyad node out of range");
}

}  // namespace

std::size_t score_cn(const Graph& g_obs, NodeId i, NodeId j) {
  check_pair(g_obs, i, j);
  return count_common_neighbors(g_obs, i, j);
}

double score_aa(const Graph& g_obs, NodeId i, NodeId j) {
  check_pair(g_obs, i, j);
  double s = 0.0;
  // A common neighbor touches both i and j, so its degree is at least 2.
  for (NodeId w : common_neighbors(g_obs, i, j)) s += 1.0 / std::log(static_cast<double>(g_obs.degree(w)));
  return s;
}

LowRankAdjacency::LowRankAdjacency(Eigen::MatrixXd vectors, Eigen::VectorXd values)
    : vectors_(std::move(vectors)), values_(std::move(values)) {
  if (vectors_.cols() != values_.size()) throw Error("low-rank factor shape mismatch");
}

double LowRankAdjacency::entry(NodeId i, NodeId j) const {
  if (i >= vectors_.rows() || j >= vectors_.rows()) throw Error("matcomp: node out of range");
  return (vectors_.row(i).array() * vectors_.row(j).array() * values_.transpose().array()).sum();
}

double LowRankAdjacency::score(NodeId i, NodeId j) const { return std::clamp(entry(i, j), 0.0, 1.0); }

std::size_t default_matcomp_rank(std::size_t n) { return std::max<std::size_t>(1, std::min<std::size_t>(16, n > 0 ? n - 1 : 0)); }

LowRankAdjacency fit_matcomp(const Graph& g_obs, std::size_t rank) {
  const auto n = static_cast<Eigen::Index>(g_obs.num_nodes());
  if (rank < 1) throw Error("matcomp: rank must be >= 1");
  if (static_cast<Eigen::Index>(rank) > n) throw Error("matcomp: rank exceeds node count");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g_obs.edges()) a(u, v) = a(v, u) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw Error("matcomp: eigendecomposition failed");

  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double tol = 1e-9 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a_, Eigen::Index b_) {
    const double ma = std::abs(lambda(a_));
    const double mb = std::abs(lambda(b_));
    if (std::abs(ma - mb) > tol) return ma > mb;
    return lambda(a_) > lambda(b_);
  });
  const auto r = static_cast<Eigen::Index>(rank);
  Eigen::MatrixXd vecs(n, r);
  Eigen::VectorXd vals(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    vecs.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    vals(k) = lambda(order[static_cast<std::size_t>(k)]);
  }
  return LowRankAdjacency(std::move(vecs), std::move(vals));
}

double CommonNeighborsScorer::score(NodeId i, NodeId j) const { return static_cast<double>(score_cn(g_, i, j)); }

double AdamicAdarScorer::score(NodeId i, NodeId j) const { return score_aa(g_, i, j); }

double NullScorer::score(NodeId i, NodeId j) const {
  if (i == j) throw Error("dyad score requested for identical nodes");
  return kNullScore;
}

double MatrixCompletionScorer::score(NodeId i, NodeId j) const {
  if (i == j) throw Error("dyad score requested for identical nodes");
  return fit_.score(i, j);
}

double lift(const DyadScorer& scorer, std::span<const NodeId> s) {
  if (s.size() < 2) throw Error("lift: node set must have at least 2 nodes");
  if (s.size() == 2) return scorer.score(s[0], s[1]);
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      total += scorer.score(s[a], s[b]);
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

}  // namespace hlbench
