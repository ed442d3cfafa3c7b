#pragma once

#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hlbench/common.hpp"
#include "hlbench/graph.hpp"

namespace hlbench {

std::size_t score_cn(const Graph& g_obs, NodeId i, NodeId j);

/// Adamic-Adar with the natural logarithm.
double score_aa(const Graph& g_obs, NodeId i, NodeId j);

inline constexpr double kNullScore = 0.5;
inline double score_null(NodeId, NodeId) { return kNullScore; }

/// Truncated symmetric spectral reconstruction A ~ U diag(lambda) U^T,
/// keeping the `rank` eigenpairs of largest magnitude (positive first on
/// magnitude ties).
class LowRankAdjacency {
 public:
  LowRankAdjacency(Eigen::MatrixXd vectors, Eigen::VectorXd values);

  Eigen::Index rank() const { return values_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  /// Reconstructed entry, unclamped.
  double entry(NodeId i, NodeId j) const;
  /// Entry clamped to [0, 1].
  double score(NodeId i, NodeId j) const;

 private:
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
};

LowRankAdjacency fit_matcomp(const Graph& g_obs, std::size_t rank);

/// Default rank min(16, n - 1), at least 1.
std::size_t default_matcomp_rank(std::size_t n);

/// Symmetric dyad scorer built on an observed graph.
class DyadScorer {
 public:
  virtual ~DyadScorer() = default;
  virtual double score(NodeId i, NodeId j) const = 0;
  virtual std::string name() const = 0;
  /// True when scores are not already probability-like and need min-max
  /// normalization before thresholding.
  virtual bool unbounded() const { return true; }
};

class CommonNeighborsScorer final : public DyadScorer {
 public:
  explicit CommonNeighborsScorer(Graph g_obs) : g_(std::move(g_obs)) {}
  double score(NodeId i, NodeId j) const override;
  std::string name() const override { return "CN"; }

 private:
  Graph g_;
};

class AdamicAdarScorer final : public DyadScorer {
 public:
  explicit AdamicAdarScorer(Graph g_obs) : g_(std::move(g_obs)) {}
  double score(NodeId i, NodeId j) const override;
  std::string name() const override { return "AA"; }

 private:
  Graph g_;
};

class NullScorer final : public DyadScorer {
 public:
  double score(NodeId i, NodeId j) const override;
  std::string name() const override { return "Null"; }
  bool unbounded() const override { return false; }
};

class MatrixCompletionScorer final : public DyadScorer {
 public:
  MatrixCompletionScorer(const Graph& g_obs, std::size_t rank) : fit_(fit_matcomp(g_obs, rank)), n_(g_obs.num_nodes()) {}
  double score(NodeId i, NodeId j) const override;
  std::string name() const override { return "MatComp"; }
  const LowRankAdjacency& fit() const { return fit_; }

 private:
  LowRankAdjacency fit_;
  std::size_t n_;
};

/// Mean of the dyad scores over all pairs of S (|S| >= 2).
double lift(const DyadScorer& scorer, std::span<const NodeId> s);

}  // namespace hlbench
