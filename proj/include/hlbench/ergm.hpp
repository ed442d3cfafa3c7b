#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hlbench/graph.hpp"
#include "hlbench/scorers.hpp"

namespace hlbench {

enum class ErgmTermKind { edges, gwdegree, gwesp };

struct ErgmTerm {
  ErgmTermKind kind = ErgmTermKind::edges;
  /// Decay tau; ignored for edges.
  double decay = 0.0;
};

std::string term_name(ErgmTermKind kind);

/// Ordered model terms. Must contain `edges`; decays must be positive.
class ErgmSpec {
 public:
  explicit ErgmSpec(std::vector<ErgmTerm> terms);

  /// edges + gwdegree(0.5) + gwesp(0.5).
  static ErgmSpec standard(double degree_decay = 0.5, double esp_decay = 0.5);
  static ErgmSpec edges_only();

  const std::vector<ErgmTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<ErgmTerm> terms_;
};

/// Geometric weight e^tau * (1 - (1 - e^-tau)^k); zero at k = 0.
double geometric_weight(double tau, std::size_t k);

/// Sufficient statistics s(G) in the term order of `spec`.
Eigen::VectorXd statistics(const Graph& g, const ErgmSpec& spec);

/// s(G with {i,j}) - s(G without {i,j}), all other dyads fixed.
Eigen::VectorXd change_stats(const Graph& g, NodeId i, NodeId j, const ErgmSpec& spec);

struct MpleOptions {
  double ridge = 1e-6;
  double gradient_tol = 1e-8;
  int max_iterations = 100;
};

struct ErgmFit {
  Eigen::VectorXd theta;
  std::vector<ErgmTerm> terms;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;

  bool fitted() const { return theta.size() > 0 && theta.size() == static_cast<Eigen::Index>(terms.size()); }
};

/// Maximum pseudolikelihood: ridge-penalized logistic regression of every
/// dyad state on its change statistics, solved by damped Newton steps.
ErgmFit fit_mple(const Graph& g_obs, const ErgmSpec& spec, const MpleOptions& options = {});

/// sigmoid(theta . change_stats(g_obs, i, j)).
double score_ergm(const ErgmFit& fit, const Graph& g_obs, NodeId i, NodeId j);

/// `term,theta,decay` rows followed by a `#` diagnostics block.
void write_fit_report(const ErgmFit& fit, std::ostream& out);

class ErgmScorer final : public DyadScorer {
 public:
  ErgmScorer(ErgmFit fit, Graph g_obs);
  double score(NodeId i, NodeId j) const override;
  std::string name() const override { return "ERGM"; }
  bool unbounded() const override { return false; }
  const ErgmFit& fit() const { return fit_; }

 private:
  ErgmFit fit_;
  Graph g_;
};

}  // namespace hlbench
