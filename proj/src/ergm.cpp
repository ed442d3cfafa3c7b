#include "hlbench/ergm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace hlbench {

std::string term_name(ErgmTermKind kind) {
  switch (kind) {
    case ErgmTermKind::edges: return "edges";
    case ErgmTermKind::gwdegree: return "gwdegree";
    case ErgmTermKind::gwesp: return "gwesp";
  }
  return "?";
}

ErgmSpec::ErgmSpec(std::vector<ErgmTerm> terms) : terms_(std::move(terms)) {
  if (std::none_of(terms_.begin(), terms_.end(), [](const ErgmTerm& t) { return t.kind == ErgmTermKind::edges; }))
    throw Error("ERGM spec must include the edges term");
  for (const auto& t : terms_)
    if (t.kind != ErgmTermKind::edges && !(t.decay > 0.0 && std::isfinite(t.decay)))
      throw Error("ERGM decay must be positive for " + term_name(t.kind));
}

ErgmSpec ErgmSpec::standard(double degree_decay, double esp_decay) {
  return ErgmSpec({{ErgmTermKind::edges, 0.0}, {ErgmTermKind::gwdegree, degree_decay}, {ErgmTermKind::gwesp, esp_decay}});
}

ErgmSpec ErgmSpec::edges_only() { return ErgmSpec({{ErgmTermKind::edges, 0.0}}); }

double geometric_weight(double tau, std::size_t k) {
  if (k == 0) return 0.0;
  return std::exp(tau) * (1.0 - std::pow(1.0 - std::exp(-tau), static_cast<double>(k)));
}

Eigen::VectorXd statistics(const Graph& g, const ErgmSpec& spec) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t t = 0; t < spec.size(); ++t) {
    const auto& term = spec.terms()[t];
    double value = 0.0;
    switch (term.kind) {
      case ErgmTermKind::edges:
        value = static_cast<double>(g.num_edges());
        break;
      case ErgmTermKind::gwdegree:
        for (NodeId v = 0; v < g.num_nodes(); ++v) value += geometric_weight(term.decay, g.degree(v));
        break;
      case ErgmTermKind::gwesp:
        for (auto [u, v] : g.edges()) value += geometric_weight(term.decay, count_common_neighbors(g, u, v));
        break;
    }
    s(static_cast<Eigen::Index>(t)) = value;
  }
  return s;
}

namespace {

/// |N(a) \ {skip} intersected with N(b)|.
std::size_t shared_excluding(const Graph& g, NodeId a, NodeId b, NodeId skip) {
  std::size_t c = count_common_neighbors(g, a, b);
  if (g.has_edge(a, skip) && g.has_edge(b, skip)) --c;
  return c;
}

}  // namespace

Eigen::VectorXd change_stats(const Graph& g, NodeId i, NodeId j, const ErgmSpec& spec) {
  if (i == j) throw Error("change_stats: dyad endpoints must differ");
  if (i >= g.num_nodes() || j >= g.num_nodes()) throw Error("change_stats: node out of range");
  const bool present = g.has_edge(i, j);
  const std::size_t deg_i = g.degree(i) - (present ? 1 : 0);
  const std::size_t deg_j = g.degree(j) - (present ? 1 : 0);

  Eigen::VectorXd d(static_cast<Eigen::Index>(spec.size()));
  std::vector<NodeId> partners;
  bool have_partners = false;
  for (std::size_t t = 0; t < spec.size(); ++t) {
    const auto& term = spec.terms()[t];
    double value = 0.0;
    switch (term.kind) {
      case ErgmTermKind::edges:
        value = 1.0;
        break;
      case ErgmTermKind::gwdegree: {
        // f(k+1) - f(k) = (1 - e^-tau)^k for each endpoint.
        const double q = 1.0 - std::exp(-term.decay);
        value = std::pow(q, static_cast<double>(deg_i)) + std::pow(q, static_cast<double>(deg_j));
        break;
      }
      case ErgmTermKind::gwesp: {
        if (!have_partners) {
          partners = common_neighbors(g, i, j);
          have_partners = true;
        }
        const double q = 1.0 - std::exp(-term.decay);
        // The toggled edge itself, with |partners| shared partners.
        value = geometric_weight(term.decay, partners.size());
        // Each edge to a common partner gains exactly one shared partner.
        for (NodeId w : partners) {
          value += std::pow(q, static_cast<double>(shared_excluding(g, i, w, j)));
          value += std::pow(q, static_cast<double>(shared_excluding(g, j, w, i)));
        }
        break;
      }
    }
    d(static_cast<Eigen::Index>(t)) = value;
  }
  return d;
}

namespace {

struct DesignRow {
  Eigen::VectorXd x;
  double count = 0.0;
  double positives = 0.0;
};

double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double penalized_loglik(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta, double ridge) {
  double ll = 0.0;
  for (const auto& r : rows) {
    const double z = r.x.dot(theta);
    // y log p + (1 - y) log(1 - p) summed over identical rows
    ll += r.positives * z - r.count * log1p_exp(z);
  }
  return ll - ridge * theta.squaredNorm();
}

Eigen::VectorXd penalized_gradient(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta, double ridge) {
  Eigen::VectorXd grad = -2.0 * ridge * theta;
  for (const auto& r : rows) grad += (r.positives - r.count * sigmoid(r.x.dot(theta))) * r.x;
  return grad;
}

}  // namespace

ErgmFit fit_mple(const Graph& g_obs, const ErgmSpec& spec, const MpleOptions& options) {
  const auto n = static_cast<NodeId>(g_obs.num_nodes());
  const std::size_t dyads = static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  if (g_obs.num_edges() == 0 || g_obs.num_edges() == dyads)
    throw Error("fit_mple: all dyads share one state; pseudolikelihood has no finite maximizer");

  // Identical covariate vectors are pooled into one weighted row.
  std::map<std::vector<double>, std::pair<double, double>> pooled;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      const Eigen::VectorXd d = change_stats(g_obs, i, j, spec);
      if (!d.allFinite()) throw Error("fit_mple: non-finite change statistic");
      auto& slot = pooled[std::vector<double>(d.data(), d.data() + d.size())];
      slot.first += 1.0;
      if (g_obs.has_edge(i, j)) slot.second += 1.0;
    }
  std::vector<DesignRow> rows;
  rows.reserve(pooled.size());
  for (const auto& [x, cy] : pooled)
    rows.push_back({Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), cy.first, cy.second});

  const auto p = static_cast<Eigen::Index>(spec.size());
  ErgmFit fit;
  fit.terms = spec.terms();
  fit.theta = Eigen::VectorXd::Zero(p);
  double objective = penalized_loglik(rows, fit.theta, options.ridge);

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    Eigen::VectorXd grad = -2.0 * options.ridge * fit.theta;
    Eigen::MatrixXd info = 2.0 * options.ridge * Eigen::MatrixXd::Identity(p, p);
    for (const auto& r : rows) {
      const double mu = sigmoid(r.x.dot(fit.theta));
      grad += (r.positives - r.count * mu) * r.x;
      info += (r.count * mu * (1.0 - mu)) * (r.x * r.x.transpose());
    }
    fit.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    fit.iterations = iter;
    if (!std::isfinite(fit.gradient_norm)) throw Error("fit_mple: non-finite gradient");
    if (fit.gradient_norm < options.gradient_tol) {
      fit.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    const Eigen::VectorXd step = info.ldlt().solve(grad);
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      const Eigen::VectorXd trial = fit.theta + scale * step;
      const double value = penalized_loglik(rows, trial, options.ridge);
      // Near the optimum the objective is flat to rounding; a full Newton
      // step that shrinks the gradient is then taken as progress.
      const bool accept =
          std::isfinite(value) &&
          (value > objective ||
           (halving == 0 && penalized_gradient(rows, trial, options.ridge).lpNorm<Eigen::Infinity>() < fit.gradient_norm));
      if (accept) {
        fit.theta = trial;
        objective = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;  // at numerical optimum; gradient_norm reports how close
  }
  if (!fit.theta.allFinite()) throw Error("fit_mple: non-finite parameter estimate");
  return fit;
}

double score_ergm(const ErgmFit& fit, const Graph& g_obs, NodeId i, NodeId j) {
  if (!fit.fitted()) throw Error("score_ergm: model has not been fitted");
  const ErgmSpec spec(fit.terms);
  return sigmoid(fit.theta.dot(change_stats(g_obs, i, j, spec)));
}

void write_fit_report(const ErgmFit& fit, std::ostream& out) {
  char buf[64];
  out << "term,theta,decay\n";
  for (std::size_t t = 0; t < fit.terms.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.10g", fit.theta(static_cast<Eigen::Index>(t)));
    out << term_name(fit.terms[t].kind) << ',' << buf << ',';
    if (fit.terms[t].kind != ErgmTermKind::edges) {
      std::snprintf(buf, sizeof buf, "%g", fit.terms[t].decay);
      out << buf;
    }
    out << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.3e", fit.gradient_norm);
  out << "# iterations=" << fit.iterations << '\n'
      << "# converged=" << (fit.converged ? "true" : "false") << '\n'
      << "# gradient_norm=" << buf << '\n';
}

ErgmScorer::ErgmScorer(ErgmFit fit, Graph g_obs) : fit_(std::move(fit)), g_(std::move(g_obs)) {
  if (!fit_.fitted()) throw Error("ErgmScorer: model has not been fitted");
}

double ErgmScorer::score(NodeId i, NodeId j) const { return score_ergm(fit_, g_, i, j); }

}  // namespace hlbench
