#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hlbench/ergm.hpp"
#include "oracles.hpp"

using namespace hlbench;

namespace {

Graph complete(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

double logit(double p) { return std::log(p / (1 - p)); }

}  // namespace

TEST_CASE("ErgmSpec validation") {
  CHECK_THROWS_AS(ErgmSpec({{ErgmTermKind::gwesp, 0.5}}), Error);
  CHECK_THROWS_AS(ErgmSpec({{ErgmTermKind::edges, 0}, {ErgmTermKind::gwdegree, 0.0}}), Error);
  CHECK(ErgmSpec::standard().size() == 3);
}

TEST_CASE("statistics on K3") {
  const Graph k3 = complete(3);
  for (double tau : {0.25, 0.5, 1.0}) {
    const ErgmSpec spec = ErgmSpec::standard(tau, tau);
    const auto s = statistics(k3, spec);
    CHECK(s(0) == 3.0);
    CHECK(std::abs(s(2) - 3.0) < 1e-9);
    CHECK(std::abs(s(2) - oracle::gwesp_histogram(k3, tau)) < 1e-12);
  }
  const double expected = 3 * std::exp(0.5) * (1 - std::pow(1 - std::exp(-0.5), 2));
  const auto s = statistics(k3, ErgmSpec::standard());
  CHECK(s(1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s(1) == doctest::Approx(oracle::gwdegree_histogram(k3, 0.5)).epsilon(1e-12));
}

TEST_CASE("statistics agree with histogram oracles on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = oracle::random_graph(15, 0.3, seed);
    const auto s = statistics(g, ErgmSpec::standard(0.7, 0.3));
    CHECK(s(1) == doctest::Approx(oracle::gwdegree_histogram(g, 0.7)).epsilon(1e-12));
    CHECK(s(2) == doctest::Approx(oracle::gwesp_histogram(g, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("change_stats basics") {
  const ErgmSpec spec = ErgmSpec::standard();
  const Graph empty(5);
  const auto d = change_stats(empty, 1, 3, spec);
  CHECK(d(0) == 1.0);
  CHECK(d(2) == 0.0);
  CHECK_THROWS_AS(change_stats(empty, 2, 2, spec), Error);
}

TEST_CASE("change_stats equals the toggle-and-recompute oracle") {
  const ErgmSpec spec = ErgmSpec::standard(0.5, 0.8);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const Graph g = oracle::random_graph(n, 0.2 + 0.03 * static_cast<double>(seed), 500 + seed);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) {
        const Eigen::VectorXd expected = statistics(oracle::with_dyad(g, i, j, true), spec) -
                              statistics(oracle::with_dyad(g, i, j, false), spec);
        const auto got = change_stats(g, i, j, spec);
        CHECK((got - expected).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(got(0) == 1.0);
      }
  }
}

TEST_CASE("edges-only MPLE recovers logit(density)") {
  Graph k3_minus(3);
  k3_minus.add_edge(0, 1);
  k3_minus.add_edge(1, 2);
  const ErgmFit small = fit_mple(k3_minus, ErgmSpec::edges_only());
  CHECK(small.converged);
  CHECK(small.theta(0) == doctest::Approx(std::log(2.0)).epsilon(1e-4));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = oracle::random_graph(40, 0.15, 70 + seed);
    const ErgmFit fit = fit_mple(g, ErgmSpec::edges_only());
    const double density = 2.0 * static_cast<double>(g.num_edges()) / (40.0 * 39.0);
    CHECK(fit.converged);
    CHECK(std::abs(fit.theta(0) - logit(density)) < 1e-6);
    // every dyad then scores the density
    CHECK(score_ergm(fit, g, 0, 1) == doctest::Approx(density).epsilon(1e-6));
  }
}

TEST_CASE("MPLE errors on degenerate graphs") {
  CHECK_THROWS_AS(fit_mple(complete(5), ErgmSpec::standard()), Error);
  CHECK_THROWS_AS(fit_mple(Graph(5), ErgmSpec::standard()), Error);
}

TEST_CASE("standard MPLE converges and scores lie in (0, 1)") {
  const Graph g = oracle::random_graph(30, 0.2, 12);
  const ErgmFit fit = fit_mple(g, ErgmSpec::standard());
  CHECK(fit.converged);
  CHECK(fit.gradient_norm < 1e-8);
  CHECK(fit.theta.allFinite());
  ErgmScorer scorer(fit, g);
  for (NodeId i = 0; i < 30; ++i)
    for (NodeId j = i + 1; j < 30; ++j) {
      const double p = scorer.score(i, j);
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  std::ostringstream out;
  write_fit_report(fit, out);
  CHECK(out.str().rfind("term,theta,decay\nedges,", 0) == 0);
  CHECK(out.str().find("# converged=true") != std::string::npos);
}

TEST_CASE("score_ergm rises with closed triangles when the gwesp effect is positive") {
  ErgmFit fit;
  fit.terms = ErgmSpec({{ErgmTermKind::edges, 0}, {ErgmTermKind::gwesp, 0.5}}).terms();
  fit.theta = Eigen::Vector2d(-2.0, 1.0);
  // 0 and 1 share two partners; 0 and 5 share one.
  Graph g(6);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 3);
  g.add_edge(5, 4);
  g.add_edge(0, 4);
  CHECK(score_ergm(fit, g, 0, 1) > score_ergm(fit, g, 0, 5));

  CHECK_THROWS_AS(score_ergm(ErgmFit{}, g, 0, 1), Error);
}
