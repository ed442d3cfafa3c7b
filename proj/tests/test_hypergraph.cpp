#include <doctest.h>

#include <sstream>

#include "hlbench/hypergraph.hpp"
#include "oracles.hpp"

using namespace hlbench;

namespace {

Graph complete(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("maximal_cliques on small fixtures") {
  CHECK(maximal_cliques(complete(4)) == std::vector<NodeSet>{{0, 1, 2, 3}});

  Graph tri_pendant(4);
  tri_pendant.add_edge(0, 1);
  tri_pendant.add_edge(1, 2);
  tri_pendant.add_edge(0, 2);
  tri_pendant.add_edge(2, 3);
  CHECK(maximal_cliques(tri_pendant) == std::vector<NodeSet>{{0, 1, 2}, {2, 3}});

  Graph c5(5);
  for (NodeId v = 0; v < 5; ++v) c5.add_edge(v, (v + 1) % 5);
  CHECK(maximal_cliques(c5) == std::vector<NodeSet>{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}});
}

TEST_CASE("maximal_cliques equals the exhaustive subset oracle") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 13;
    const Graph g = oracle::random_graph(n, 0.2 + 0.1 * static_cast<double>(seed % 6), 1000 + seed);
    CHECK(maximal_cliques(g) == oracle::maximal_cliques_exhaustive(g));
  }
}

TEST_CASE("maximal_cliques enforces the cap") {
  CHECK_THROWS_AS(maximal_cliques(oracle::random_graph(30, 0.5, 1), 5), CliqueLimitExceeded);
}

TEST_CASE("derive_hypergraph on a triangle and a path") {
  const Hypergraph k3 = derive_hypergraph(complete(3));
  CHECK(k3.edges() == std::vector<NodeSet>{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}});

  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  CHECK(derive_hypergraph(path).edges() == std::vector<NodeSet>{{0, 1}, {1, 2}});
}

TEST_CASE("derive_hypergraph: dyads biject with edges, larger hyperedges are maximal cliques") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = oracle::random_graph(12, 0.35, 77 + seed);
    const Hypergraph h = derive_hypergraph(g);
    std::size_t dyads = 0;
    for (const auto& e : h.edges()) {
      if (e.size() == 2) {
        ++dyads;
        CHECK(g.has_edge(e[0], e[1]));
        continue;
      }
      for (std::size_t a = 0; a < e.size(); ++a)
        for (std::size_t b = a + 1; b < e.size(); ++b) CHECK(g.has_edge(e[a], e[b]));
      for (NodeId w = 0; w < g.num_nodes(); ++w) {
        if (std::binary_search(e.begin(), e.end(), w)) continue;
        bool all = true;
        for (NodeId v : e) all = all && g.has_edge(v, w);
        CHECK_FALSE(all);
      }
    }
    CHECK(dyads == g.num_edges());
    CHECK(h.clique_expansion() == g);
  }
}

TEST_CASE("incidence matrix") {
  const auto inc = incidence(derive_hypergraph(complete(3)));
  CHECK(inc.rows() == 3);
  CHECK(inc.cols() == 4);
  for (std::size_t i = 0; i < 3; ++i) CHECK(inc.at(i, 3) == 1);

  Hypergraph single(std::vector<std::string>{"a", "b", "c"});
  single.add({0, 1});
  const auto d = incidence(single).dense();
  CHECK(d == std::vector<std::vector<int>>{{1}, {1}, {0}});

  const Hypergraph h = derive_hypergraph(oracle::random_graph(15, 0.4, 5));
  const auto sums = incidence(h).column_sums();
  for (std::size_t e = 0; e < h.num_edges(); ++e) CHECK(sums[e] == h.edge(e).size());

  CHECK_THROWS_AS(incidence(Hypergraph(std::vector<std::string>{"a", "b"})), Error);
}

TEST_CASE("Hypergraph canonicalizes and rejects bad hyperedges") {
  Hypergraph h(std::vector<std::string>{"a", "b", "c"});
  CHECK(h.add({2, 0}).value() == 0);
  CHECK_FALSE(h.add({0, 2}).has_value());
  CHECK(h.contains({0, 2}));
  CHECK_THROWS_AS(h.add({1}), Error);
  CHECK_THROWS_AS(h.add({1, 7}), Error);
  std::ostringstream out;
  write_hypergraph(h, out);
  CHECK(out.str() == "a,c\n");
}
