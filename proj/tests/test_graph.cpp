#include <doctest.h>

#include <sstream>

#include "hlbench/graph.hpp"
#include "oracles.hpp"

using namespace hlbench;

TEST_CASE("parse_edgelist builds a path graph") {
  const auto p = parse_edgelist("a b\nb c", EdgelistFormat::plain);
  CHECK(p.graph.num_nodes() == 3);
  CHECK(p.graph.num_edges() == 2);
  CHECK(p.graph.label(0) == "a");
}

TEST_CASE("parse_edgelist collapses duplicates and reversed duplicates") {
  const auto p = parse_edgelist("a b\nb a\na b", EdgelistFormat::plain);
  CHECK(p.graph.num_nodes() == 2);
  CHECK(p.graph.num_edges() == 1);
  CHECK(p.duplicates_collapsed == 2);
}

TEST_CASE("parse_edgelist drops self-loops and their nodes") {
  const auto p = parse_edgelist("a a\nb c", EdgelistFormat::plain);
  CHECK(p.graph.num_nodes() == 2);
  CHECK(p.graph.num_edges() == 1);
  CHECK(p.self_loops_dropped == 1);
  CHECK_FALSE(p.graph.find("a").has_value());
}

TEST_CASE("parse_edgelist comments, csv header and errors") {
  const auto p = parse_edgelist("# comment\nsource,target\nx, y\n\ny,z\n", EdgelistFormat::csv);
  CHECK(p.graph.num_nodes() == 3);
  CHECK(p.graph.num_edges() == 2);

  CHECK_THROWS_AS(parse_edgelist("", EdgelistFormat::plain), Error);
  CHECK_THROWS_AS(parse_edgelist("# only comments\n", EdgelistFormat::plain), Error);
  try {
    parse_edgelist("a b\nb c d\n", EdgelistFormat::plain);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_edgelist("a,b,c\n", EdgelistFormat::csv), ParseError);
}

TEST_CASE("write_edgelist then parse_edgelist preserves the edge set") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = oracle::random_graph(12, 0.3, seed);
    if (g.num_edges() == 0) continue;
    std::stringstream ss;
    write_edgelist(g, ss);
    const Graph back = parse_edgelist(ss.str(), EdgelistFormat::plain).graph;
    std::set<std::pair<std::string, std::string>> a, b;
    for (auto [u, v] : g.edges()) a.insert(std::minmax(g.label(u), g.label(v)));
    for (auto [u, v] : back.edges()) b.insert(std::minmax(back.label(u), back.label(v)));
    CHECK(a == b);
  }
}

TEST_CASE("project_messages symmetrizes and sums volume") {
  MessageLog log{{{"a", "b", 3, {}}, {"b", "a", 1, {}}}};
  auto p = project_messages(log);
  CHECK(p.graph.num_edges() == 1);
  CHECK(p.volume == std::vector<double>{4, 4});

  log = MessageLog{{{"a", "b", 1, {}}, {"a", "c", 1, {}}}};
  p = project_messages(log);
  CHECK(p.graph.num_edges() == 2);
  CHECK(p.volume[*p.graph.find("a")] == 2.0);

  log = MessageLog{{{"a", "a", 5, {}}}};
  p = project_messages(log);
  CHECK(p.graph.num_edges() == 0);
  CHECK(p.self_messages_dropped == 1);

  CHECK_THROWS_AS(project_messages(MessageLog{}), Error);
}

TEST_CASE("project_messages does not depend on record order") {
  MessageLog log{{{"d", "a", 2, {}}, {"b", "c", 1, {}}, {"a", "b", 4, {}}, {"c", "a", 1, {}}, {"b", "d", 3, {}}}};
  const auto ref = project_messages(log);
  std::sort(log.records.begin(), log.records.end(), [](auto& x, auto& y) { return x.recipient < y.recipient; });
  for (int perm = 0; perm < 10; ++perm) {
    std::next_permutation(log.records.begin(), log.records.end(),
                          [](auto& x, auto& y) { return x.sender + x.recipient < y.sender + y.recipient; });
    const auto p = project_messages(log);
    CHECK(p.graph == ref.graph);
    CHECK(p.volume == ref.volume);
  }
}

TEST_CASE("parse_message_log reads header, weights and timestamps") {
  std::istringstream in("sender,recipient,weight,timestamp\na,b,2,2001-01-01\nb,c,1,\n");
  const auto log = parse_message_log(in);
  REQUIRE(log.records.size() == 2);
  CHECK(log.records[0].weight == 2);
  CHECK(log.records[0].timestamp == "2001-01-01");
  CHECK_FALSE(log.records[1].timestamp.has_value());

  std::istringstream bad_weight("sender,recipient,weight\na,b,0\n");
  CHECK_THROWS_AS(parse_message_log(bad_weight), ParseError);
  std::istringstream bad_header("from,to\na,b\n");
  CHECK_THROWS_AS(parse_message_log(bad_header), ParseError);
}

TEST_CASE("graph_stats on K4 and small graphs") {
  Graph k4(4);
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v = u + 1; v < 4; ++v) k4.add_edge(u, v);
  const auto s = graph_stats(k4);
  CHECK(s.nodes == 4);
  CHECK(s.edges == 6);
  CHECK(s.density == 1.0);
  CHECK(s.triangles == 4);
  CHECK(format_density(s.density) == "1.000000");
  CHECK_THROWS_AS(graph_stats(Graph(1)), Error);
}

TEST_CASE("density is rounded to four places and printed with six") {
  CHECK(format_density(24.0 / 105.0) == "0.228600");
  CHECK(format_density(15.0 / 36.0) == "0.416700");
  CHECK(format_density(23.0 / 66.0) == "0.348500");
  CHECK(format_density(85.0 / 1225.0) == "0.069400");
  CHECK(format_density(16.0 / 91.0) == "0.175800");
  CHECK(format_density(543.0 / 90525.0) == "0.006000");
}

TEST_CASE("triangle count equals trace(A^3)/6") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 5 + seed % 46;
    const Graph g = oracle::random_graph(n, 0.05 + 0.01 * static_cast<double>(seed % 20), seed);
    CHECK(count_triangles(g) == oracle::triangles_by_trace(g));
  }
}

TEST_CASE("core_k") {
  SUBCASE("n <= k returns the graph unchanged") {
    const Graph g = oracle::random_graph(50, 0.1, 3);
    CHECK(core_k(g, degree_volumes(g), 100) == g);
  }
  SUBCASE("star keeps the hub") {
    Graph star(std::vector<std::string>{"h", "x", "y", "z"});
    for (NodeId v = 1; v < 4; ++v) star.add_edge(0, v);
    const Graph c = core_k(star, std::vector<double>{10, 1, 1, 1}, 1);
    CHECK(c.num_nodes() == 1);
    CHECK(c.num_edges() == 0);
    CHECK(c.label(0) == "h");
  }
  SUBCASE("ties go to the smallest labels") {
    Graph g(std::vector<std::string>{"d", "b", "c", "a"});
    g.add_edge(0, 1);
    const Graph c = core_k(g, std::vector<double>{1, 1, 1, 1}, 2);
    REQUIRE(c.num_nodes() == 2);
    std::set<std::string> labels(c.labels().begin(), c.labels().end());
    CHECK(labels == std::set<std::string>{"a", "b"});
  }
  CHECK_THROWS_AS(core_k(Graph(3), std::vector<double>{1, 2, 3}, 0), Error);
}

TEST_CASE("Graph rejects self-loops and reports membership") {
  Graph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), Error);
  CHECK(g.add_edge(0, 2));
  CHECK_FALSE(g.add_edge(2, 0));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
}
