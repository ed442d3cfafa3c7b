import math

import pytest

import hlbench


def k4():
    g = hlbench.Graph(4)
    for u in range(4):
        for v in range(u + 1, 4):
            g.add_edge(u, v)
    return g


def test_parse_and_stats():
    g = hlbench.parse_edgelist("a b\nb c\nc a\nc d\n")
    assert (g.num_nodes, g.num_edges) == (4, 4)
    assert hlbench.graph_stats(g) == {"nodes": 4, "edges": 4, "density": "0.666700", "triangles": 1}


def test_parse_error_is_raised():
    with pytest.raises(ValueError):
        hlbench.parse_edgelist("a b c\n")


def test_cliques_and_hypergraph():
    assert hlbench.maximal_cliques(k4()) == [[0, 1, 2, 3]]
    h = hlbench.derive_hypergraph(k4())
    assert h.num_edges == 7
    assert h.contains([3, 0, 2, 1])
    assert h.clique_expansion() == k4()


def test_mask_is_deterministic():
    h = hlbench.derive_hypergraph(k4())
    observed, missing = hlbench.mask(h, 0.3, "MCAR", 5)
    assert len(missing) == 2
    assert sorted(observed + missing) == list(range(7))
    assert hlbench.mask(h, 0.3, "MCAR", 5) == (observed, missing)


def test_metrics():
    assert hlbench.roc_auc([0.8, 0.8, 0.2], [1, 0, 0]) == 0.75
    assert hlbench.roc_auc([0.5] * 4, [1, 0, 1, 0]) == 0.5
    f1, mcc = hlbench.f1_mcc([0.9, 0.9, 0.9, 0.9], [1, 1, 0, 0])
    assert f1 == pytest.approx(2 / 3)
    assert mcc == 0.0


def test_scorers_and_lift():
    g = hlbench.Graph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    g.add_edge(0, 2)
    assert hlbench.score_pair(g, 0, 1, "aa") == pytest.approx(1 / math.log(2))
    assert hlbench.lift(g, [0, 1, 2], "cn") == 1.0
    assert hlbench.lift(g, [0, 1, 2], "null") == 0.5


def test_fit_mple_edges_only():
    g = hlbench.Graph(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    fit = hlbench.fit_mple(g, edges_only=True)
    assert fit["converged"]
    assert fit["theta"]["edges"] == pytest.approx(math.log(2), abs=1e-4)


def test_run_trial():
    g = hlbench.parse_edgelist("\n".join(f"{u} {v}" for u in range(12) for v in range(u + 1, 12) if (u * v) % 3 != 1))
    r = hlbench.run_trial(g, "HP-Null", 0.2, "MCAR", 1)
    assert r["status"] == "ok"
    assert r["auc"] == 0.5
    a = hlbench.run_trial(g, "HP-AA", 0.2, "MCAR", 3)
    assert a == hlbench.run_trial(g, "HP-AA", 0.2, "MCAR", 3)


def test_registry():
    assert "bali2002" in hlbench.registry_keys()
    with pytest.raises(ValueError):
        hlbench.registry_load("no_such_network")
