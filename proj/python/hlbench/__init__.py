"""Hyperlink prediction benchmark: C++ core bindings."""

from ._core import (
    Graph,
    HlbenchError,
    Hypergraph,
    derive_hypergraph,
    f1_mcc,
    fit_mple,
    graph_stats,
    lift,
    mask,
    maximal_cliques,
    parse_edgelist,
    registry_keys,
    registry_load,
    roc_auc,
    run_experiment,
    run_trial,
    score_pair,
)

__all__ = [
    "Graph",
    "HlbenchError",
    "Hypergraph",
    "derive_hypergraph",
    "f1_mcc",
    "fit_mple",
    "graph_stats",
    "lift",
    "mask",
    "maximal_cliques",
    "parse_edgelist",
    "registry_keys",
    "registry_load",
    "roc_auc",
    "run_experiment",
    "run_trial",
    "score_pair",
]
