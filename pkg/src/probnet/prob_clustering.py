"""Clustering coefficient of a probabilistic graph without sampling.

Expected closed triangles at a node divided by the expected number of
coexisting neighbor pairs.  Both sums run over ordered neighbor pairs; the
ratio does not depend on that choice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .edge_model import ProbabilisticGraph


@dataclass(frozen=True)
class NodeClustering:
    expected_triangles: float
    expected_combinations: float

    @property
    def coefficient(self) -> float | None:
        if self.expected_combinations > 0:
            return self.expected_triangles / self.expected_combinations
        return None


def _node_terms(adj: dict[str, dict[str, float]], i: str) -> NodeClustering:
    nbrs = adj[i]
    # Only incident-edge pairs are visited: O(deg^2) per node.
    items = sorted(nbrs.items())
    tri = 0.0
    co = 0.0
    for a, (j, pij) in enumerate(items):
        adj_j = adj[j]
        for b, (k, pik) in enumerate(items):
            if a == b:
                continue
            pair = pij * pik
            co += pair
            pjk = adj_j.get(k)
            if pjk is not None:
                tri += pair * pjk
    return NodeClustering(tri, co)


def _check(pg: ProbabilisticGraph, i: str) -> None:
    if i not in pg.nodes:
        raise KeyError(f"unknown node {i!r}")


def expected_triangles(pg: ProbabilisticGraph, i: str) -> float:
    _check(pg, i)
    return _node_terms(pg.neighbors(), i).expected_triangles


def expected_combinations(pg: ProbabilisticGraph, i: str) -> float:
    _check(pg, i)
    return _node_terms(pg.neighbors(), i).expected_combinations


def prob_clustering_coefficient(pg: ProbabilisticGraph, i: str) -> float | None:
    """First-order estimate of the expected clustering coefficient of ``i``.

    ``None`` when ``i`` has no pair of possible neighbors.
    """
    _check(pg, i)
    return _node_terms(pg.neighbors(), i).coefficient


def clustering_report(pg: ProbabilisticGraph) -> dict[str, NodeClustering]:
    adj = pg.neighbors()
    return {i: _node_terms(adj, i) for i in sorted(pg.nodes)}
