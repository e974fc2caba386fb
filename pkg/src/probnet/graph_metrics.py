"""Measures on discrete, unweighted, undirected graphs.

These serve as the aggregate/slice baselines and are evaluated on every
Monte Carlo sample.  The array-level functions (``*_csr``) take a symmetric
CSR adjacency and are what the sampler calls; the graph-level functions wrap
them with node labels.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from . import _kernels
from .edge_model import DiscreteGraph

#: Relative gap under which two centrality scores count as tied.
TIE_TOLERANCE = 1e-9


def avg_shortest_path_csr(indptr: np.ndarray, indices: np.ndarray, n: int) -> tuple[float, float]:
    """``(mean hops over reachable ordered pairs, reachable fraction)``.

    The mean is ``nan`` when no pair is reachable.
    """
    total, reached = _kernels.bfs_path_totals(indptr, indices, n)
    pairs = n * (n - 1)
    if reached == 0:
        return math.nan, 0.0
    return total / reached, reached / pairs


def avg_shortest_path(g: DiscreteGraph) -> tuple[float | None, float]:
    """Average hop distance over reachable ordered pairs.

    Unreachable pairs are left out of the mean; the second value is the
    fraction of the ``n(n-1)`` ordered pairs that were reachable.  Returns
    ``(None, 0.0)`` when nothing is reachable.
    """
    n = len(g.nodes)
    if n < 2:
        raise ValueError(f"average shortest path needs at least 2 nodes, got {n}")
    _, indptr, indices = g.to_csr()
    value, frac = avg_shortest_path_csr(indptr, indices, n)
    return (None if math.isnan(value) else value), frac


def betweenness_csr(indptr: np.ndarray, indices: np.ndarray, n: int) -> np.ndarray:
    return _kernels.brandes(indptr, indices, n)


def betweenness(g: DiscreteGraph) -> dict[str, float]:
    """Brandes betweenness, summed over ordered (source, target) pairs.

    Co-optimal shortest paths split credit; endpoints get no credit.  A
    node in the middle of a 3-path scores 2.
    """
    order, indptr, indices = g.to_csr()
    bc = betweenness_csr(indptr, indices, len(order))
    return {v: float(bc[i]) for i, v in enumerate(order)}


def clustering_csr(indptr: np.ndarray, indices: np.ndarray, n: int) -> np.ndarray:
    """Per-node clustering coefficient; ``nan`` where degree < 2."""
    links, degree = _kernels.clustering_counts(indptr, indices, n)
    out = np.full(n, np.nan)
    ok = degree >= 2
    out[ok] = links[ok] / (degree[ok] * (degree[ok] - 1))
    return out


def clustering_coefficient(g: DiscreteGraph, i: str) -> float | None:
    """Fraction of ordered neighbor pairs of ``i`` that are linked.

    ``None`` when ``i`` has fewer than two neighbors.
    """
    if i not in g.nodes:
        raise KeyError(f"unknown node {i!r}")
    nbrs = g.neighbors()
    ni = nbrs[i]
    d = len(ni)
    if d < 2:
        return None
    linked = sum(1 for j in ni for k in nbrs[j] if k != i and k in ni)
    return linked / (d * (d - 1))


def clustering_coefficients(g: DiscreteGraph) -> dict[str, float | None]:
    order, indptr, indices = g.to_csr()
    cc = clustering_csr(indptr, indices, len(order))
    return {v: (None if math.isnan(c) else float(c)) for v, c in zip(order, cc)}


def mean_defined(values) -> float | None:
    """Mean of the defined (non-None, non-nan) values."""
    xs = [v for v in values if v is not None and not math.isnan(v)]
    return sum(xs) / len(xs) if xs else None


def rank_array(scores: np.ndarray, tol: float = TIE_TOLERANCE) -> np.ndarray:
    """Descending ranks starting at 1; tied scores share their mean rank.

    Scores within ``tol`` of each other (relative, floored at 1) tie, so
    float noise from different accumulation orders does not break ties.
    """
    scores = np.asarray(scores, dtype=np.float64)
    n = scores.shape[0]
    ranks = np.empty(n, dtype=np.float64)
    order = np.argsort(-scores, kind="stable")
    start = 0
    while start < n:
        head = scores[order[start]]
        stop = start + 1
        while stop < n:
            s = scores[order[stop]]
            if head - s > tol * max(1.0, abs(head), abs(s)):
                break
            stop += 1
        # positions start..stop-1 hold ranks start+1..stop
        ranks[order[start:stop]] = (start + 1 + stop) / 2.0
        start = stop
    return ranks


def rank(scores: Mapping[str, float], tol: float = TIE_TOLERANCE) -> dict[str, float]:
    """Centrality ranking: highest score gets rank 1, ties get average ranks."""
    nodes = sorted(scores)
    ranks = rank_array(np.array([scores[v] for v in nodes], dtype=np.float64), tol)
    return {v: float(r) for v, r in zip(nodes, ranks)}
