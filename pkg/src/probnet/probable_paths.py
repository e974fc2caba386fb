"""Most probable and maximum-likelihood handicapped (MLH) paths.

A path's score is the product of its edge probabilities times ``beta`` per
hop, so ``beta < 1`` handicaps long paths the way a per-hop transmission
failure would.  Everything is computed in log space.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .edge_model import ProbabilisticGraph
from .graph_metrics import rank

#: Log-likelihoods closer than this are treated as equal (co-optimal).
LOG_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TransmissionPrior:
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")


def transmission_prior(length: int, prior: TransmissionPrior) -> float:
    """Probability that all ``length`` hops transmit: ``beta ** length``."""
    if length < 0:
        raise ValueError(f"path length must be non-negative, got {length}")
    return prior.beta ** length


@dataclass
class PathTree:
    """Single-source result.  Unreachable nodes appear in no map.

    ``order`` lists reachable nodes in the order they were settled, i.e. by
    non-increasing log-likelihood.
    """

    source: str
    log_likelihood: dict[str, float] = field(default_factory=dict)
    hops: dict[str, int] = field(default_factory=dict)
    predecessors: dict[str, list[str]] = field(default_factory=dict)
    sigma: dict[str, float] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)

    def likelihood(self, v: str) -> float:
        return math.exp(self.log_likelihood[v])

    def path_to(self, v: str) -> list[str]:
        """One optimal path (lexicographically smallest predecessor at each step)."""
        path = [v]
        while path[-1] != self.source:
            path.append(min(self.predecessors[path[-1]]))
        return path[::-1]


def _hop_costs(pg: ProbabilisticGraph, prior: TransmissionPrior) -> dict[str, list[tuple[str, float]]]:
    """Adjacency with non-negative costs ``-(ln p + ln beta)``, neighbors sorted."""
    log_beta = math.log(prior.beta)
    adj: dict[str, list[tuple[str, float]]] = {v: [] for v in pg.nodes}
    for (a, b), p in pg.edges.items():
        c = -(math.log(p) + log_beta)
        adj[a].append((b, c))
        adj[b].append((a, c))
    for v in adj:
        adj[v].sort()
    return adj


def _tree(adj, source: str) -> PathTree:
    # Dijkstra on costs; best-first in likelihood.  Counter breaks heap ties
    # by insertion so the settle order is deterministic.
    cost = {source: 0.0}
    tree = PathTree(source)
    tree.hops[source] = 0
    tree.sigma[source] = 1.0
    tree.predecessors[source] = []
    settled = set()
    heap = [(0.0, 0, source)]
    counter = 1
    while heap:
        c, _, v = heapq.heappop(heap)
        if v in settled or c > cost[v]:
            continue
        settled.add(v)
        tree.order.append(v)
        for w, step in adj[v]:
            if w in settled:
                continue
            cand = c + step
            old = cost.get(w)
            if old is None or cand < old - LOG_TIE_TOLERANCE:
                cost[w] = cand
                tree.sigma[w] = tree.sigma[v]
                tree.predecessors[w] = [v]
                tree.hops[w] = tree.hops[v] + 1
                heapq.heappush(heap, (cand, counter, w))
                counter += 1
            elif cand <= old + LOG_TIE_TOLERANCE:
                tree.sigma[w] += tree.sigma[v]
                tree.predecessors[w].append(v)
                tree.hops[w] = min(tree.hops[w], tree.hops[v] + 1)
    tree.log_likelihood = {v: -cost[v] for v in tree.order}
    return tree


def mlh_path_tree(pg: ProbabilisticGraph, source: str, prior: TransmissionPrior) -> PathTree:
    """Maximum-likelihood handicapped paths from ``source`` to every reachable node.

    Maximizes ``P(path) * beta ** len(path)``.  Co-optimal paths (log
    likelihoods within ``LOG_TIE_TOLERANCE``) are all kept: ``predecessors``
    holds every optimal last hop and ``sigma`` counts optimal paths.
    """
    if source not in pg.nodes:
        raise KeyError(f"unknown source node {source!r}")
    return _tree(_hop_costs(pg, prior), source)


def ml_path_tree(pg: ProbabilisticGraph, source: str) -> PathTree:
    """Most probable paths (no transmission handicap)."""
    return mlh_path_tree(pg, source, TransmissionPrior(1.0))


def _accumulate(tree: PathTree, bc: dict[str, float]) -> None:
    # Back-propagate dependencies from the least likely settled node.
    delta = dict.fromkeys(tree.order, 0.0)
    for w in reversed(tree.order):
        coeff = (1.0 + delta[w]) / tree.sigma[w]
        for v in tree.predecessors[w]:
            delta[v] += tree.sigma[v] * coeff
        if w != tree.source:
            bc[w] += delta[w]


def mlh_betweenness(pg: ProbabilisticGraph, prior: TransmissionPrior) -> dict[str, float]:
    """Betweenness over MLH paths, summed over ordered source/target pairs.

    On a graph whose probabilities are all 0 or 1 and ``beta < 1`` this
    equals ordinary shortest-path betweenness.
    """
    adj = _hop_costs(pg, prior)
    bc = dict.fromkeys(pg.nodes, 0.0)
    for s in sorted(pg.nodes):
        _accumulate(_tree(adj, s), bc)
    return bc


def mlh_bcr(pg: ProbabilisticGraph, prior: TransmissionPrior) -> dict[str, float]:
    return rank(mlh_betweenness(pg, prior))


def mlh_avg_path_length(pg: ProbabilisticGraph, prior: TransmissionPrior) -> tuple[float | None, float]:
    """Mean hop count of MLH paths over reachable ordered pairs, and the reachable fraction."""
    n = len(pg.nodes)
    if n < 2:
        raise ValueError(f"average path length needs at least 2 nodes, got {n}")
    adj = _hop_costs(pg, prior)
    total = 0
    reached = 0
    for s in sorted(pg.nodes):
        tree = _tree(adj, s)
        total += sum(tree.hops.values())
        reached += len(tree.order) - 1
    if reached == 0:
        return None, 0.0
    return total / reached, reached / (n * (n - 1))
