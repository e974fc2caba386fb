"""Edge probabilities from message history, and the graph views built on them."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .temporal_log import TransactionLog, canonical_pair, up_to, window

#: Edges whose probability falls below this are left out of the graph.
MIN_EDGE_PROBABILITY = 1e-12

DAY = 86_400
WEEK = 7 * DAY
YEAR = 365 * DAY

Pair = tuple[str, str]


@dataclass(frozen=True)
class DecayParams:
    """Time scaling of the message decay, in seconds."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"decay scale must be positive, got {self.lam}")


@dataclass(frozen=True)
class DiscreteGraph:
    nodes: frozenset[str]
    edges: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if (a, b) != canonical_pair(a, b):
                raise ValueError(f"edge {(a, b)!r} is not in canonical order")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge {(a, b)!r} has an endpoint outside the node set")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()) -> "DiscreteGraph":
        es = frozenset(canonical_pair(a, b) for a, b in edges)
        ns = set(nodes)
        for a, b in es:
            ns.add(a)
            ns.add(b)
        return cls(frozenset(ns), es)

    def ordered_nodes(self) -> list[str]:
        return sorted(self.nodes)

    def neighbors(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def to_csr(self) -> tuple[list[str], np.ndarray, np.ndarray]:
        """Sorted node list plus CSR ``(indptr, indices)`` of the symmetric adjacency."""
        order = self.ordered_nodes()
        index = {v: i for i, v in enumerate(order)}
        if self.edges:
            eu = np.fromiter((index[a] for a, _ in self.edges), dtype=np.int64, count=len(self.edges))
            ev = np.fromiter((index[b] for _, b in self.edges), dtype=np.int64, count=len(self.edges))
        else:
            eu = ev = np.zeros(0, dtype=np.int64)
        indptr, indices = csr_from_pairs(len(order), eu, ev)
        return order, indptr, indices


def csr_from_pairs(n: int, eu: np.ndarray, ev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric CSR adjacency from undirected index pairs; neighbor lists sorted."""
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.lexsort((dst, src))
    src = src[order]
    indices = dst[order].astype(np.int64)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


@dataclass(frozen=True)
class ProbabilisticGraph:
    """Nodes plus independent edge-existence probabilities in ``(0, 1]``."""

    nodes: frozenset[str]
    edges: Mapping[Pair, float]
    build_time: int | None = None

    def __post_init__(self):
        clean: dict[Pair, float] = {}
        for (a, b), p in self.edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge {(a, b)!r} has an endpoint outside the node set")
            p = float(p)
            if not 0.0 < p <= 1.0:
                raise ValueError(f"edge {(a, b)!r} probability {p} outside (0, 1]")
            key = canonical_pair(a, b)
            if key in clean:
                raise ValueError(f"duplicate edge {key!r}")
            clean[key] = p
        object.__setattr__(self, "edges", dict(sorted(clean.items())))

    @classmethod
    def from_edges(cls, edges: Mapping[tuple[str, str], float], nodes: Iterable[str] = (),
                   build_time: int | None = None) -> "ProbabilisticGraph":
        """Convenience constructor; zero-probability entries are dropped."""
        ns = set(nodes)
        kept = {}
        for (a, b), p in edges.items():
            ns.add(a)
            ns.add(b)
            if p > 0:
                kept[(a, b)] = p
        return cls(frozenset(ns), kept, build_time)

    @classmethod
    def lift(cls, g: DiscreteGraph) -> "ProbabilisticGraph":
        """The certain graph: probability 1 on every edge of ``g``, 0 elsewhere."""
        return cls(g.nodes, {e: 1.0 for e in g.edges})

    def ordered_nodes(self) -> list[str]:
        return sorted(self.nodes)

    def support(self) -> DiscreteGraph:
        return DiscreteGraph(self.nodes, frozenset(self.edges))

    def neighbors(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {v: {} for v in self.nodes}
        for (a, b), p in self.edges.items():
            adj[a][b] = p
            adj[b][a] = p
        return adj

    def edge_arrays(self) -> tuple[list[str], np.ndarray, np.ndarray, np.ndarray]:
        """Sorted nodes and canonical-order edge arrays ``(u, v, p)``.

        Edge order is the sorted order of canonical pairs; sampling streams
        are defined against it.
        """
        order = self.ordered_nodes()
        index = {v: i for i, v in enumerate(order)}
        m = len(self.edges)
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        ps = np.empty(m, dtype=np.float64)
        for k, ((a, b), p) in enumerate(self.edges.items()):
            eu[k] = index[a]
            ev[k] = index[b]
            ps[k] = p
        return order, eu, ev, ps


def message_activation(t_msg: float, t_now: float, params: DecayParams) -> float:
    if t_msg > t_now:
        raise ValueError(f"message at {t_msg} is after evaluation time {t_now}")
    return math.exp(-(t_now - t_msg) / params.lam)


def edge_probability(message_times: Iterable[float], t_now: float, params: DecayParams) -> float:
    """Chance that at least one message still signals an active relationship."""
    log_none = 0.0
    for t in message_times:
        a = message_activation(t, t_now, params)
        if a >= 1.0:
            return 1.0
        log_none += math.log1p(-a)
    return -math.expm1(log_none)


def build_probabilistic_graph(log: TransactionLog, t_now: int, params: DecayParams) -> ProbabilisticGraph:
    """Decayed-message graph at ``t_now``; messages after ``t_now`` are ignored."""
    log = up_to(log, t_now)
    edges = {}
    for pair, times in log.pair_times().items():
        p = edge_probability(times, t_now, params)
        if p >= MIN_EDGE_PROBABILITY:
            edges[pair] = p
    return ProbabilisticGraph(log.nodes, edges, t_now)


def build_aggregate_graph(log: TransactionLog, t: int) -> DiscreteGraph:
    log = up_to(log, t)
    return DiscreteGraph(log.nodes, frozenset(tx.pair for tx in log.transactions))


def build_slice_graph(log: TransactionLog, t: int, delta: float) -> DiscreteGraph:
    """Edges active inside ``[t - delta, t]``.

    The node set is every node seen up to ``t``, so nodes quiet during the
    window stay present as isolated vertices and remain rankable.
    """
    sliced = window(log, t, delta)
    history = up_to(log, t)
    return DiscreteGraph(history.nodes, frozenset(tx.pair for tx in sliced.transactions))


def graph_log_probability(pg: ProbabilisticGraph, g: DiscreteGraph) -> float:
    """``ln P(g)`` under independent edges; ``-inf`` if a certain edge is missing."""
    if g.nodes != pg.nodes:
        raise ValueError("graph and probabilistic graph have different node sets")
    extra = g.edges - pg.edges.keys()
    if extra:
        raise ValueError(f"edge {min(extra)!r} is outside the probabilistic graph's support")
    total = 0.0
    for e, p in pg.edges.items():
        if e in g.edges:
            total += math.log(p)
        elif p >= 1.0:
            return -math.inf
        else:
            total += math.log1p(-p)
    return total


def read_probabilistic_graph(source: str | os.PathLike | io.TextIOBase) -> ProbabilisticGraph:
    """Read the ``src,dst,probability`` snapshot CSV."""
    from .temporal_log import LogFormatError

    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_probabilistic_graph(fh)
    edges: dict[Pair, float] = {}
    nodes: set[str] = set()
    header_seen = False
    for lineno, raw in enumerate(source, start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([raw]))]
        if not header_seen:
            if [f.lower() for f in fields] != ["src", "dst", "probability"]:
                raise LogFormatError("expected header src,dst,probability", lineno)
            header_seen = True
            continue
        if len(fields) != 3 or not fields[0] or not fields[1]:
            raise LogFormatError("expected src,dst,probability", lineno)
        a, b = fields[0], fields[1]
        try:
            p = float(fields[2])
        except ValueError:
            raise LogFormatError(f"bad probability {fields[2]!r}", lineno) from None
        if not 0.0 <= p <= 1.0 or a == b:
            raise LogFormatError(f"invalid edge {a},{b},{fields[2]}", lineno)
        key = canonical_pair(a, b)
        if key in edges:
            raise LogFormatError(f"duplicate edge {a},{b}", lineno)
        nodes.update(key)
        if p > 0:
            edges[key] = p
    return ProbabilisticGraph(frozenset(nodes), edges)


def write_probabilistic_graph(pg: ProbabilisticGraph, dest: str | os.PathLike | io.TextIOBase) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            write_probabilistic_graph(pg, fh)
            return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["src", "dst", "probability"])
    for (a, b), p in pg.edges.items():
        writer.writerow([a, b, repr(p)])
