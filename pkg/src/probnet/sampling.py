"""Monte Carlo estimates of expected graph measures, plus an exact oracle.

Sample graphs are drawn by including each edge independently with its
probability.  Every sample carries weight ``1/m_used``; samples are never
reweighted by their graph probability.

Random streams
--------------
Uniform draws come from a Philox generator keyed by the 64-bit seed.
Samples are grouped into fixed blocks of ``rows_per_block(n_edges)`` rows;
block ``b`` uses Philox counter ``b << 128`` and fills a row-major
``(rows, n_edges)`` array.  Sample ``k`` is therefore a pure function of
``(seed, k, canonical edge order)`` and does not depend on how samples are
scheduled across workers.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .edge_model import DiscreteGraph, ProbabilisticGraph, csr_from_pairs, graph_log_probability
from .graph_metrics import (
    avg_shortest_path,
    avg_shortest_path_csr,
    betweenness,
    betweenness_csr,
    clustering_coefficient,
    clustering_csr,
    rank,
    rank_array,
)

BLOCK_VALUES = 1 << 16
MAX_ORACLE_EDGES = 20
METRICS = ("avg_sp", "bcr", "cc")

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SampleConfig:
    m: int
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"sample count must be >= 1, got {self.m}")


@dataclass(frozen=True)
class EstimateReport:
    """Sample mean of a measure and its standard error.

    ``mean`` is None when no sample produced a defined value.  ``stderr`` is
    0.0 when fewer than two samples were usable.
    """

    mean: float | None
    stderr: float
    m_used: int
    undefined_count: int


def default_sample_count(n_nodes: int) -> int:
    """10,000 samples for graphs up to 200 nodes, 200 beyond that."""
    return 10_000 if n_nodes <= 200 else 200


def rows_per_block(n_edges: int) -> int:
    return max(1, BLOCK_VALUES // max(1, n_edges))


def _block_uniforms(seed: int, block: int, rows: int, n_edges: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed & _MASK64, counter=block << 128)
    return np.random.Generator(bitgen).random((rows, n_edges))


def sample_masks(probs: np.ndarray, cfg: SampleConfig, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Edge-inclusion masks for samples ``start..stop-1``, shape ``(count, n_edges)``."""
    stop = cfg.m if stop is None else stop
    n_edges = probs.shape[0]
    rows = rows_per_block(n_edges)
    out = np.empty((stop - start, n_edges), dtype=bool)
    first, last = start // rows, (stop - 1) // rows
    for block in range(first, last + 1):
        lo = max(start, block * rows)
        hi = min(stop, (block + 1) * rows)
        u = _block_uniforms(cfg.seed, block, rows, n_edges)
        out[lo - start:hi - start] = u[lo - block * rows:hi - block * rows] < probs
    return out


def sample_graph(pg: ProbabilisticGraph, sample_index: int, cfg: SampleConfig) -> DiscreteGraph:
    """The ``sample_index``-th sampled graph of the stream ``cfg.seed``."""
    order, eu, ev, ps = pg.edge_arrays()
    mask = sample_masks(ps, cfg, sample_index, sample_index + 1)[0]
    edges = [e for e, keep in zip(pg.edges, mask) if keep]
    return DiscreteGraph(pg.nodes, frozenset(edges))


def _evaluate_mask(n: int, eu: np.ndarray, ev: np.ndarray, mask: np.ndarray, metrics: Sequence[str]) -> dict:
    indptr, indices = csr_from_pairs(n, eu[mask], ev[mask])
    out = {}
    if "avg_sp" in metrics:
        out["avg_sp"] = avg_shortest_path_csr(indptr, indices, n)[0]
    if "bcr" in metrics:
        out["bcr"] = rank_array(betweenness_csr(indptr, indices, n))
    if "cc" in metrics:
        out["cc"] = clustering_csr(indptr, indices, n)
    return out


def _evaluate_chunk(args) -> list[dict]:
    n, eu, ev, masks, metrics = args
    return [_evaluate_mask(n, eu, ev, mk, metrics) for mk in masks]


def _summarize(values: np.ndarray, m: int) -> EstimateReport:
    defined = values[~np.isnan(values)]
    used = int(defined.shape[0])
    if used == 0:
        return EstimateReport(None, 0.0, 0, m)
    if np.all(defined == defined[0]):
        return EstimateReport(float(defined[0]), 0.0, used, m - used)
    mean = float(np.mean(defined))
    stderr = float(np.std(defined, ddof=1) / math.sqrt(used)) if used > 1 else 0.0
    return EstimateReport(mean, stderr, used, m - used)


def sampled_measures(pg: ProbabilisticGraph, cfg: SampleConfig, metrics: Iterable[str] = METRICS,
                     workers: int = 1) -> dict:
    """Evaluate several measures on one shared set of ``cfg.m`` samples.

    Returns ``{"avg_sp": EstimateReport, "bcr": {node: EstimateReport},
    "cc": {node: EstimateReport}}`` restricted to the requested measures.
    Distinct sampled graphs are evaluated once each; ``workers > 1`` farms
    them out to processes.  Results do not depend on ``workers``.
    """
    metrics = tuple(m for m in METRICS if m in set(metrics))
    order, eu, ev, ps = pg.edge_arrays()
    n = len(order)
    masks = sample_masks(ps, cfg)
    if masks.shape[1] == 0:
        uniq = masks[:1]
        inverse = np.zeros(cfg.m, dtype=np.int64)
    else:
        packed = np.packbits(masks, axis=1)
        _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
        uniq = masks[first]
        inverse = inverse.reshape(-1)

    if workers > 1 and len(uniq) > 1:
        chunks = np.array_split(np.arange(len(uniq)), min(workers * 4, len(uniq)))
        jobs = [(n, eu, ev, uniq[c], metrics) for c in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_evaluate_chunk, jobs) for r in part]
    else:
        results = _evaluate_chunk((n, eu, ev, uniq, metrics))

    out: dict = {}
    if "avg_sp" in metrics:
        per_graph = np.array([r["avg_sp"] for r in results], dtype=np.float64)
        out["avg_sp"] = _summarize(per_graph[inverse], cfg.m)
    for name in ("bcr", "cc"):
        if name in metrics:
            per_graph = np.array([r[name] for r in results], dtype=np.float64).reshape(len(results), n)
            per_sample = per_graph[inverse]
            out[name] = {v: _summarize(per_sample[:, i], cfg.m) for i, v in enumerate(order)}
    return out


def expected_avg_shortest_path(pg: ProbabilisticGraph, cfg: SampleConfig, workers: int = 1) -> EstimateReport:
    """Expected average shortest path length.

    Samples in which no pair is connected are skipped and counted in
    ``undefined_count``.
    """
    if len(pg.nodes) < 2:
        raise ValueError("average shortest path needs at least 2 nodes")
    return sampled_measures(pg, cfg, ["avg_sp"], workers)["avg_sp"]


def expected_bcr(pg: ProbabilisticGraph, cfg: SampleConfig, workers: int = 1) -> dict[str, EstimateReport]:
    """Per-node mean betweenness rank over the samples."""
    return sampled_measures(pg, cfg, ["bcr"], workers)["bcr"]


def expected_cc(pg: ProbabilisticGraph, cfg: SampleConfig, workers: int = 1) -> dict[str, EstimateReport]:
    """Per-node mean clustering coefficient over samples where it is defined."""
    return sampled_measures(pg, cfg, ["cc"], workers)["cc"]


def enumerate_graphs(pg: ProbabilisticGraph) -> Iterable[tuple[DiscreteGraph, float]]:
    """Every graph in the support, with its probability."""
    edges = list(pg.edges)
    if len(edges) > MAX_ORACLE_EDGES:
        raise ValueError(f"{len(edges)} edges is too many to enumerate (limit {MAX_ORACLE_EDGES})")
    for bits in itertools.product((False, True), repeat=len(edges)):
        g = DiscreteGraph(pg.nodes, frozenset(e for e, b in zip(edges, bits) if b))
        yield g, math.exp(graph_log_probability(pg, g))


def brute_force_expectation(pg: ProbabilisticGraph, metric: str):
    """Exact expectation of ``metric`` over all graphs, for small supports.

    ``avg_sp`` returns a float (or None); ``bcr`` and ``cc`` return per-node
    dicts.  Undefined values are excluded and the remaining probability mass
    renormalized, matching how the samplers skip them.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    if metric == "avg_sp" and len(pg.nodes) < 2:
        raise ValueError("average shortest path needs at least 2 nodes")
    nodes = pg.ordered_nodes()
    num = dict.fromkeys(nodes, 0.0)
    den = dict.fromkeys(nodes, 0.0)
    for g, w in enumerate_graphs(pg):
        if w == 0.0:
            continue
        if metric == "avg_sp":
            value, _ = avg_shortest_path(g)
            vals = {"": value}
        elif metric == "bcr":
            vals = rank(betweenness(g))
        else:
            vals = {v: clustering_coefficient(g, v) for v in nodes}
        for v, x in vals.items():
            if x is None:
                continue
            num[v] = num.get(v, 0.0) + w * x
            den[v] = den.get(v, 0.0) + w
    if metric == "avg_sp":
        return num[""] / den[""] if den.get("", 0.0) > 0 else None
    return {v: (num[v] / den[v] if den[v] > 0 else None) for v in nodes}
