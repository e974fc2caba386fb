"""Temporal sweeps, method-vs-method rank correlation and CSV reports."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.stats import rankdata

from . import graph_metrics as gm
from .edge_model import (
    DAY,
    DecayParams,
    DiscreteGraph,
    ProbabilisticGraph,
    build_aggregate_graph,
    build_probabilistic_graph,
    build_slice_graph,
)
from .prob_clustering import clustering_report
from .probable_paths import TransmissionPrior, mlh_avg_path_length, mlh_bcr
from .sampling import SampleConfig, default_sample_count, sampled_measures
from .temporal_log import TransactionLog

METHODS = ("aggregate", "mlh", "sampled", "slice")
METRICS = ("avg-path", "bcr", "cc")
REPORT_HEADER = ("timestamp", "method", "metric", "node", "value", "stderr", "aux")

_SAMPLER_METRIC = {"avg-path": "avg_sp", "bcr": "bcr", "cc": "cc"}


@dataclass(frozen=True)
class SweepConfig:
    timestamps: tuple[int, ...]
    methods: tuple[str, ...] = METHODS
    metrics: tuple[str, ...] = METRICS
    lam: float = 28 * DAY
    beta: float = 0.3
    delta: float = 14 * DAY
    samples: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "timestamps", tuple(int(t) for t in self.timestamps))
        object.__setattr__(self, "methods", tuple(sorted(set(self.methods))))
        object.__setattr__(self, "metrics", tuple(sorted(set(self.metrics))))
        if not self.timestamps:
            raise ValueError("no timestamps to evaluate")
        if not self.methods or not self.metrics:
            raise ValueError("methods and metrics must be non-empty")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown method(s) {sorted(bad)}; choose from {METHODS}")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ValueError(f"unknown metric(s) {sorted(bad)}; choose from {METRICS}")
        DecayParams(self.lam)
        TransmissionPrior(self.beta)
        if self.delta < 0:
            raise ValueError(f"slice width must be non-negative, got {self.delta}")
        if self.samples is not None and self.samples < 1:
            raise ValueError(f"sample count must be >= 1, got {self.samples}")

    @classmethod
    def from_range(cls, start: int, stop: int, step: int, **kw) -> "SweepConfig":
        if step <= 0:
            raise ValueError(f"step must be positive, got {step}")
        return cls(timestamps=tuple(range(start, stop + 1, step)), **kw)


class Row(NamedTuple):
    timestamp: int
    method: str
    metric: str
    node: str
    value: float
    stderr: float | None = None
    aux: str = ""


MetricTimeSeries = list[Row]


def _nan(x):
    return math.nan if x is None else x


def _discrete_rows(t: int, method: str, g: DiscreteGraph, metrics) -> list[Row]:
    rows = []
    if "avg-path" in metrics:
        if len(g.nodes) >= 2:
            value, frac = gm.avg_shortest_path(g)
        else:
            value, frac = None, 0.0
        rows.append(Row(t, method, "avg-path", "", _nan(value), None, f"reachable_fraction={frac:.9g}"))
    if "bcr" in metrics:
        for v, r in gm.rank(gm.betweenness(g)).items():
            rows.append(Row(t, method, "bcr", v, r))
    if "cc" in metrics:
        cc = gm.clustering_coefficients(g)
        rows.append(Row(t, method, "cc", "", _nan(gm.mean_defined(cc.values()))))
        rows.extend(Row(t, method, "cc", v, _nan(c)) for v, c in cc.items())
    return rows


def _sampled_rows(t: int, pg: ProbabilisticGraph, cfg: SweepConfig) -> list[Row]:
    wanted = [_SAMPLER_METRIC[m] for m in cfg.metrics]
    if len(pg.nodes) < 2 and "avg_sp" in wanted:
        wanted.remove("avg_sp")
    m = cfg.samples or default_sample_count(len(pg.nodes))
    est = sampled_measures(pg, SampleConfig(m, cfg.seed), wanted) if pg.nodes else {}
    rows = []
    if "avg-path" in cfg.metrics:
        rep = est.get("avg_sp")
        if rep is None:
            rows.append(Row(t, "sampled", "avg-path", "", math.nan, None, "m_used=0"))
        else:
            rows.append(Row(t, "sampled", "avg-path", "", _nan(rep.mean), rep.stderr, f"m_used={rep.m_used}"))
    if "bcr" in cfg.metrics:
        for v, rep in est.get("bcr", {}).items():
            rows.append(Row(t, "sampled", "bcr", v, rep.mean, rep.stderr, f"m_used={rep.m_used}"))
    if "cc" in cfg.metrics:
        per_node = est.get("cc", {})
        rows.append(Row(t, "sampled", "cc", "", _nan(gm.mean_defined(r.mean for r in per_node.values()))))
        for v, rep in per_node.items():
            rows.append(Row(t, "sampled", "cc", v, _nan(rep.mean), rep.stderr, f"m_used={rep.m_used}"))
    return rows


def _mlh_rows(t: int, pg: ProbabilisticGraph, cfg: SweepConfig) -> list[Row]:
    prior = TransmissionPrior(cfg.beta)
    rows = []
    if "avg-path" in cfg.metrics:
        if len(pg.nodes) >= 2:
            value, frac = mlh_avg_path_length(pg, prior)
        else:
            value, frac = None, 0.0
        rows.append(Row(t, "mlh", "avg-path", "", _nan(value), None, f"reachable_fraction={frac:.9g}"))
    if "bcr" in cfg.metrics:
        rows.extend(Row(t, "mlh", "bcr", v, r) for v, r in mlh_bcr(pg, prior).items())
    if "cc" in cfg.metrics:
        cc = {v: nc.coefficient for v, nc in clustering_report(pg).items()}
        rows.append(Row(t, "mlh", "cc", "", _nan(gm.mean_defined(cc.values()))))
        rows.extend(Row(t, "mlh", "cc", v, _nan(c)) for v, c in cc.items())
    return rows


def evaluate_timestamp(log: TransactionLog, t: int, cfg: SweepConfig) -> list[Row]:
    """All requested rows for one evaluation time."""
    rows: list[Row] = []
    if "aggregate" in cfg.methods:
        rows += _discrete_rows(t, "aggregate", build_aggregate_graph(log, t), cfg.metrics)
    if "slice" in cfg.methods:
        rows += _discrete_rows(t, "slice", build_slice_graph(log, t, cfg.delta), cfg.metrics)
    if "sampled" in cfg.methods or "mlh" in cfg.methods:
        pg = build_probabilistic_graph(log, t, DecayParams(cfg.lam))
        if "sampled" in cfg.methods:
            rows += _sampled_rows(t, pg, cfg)
        if "mlh" in cfg.methods:
            rows += _mlh_rows(t, pg, cfg)
    return rows


def _evaluate_job(args) -> list[Row]:
    return evaluate_timestamp(*args)


def sort_rows(rows: Iterable[Row]) -> MetricTimeSeries:
    return sorted(rows, key=lambda r: (r.timestamp, r.method, r.metric, r.node))


def sweep(log: TransactionLog, cfg: SweepConfig, workers: int = 1) -> MetricTimeSeries:
    """Evaluate every method and metric at every timestamp.

    Each timestamp sees only transactions up to and including it.
    Timestamps run in parallel when ``workers > 1``; the output order is
    fixed regardless.
    """
    jobs = [(log, t, cfg) for t in cfg.timestamps]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_job, jobs))
    else:
        parts = [_evaluate_job(j) for j in jobs]
    return sort_rows(r for part in parts for r in part)


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def emit_report(series: Sequence[Row], dest: str | os.PathLike | io.TextIOBase) -> None:
    """Write rows as CSV, sorted by (timestamp, method, metric, node)."""
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            emit_report(series, fh)
            return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for r in sort_rows(series):
        writer.writerow([r.timestamp, r.method, r.metric, r.node, _fmt(r.value), _fmt(r.stderr), r.aux])


def rankings(series: Iterable[Row], method: str, metric: str = "bcr") -> dict[int, dict[str, float]]:
    """Per-timestamp ``{node: value}`` maps for one method's node-level rows."""
    out: dict[int, dict[str, float]] = {}
    for r in series:
        if r.method == method and r.metric == metric and r.node:
            out.setdefault(r.timestamp, {})[r.node] = r.value
    return out


def rank_correlation(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Spearman correlation over the nodes both rankings share.

    Ties take average ranks.  Returns nan when either side is constant.
    """
    common = sorted(set(a) & set(b))
    if len(common) < 2:
        raise ValueError(f"need at least 2 shared nodes to correlate, got {len(common)}")
    ra = rankdata([a[v] for v in common])
    rb = rankdata([b[v] for v in common])
    ra -= ra.mean()
    rb -= rb.mean()
    denom = math.sqrt(float(ra @ ra) * float(rb @ rb))
    if denom == 0.0:
        return math.nan
    return max(-1.0, min(1.0, float(ra @ rb) / denom))


class CorrelationRow(NamedTuple):
    timestamp: int
    method_a: str
    method_b: str
    correlation: float
    n_nodes: int


def correlate_series(series: Sequence[Row], method_a: str, method_b: str,
                     timestamps: Iterable[int] = ()) -> list[CorrelationRow]:
    """BCR correlation between two methods at each timestamp of a sweep.

    Timestamps with fewer than two shared nodes, or a constant ranking,
    get a nan correlation.  ``timestamps`` adds times that produced no rows.
    """
    ra = rankings(series, method_a)
    rb = rankings(series, method_b)
    out = []
    for t in sorted(set(ra) | set(rb) | set(timestamps)):
        a, b = ra.get(t, {}), rb.get(t, {})
        n = len(set(a) & set(b))
        rho = rank_correlation(a, b) if n >= 2 else math.nan
        out.append(CorrelationRow(t, method_a, method_b, rho, n))
    return out


def correlate_methods(log: TransactionLog, cfg: SweepConfig, method_pair: tuple[str, str],
                      workers: int = 1) -> list[CorrelationRow]:
    a, b = method_pair
    series = sweep(log, replace(cfg, methods=(a, b), metrics=("bcr",)), workers)
    return correlate_series(series, a, b, cfg.timestamps)


def mean_correlation(rows: Iterable[CorrelationRow]) -> float:
    """Average of the defined per-timestamp correlations (nan if none)."""
    vals = [r.correlation for r in rows if not math.isnan(r.correlation)]
    return float(np.mean(vals)) if vals else math.nan


def emit_correlations(rows: Sequence[dict], dest: str | os.PathLike | io.TextIOBase) -> None:
    """Write correlation rows; each dict carries lambda/beta plus a CorrelationRow's fields."""
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            emit_correlations(rows, fh)
            return
    header = ["lambda", "beta", "timestamp", "method_a", "method_b", "correlation", "n_nodes"]
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt(r["lambda"]), _fmt(r["beta"]), r["timestamp"], r["method_a"], r["method_b"],
                         _fmt(r["correlation"]), r["n_nodes"]])
