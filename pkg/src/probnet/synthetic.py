"""Synthetic transaction logs with shifting activity, for demos and trend checks."""

from __future__ import annotations

import math

import numpy as np

from .edge_model import DAY
from .temporal_log import TransactionLog, ingest


def phase_shifted_log(n_nodes: int = 100, n_groups: int = 5, days: int = 364, period: int = 112,
                      daily_rate: float = 6.0, cross_rate: float = 1.5, hub_shift: int = 28,
                      seed: int = 0) -> TransactionLog:
    """Groups whose activity waxes and wanes out of phase with each other.

    Group ``g`` is busiest around ``g * period / n_groups`` (mod ``period``).
    Within a group, a rotating "hub" (changes every ``hub_shift`` days) takes
    part in half of the messages, so the central nodes drift over time.
    Cross-group traffic runs between the current hubs of active groups.
    Node ids are ``n000``, ``n001``, ...
    """
    if n_nodes < n_groups * 2:
        raise ValueError("need at least two nodes per group")
    rng = np.random.Generator(np.random.PCG64(seed))
    names = [f"n{i:03d}" for i in range(n_nodes)]
    groups = np.array_split(np.arange(n_nodes), n_groups)
    records = []
    for day in range(days):
        activity = [
            0.1 + max(0.0, math.cos(2 * math.pi * (day / period - g / n_groups)))
            for g in range(n_groups)
        ]
        hubs = [grp[(day // hub_shift + 3 * g) % len(grp)] for g, grp in enumerate(groups)]
        for g, grp in enumerate(groups):
            for _ in range(rng.poisson(daily_rate * activity[g])):
                a = hubs[g] if rng.random() < 0.5 else rng.choice(grp)
                b = rng.choice(grp)
                if a != b:
                    records.append((names[a], names[b], day * DAY + int(rng.integers(DAY))))
        weights = np.array(activity) / sum(activity)
        for _ in range(rng.poisson(cross_rate)):
            g1, g2 = rng.choice(n_groups, size=2, replace=False, p=weights)
            records.append((names[hubs[g1]], names[hubs[g2]], day * DAY + int(rng.integers(DAY))))
    return ingest(records)


def random_edge_log(n_nodes: int, n_edges: int, span: int, seed: int = 0) -> TransactionLog:
    """Uniformly random distinct pairs, one message each, spread over ``[0, span]``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    names = [f"v{i:04d}" for i in range(n_nodes)]
    seen = set()
    records = []
    while len(seen) < n_edges:
        a, b = rng.integers(n_nodes, size=2)
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        records.append((names[a], names[b], int(rng.integers(span + 1))))
    return ingest(records)
