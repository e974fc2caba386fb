"""Shared fixtures and independent reference implementations.

The oracles here deliberately avoid the package's own algorithms:
Floyd-Warshall for distances, explicit path enumeration for betweenness and
most-likely paths.
"""

import itertools
import math
import random

import pytest

from probnet.edge_model import DiscreteGraph, ProbabilisticGraph

ACCEPTANCE_RESULTS = []


def record_acceptance(number, name, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {name}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


def node_names(n):
    return [f"v{i:02d}" for i in range(n)]


def random_connected_graph(rng, n, density):
    """Spanning tree plus random extra edges up to roughly ``density``."""
    names = node_names(n)
    perm = names[:]
    rng.shuffle(perm)
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add(tuple(sorted((perm[i], perm[j]))))
    for a, b in itertools.combinations(names, 2):
        if rng.random() < density:
            edges.add((a, b))
    return DiscreteGraph.from_edges(edges, names)


def random_graph(rng, n, density):
    names = node_names(n)
    edges = [(a, b) for a, b in itertools.combinations(names, 2) if rng.random() < density]
    return DiscreteGraph.from_edges(edges, names)


def random_prob_graph(rng, n, max_edges, p_lo=0.1, p_hi=0.95):
    names = node_names(n)
    pairs = list(itertools.combinations(names, 2))
    chosen = rng.sample(pairs, min(max_edges, len(pairs), rng.randint(1, max_edges)))
    return ProbabilisticGraph(frozenset(names), {e: rng.uniform(p_lo, p_hi) for e in chosen})


def floyd_warshall(g):
    nodes = sorted(g.nodes)
    inf = math.inf
    d = {(a, b): (0 if a == b else inf) for a in nodes for b in nodes}
    for a, b in g.edges:
        d[a, b] = d[b, a] = 1
    for k in nodes:
        for i in nodes:
            dik = d[i, k]
            if dik == inf:
                continue
            for j in nodes:
                if dik + d[k, j] < d[i, j]:
                    d[i, j] = dik + d[k, j]
    return d


def enumerate_betweenness(g):
    """Count, for every ordered pair, the share of shortest paths through each node."""
    d = floyd_warshall(g)
    adj = g.neighbors()
    bc = dict.fromkeys(g.nodes, 0.0)

    def paths(s, t):
        out = []

        def walk(path):
            v = path[-1]
            if v == t:
                out.append(list(path))
                return
            for w in adj[v]:
                if d[s, w] == len(path) and d[w, t] == d[s, t] - len(path):
                    path.append(w)
                    walk(path)
                    path.pop()

        walk([s])
        return out

    for s in g.nodes:
        for t in g.nodes:
            if s == t or d[s, t] == math.inf:
                continue
            ps = paths(s, t)
            for p in ps:
                for v in p[1:-1]:
                    bc[v] += 1.0 / len(ps)
    return bc


def best_simple_path_scores(pg, source, beta):
    """Max over simple paths of ``sum(ln p) + len * ln(beta)``, by exhaustive DFS."""
    adj = pg.neighbors()
    lb = math.log(beta)
    best = {source: 0.0}

    def walk(v, score, seen):
        for w, p in adj[v].items():
            if w in seen:
                continue
            s = score + math.log(p) + lb
            if s > best.get(w, -math.inf):
                best[w] = s
            seen.add(w)
            walk(w, s, seen)
            seen.remove(w)

    walk(source, 0.0, {source})
    return best


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def path3():
    return DiscreteGraph.from_edges([("a", "b"), ("b", "c")])


@pytest.fixture
def triangle():
    return DiscreteGraph.from_edges([("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def cycle4():
    return DiscreteGraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
