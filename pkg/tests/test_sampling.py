import random

import numpy as np
import pytest

from conftest import random_prob_graph
from probnet.edge_model import DiscreteGraph, ProbabilisticGraph
from probnet.graph_metrics import avg_shortest_path, betweenness, clustering_coefficient, rank
from probnet.sampling import (
    SampleConfig,
    brute_force_expectation,
    default_sample_count,
    enumerate_graphs,
    expected_avg_shortest_path,
    expected_bcr,
    expected_cc,
    sample_graph,
    sample_masks,
    sampled_measures,
)


def half_triangle():
    return ProbabilisticGraph.from_edges({("a", "b"): 0.5, ("b", "c"): 0.5, ("a", "c"): 0.5})


class TestSampleGraph:
    def test_certain_edges(self, triangle):
        pg = ProbabilisticGraph.lift(triangle)
        for k in (0, 1, 99, 12345):
            assert sample_graph(pg, k, SampleConfig(1, seed=4)) == triangle

    def test_inclusion_frequency(self):
        pg = ProbabilisticGraph.from_edges({(f"x{i}", f"y{i}"): 0.5 for i in range(5)})
        masks = sample_masks(pg.edge_arrays()[3], SampleConfig(10_000, seed=8))
        freq = masks.mean(axis=0)
        assert np.all(np.abs(freq - 0.5) <= 0.015)

    def test_absent_edge_never_sampled(self):
        pg = ProbabilisticGraph.from_edges({("a", "b"): 0.0, ("b", "c"): 0.9})
        cfg = SampleConfig(200, seed=1)
        assert all(("a", "b") not in sample_graph(pg, k, cfg).edges for k in range(50))

    def test_stream_independent_of_slicing(self):
        pg = random_prob_graph(random.Random(1), 8, 15)
        ps = pg.edge_arrays()[3]
        cfg = SampleConfig(30_000, seed=77)
        whole = sample_masks(ps, cfg)
        parts = np.concatenate([sample_masks(ps, cfg, lo, min(lo + 3001, cfg.m)) for lo in range(0, cfg.m, 3001)])
        assert np.array_equal(whole, parts)
        k = 17_777
        g = sample_graph(pg, k, cfg)
        assert g.edges == {e for e, keep in zip(pg.edges, whole[k]) if keep}

    def test_seeds_differ(self):
        ps = np.full(20, 0.5)
        a = sample_masks(ps, SampleConfig(50, seed=1))
        b = sample_masks(ps, SampleConfig(50, seed=2))
        assert not np.array_equal(a, b)

    def test_sample_count_positive(self):
        with pytest.raises(ValueError):
            SampleConfig(0)


class TestEstimators:
    def test_deterministic_path(self, path3):
        rep = expected_avg_shortest_path(ProbabilisticGraph.lift(path3), SampleConfig(500))
        assert rep.mean == 4 / 3 and rep.stderr == 0.0 and rep.m_used == 500

    def test_single_uncertain_edge(self):
        pg = ProbabilisticGraph.from_edges({("a", "b"): 0.5})
        rep = expected_avg_shortest_path(pg, SampleConfig(2000, seed=3))
        assert rep.mean == 1.0
        assert rep.m_used + rep.undefined_count == 2000
        assert 800 < rep.m_used < 1200

    def test_no_usable_sample(self):
        pg = ProbabilisticGraph(frozenset("ab"), {})
        rep = expected_avg_shortest_path(pg, SampleConfig(10))
        assert rep.mean is None and rep.m_used == 0 and rep.undefined_count == 10

    def test_triangle_against_oracle(self):
        pg = half_triangle()
        rep = expected_avg_shortest_path(pg, SampleConfig(100_000, seed=5))
        exact = brute_force_expectation(pg, "avg_sp")
        assert abs(rep.mean - exact) <= 3 * rep.stderr

    def test_bcr_deterministic_path(self, path3):
        est = expected_bcr(ProbabilisticGraph.lift(path3), SampleConfig(100))
        assert {v: r.mean for v, r in est.items()} == {"a": 2.5, "b": 1.0, "c": 2.5}
        assert all(r.stderr == 0 for r in est.values())

    def test_bcr_isolated(self):
        est = expected_bcr(ProbabilisticGraph(frozenset("abcd"), {}), SampleConfig(10))
        assert {r.mean for r in est.values()} == {2.5}

    def test_bcr_five_uncertain_edges(self):
        pg = ProbabilisticGraph.from_edges({("a", "b"): 0.3, ("b", "c"): 0.6, ("c", "d"): 0.8,
                                            ("a", "d"): 0.4, ("a", "c"): 0.5})
        est = expected_bcr(pg, SampleConfig(100_000, seed=6))
        exact = brute_force_expectation(pg, "bcr")
        for v in pg.nodes:
            assert abs(est[v].mean - exact[v]) <= 3 * est[v].stderr

    def test_cc_values(self, triangle):
        est = expected_cc(ProbabilisticGraph.lift(triangle), SampleConfig(50))
        assert {r.mean for r in est.values()} == {1.0}
        star = DiscreteGraph.from_edges([("c", "x"), ("c", "y"), ("c", "z")])
        est = expected_cc(ProbabilisticGraph.lift(star), SampleConfig(50))
        assert est["c"].mean == 0.0
        assert est["x"].mean is None and est["x"].undefined_count == 50

    def test_cc_half_triangle(self):
        exact = brute_force_expectation(half_triangle(), "cc")
        assert exact["a"] == pytest.approx(0.5, abs=1e-15)
        est = expected_cc(half_triangle(), SampleConfig(50_000, seed=2))
        assert abs(est["a"].mean - 0.5) <= 4 * est["a"].stderr

    def test_degenerate_probabilities_reduce_to_discrete(self, rng):
        from conftest import random_graph

        for _ in range(10):
            g = random_graph(rng, rng.randint(2, 9), 0.4)
            pg = ProbabilisticGraph.lift(g)
            est = sampled_measures(pg, SampleConfig(64, seed=rng.randrange(1 << 30)))
            value, _ = avg_shortest_path(g)
            assert est["avg_sp"].mean == value
            ranks = rank(betweenness(g))
            for v in g.nodes:
                assert est["bcr"][v].mean == ranks[v] and est["bcr"][v].stderr == 0.0
                assert est["cc"][v].mean == clustering_coefficient(g, v)

    def test_same_seed_same_report(self):
        pg = random_prob_graph(random.Random(4), 7, 10)
        cfg = SampleConfig(3000, seed=99)
        assert sampled_measures(pg, cfg) == sampled_measures(pg, cfg)

    def test_workers_do_not_change_results(self):
        pg = random_prob_graph(random.Random(5), 8, 14)
        cfg = SampleConfig(2000, seed=3)
        assert sampled_measures(pg, cfg, workers=1) == sampled_measures(pg, cfg, workers=3)

    def test_uniform_weighting(self):
        # Two-edge star: the mean is a plain average of per-sample values.
        pg = ProbabilisticGraph.from_edges({("a", "b"): 0.9, ("a", "c"): 0.2})
        cfg = SampleConfig(4000, seed=12)
        masks = sample_masks(pg.edge_arrays()[3], cfg)
        values = []
        for row in masks:
            g = DiscreteGraph(pg.nodes, frozenset(e for e, k in zip(pg.edges, row) if k))
            v, _ = avg_shortest_path(g)
            if v is not None:
                values.append(v)
        rep = expected_avg_shortest_path(pg, cfg)
        assert rep.m_used == len(values)
        assert rep.mean == pytest.approx(sum(values) / len(values), rel=1e-12)

    def test_default_sample_counts(self):
        assert default_sample_count(151) == 10_000
        assert default_sample_count(200) == 10_000
        assert default_sample_count(1384) == 200


class TestOracle:
    def test_bernoulli_mean(self):
        pg = ProbabilisticGraph.from_edges({("a", "b"): 0.7})
        mean_edges = sum(w * len(g.edges) for g, w in enumerate_graphs(pg))
        assert mean_edges == pytest.approx(0.7, abs=1e-15)

    def test_normalization(self):
        assert sum(w for _, w in enumerate_graphs(half_triangle())) == pytest.approx(1.0, abs=1e-15)
        assert len(list(enumerate_graphs(half_triangle()))) == 8

    def test_half_triangle_avg_sp_by_hand(self):
        # 3 graphs with one edge: value 1; 3 with two edges: 4/3; full: 1.
        exact = brute_force_expectation(half_triangle(), "avg_sp")
        assert exact == pytest.approx((3 * 1 + 3 * 4 / 3 + 1) / 7, rel=1e-12)

    def test_too_large(self):
        names = [f"n{i}" for i in range(8)]
        edges = {(a, b): 0.5 for i, a in enumerate(names) for b in names[i + 1:]}
        with pytest.raises(ValueError):
            brute_force_expectation(ProbabilisticGraph.from_edges(edges), "cc")

    def test_unknown_metric(self):
        with pytest.raises(ValueError):
            brute_force_expectation(half_triangle(), "diameter")
