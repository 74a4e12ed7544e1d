"""Peeling primitives, refine/reduce contracts, and the composed pipeline."""

import math
from fractions import Fraction

import pytest

from nearreg import (
    Graph,
    PreconditionError,
    degree_stats,
    nearly_regular_check,
    peel_below,
    prop21_refine,
    prop22_reduce,
    proposition11_pipeline,
    sample_gnp_uniform,
    star,
)


def complete(n):
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def test_peel_below_removes_isolated_vertex():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2)])
    sub, trace = peel_below(g, 0.6)
    assert (sub.n, sub.m) == (3, 3)
    assert [(s.vertex, s.degree, s.round_index) for s in trace.steps] == [(3, 0, 0)]


def test_peel_below_zero_threshold_is_identity():
    g = star(6)
    sub, trace = peel_below(g, 0)
    assert (sub.n, sub.m) == (g.n, g.m)
    assert trace.steps == [] and trace.thresholds == []


def test_peel_below_can_empty_the_graph():
    sub, trace = peel_below(complete(4), 4)
    assert sub.n == 0
    assert [s.vertex for s in trace.steps] == [0, 1, 2, 3]
    assert [s.degree for s in trace.steps] == [3, 2, 1, 0]


def test_peel_trace_degrees_below_threshold():
    g = sample_gnp_uniform(30, 0.2, 5)
    thr = degree_stats(g).avg_deg / 2
    sub, trace = peel_below(g, thr)
    assert all(s.degree < thr for s in trace.steps)
    if sub.n:
        assert degree_stats(sub).min_deg >= thr


def test_peel_below_deterministic():
    g = sample_gnp_uniform(25, 0.3, 9)
    one = peel_below(g, 2.5)[1]
    two = peel_below(g, 2.5)[1]
    assert one.steps == two.steps and one.thresholds == two.thresholds


def test_prop21_on_k4_keeps_everything():
    res = prop21_refine(complete(4), 2, 0.4)
    assert res.vertices == frozenset(range(4))
    assert res.ratio == 1
    assert all(c.passed for c in res.bounds)


def test_prop21_regular_graph_identity():
    g = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])  # C_6
    res = prop21_refine(g, 2, 0.4)
    assert res.vertices == frozenset(range(6))


def test_prop21_constants_for_the_edge_pipeline():
    # k = 2, alpha = 0.4 give the 5-nearly-regular, keep-a-sixth refine
    k, alpha = Fraction(2), Fraction("0.4")
    assert k / alpha == 5
    assert (k - 2 * k * alpha) / (2 * k - 4 * alpha) == Fraction(1, 6)


def test_prop21_rejects_spread_precondition():
    with pytest.raises(PreconditionError):
        prop21_refine(star(10), 2, 0.4)


def test_prop21_edgeless_short_circuits():
    res = prop21_refine(Graph.empty(5), 2, 0.4)
    assert res.vertices == frozenset(range(5)) and res.ratio == 1


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("k,alpha", [(2, 0.3), (2, 0.4), (3, 0.3), (3, 0.4)])
def test_prop21_contract_on_seeded_samples(seed, k, alpha):
    g = sample_gnp_uniform(60, 0.3, seed)
    stats = degree_stats(g)
    if stats.max_deg > k * stats.avg_deg:
        pytest.skip("sample misses the spread precondition")
    res = prop21_refine(g, k, alpha)
    kf, af = Fraction(k), Fraction(str(alpha))
    assert res.ratio <= kf / af
    assert len(res.vertices) >= (1 - 2 * af) / (kf - 2 * af) * g.n
    assert res.edge_count >= (kf - 2 * kf * af) / (2 * kf - 4 * af) * g.n * stats.avg_deg


def test_prop22_regular_graph_returned_in_round_zero():
    g = Graph.from_edges(8, [(i, (i + 1) % 8) for i in range(8)])
    sub, trace = prop22_reduce(g, 2)
    assert sub.n == 8 and trace.steps == [] and trace.thresholds == []


def test_prop22_star_example():
    sub, trace = prop22_reduce(star(9), 2)
    assert (sub.n, sub.m) == (8, 0)
    assert [(s.vertex, s.degree, s.round_index) for s in trace.steps] == [(0, 8, 0)]
    assert trace.thresholds == [Fraction(16, 9)]
    assert 8 >= 9 ** (1 + math.log2(1 - 0.5))


def test_prop22_edgeless_unchanged():
    sub, trace = prop22_reduce(Graph.empty(7), 3)
    assert sub.n == 7 and trace.steps == []


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("k", [2, 4, 8])
def test_prop22_contract_on_seeded_samples(seed, k):
    g = sample_gnp_uniform(50, 0.25, 100 + seed)
    sub, trace = prop22_reduce(g, k)
    s = degree_stats(sub)
    assert s.max_deg <= k * s.avg_deg
    assert sub.n >= g.n ** (1 + math.log2(1 - 1 / k)) - 1e-9
    assert all(step.degree >= trace.thresholds[step.round_index]
               for step in trace.steps)


def test_prop22_deterministic():
    g = sample_gnp_uniform(40, 0.4, 3)
    assert prop22_reduce(g, 2)[1].steps == prop22_reduce(g, 2)[1].steps


def test_pipeline_rejects_small_c():
    with pytest.raises(PreconditionError):
        proposition11_pipeline(complete(5), 2)


def test_pipeline_regular_graph_is_identity():
    g = Graph.from_edges(10, [(i, (i + 1) % 10) for i in range(10)])
    res = proposition11_pipeline(g, 3)
    assert res.vertices == frozenset(range(10))


def test_pipeline_star_returns_leaves():
    res = proposition11_pipeline(star(100), 3)
    assert res.vertices == frozenset(range(1, 100))
    assert res.ratio == 1


@pytest.mark.parametrize("seed", range(4))
def test_pipeline_seeded_contract(seed):
    g = sample_gnp_uniform(60, 0.5, 200 + seed)
    res = proposition11_pipeline(g, 2.5)
    assert all(c.passed for c in res.bounds)
    assert res.ratio <= Fraction("2.5")
    from nearreg import induced
    sub, _ = induced(g, res.vertices)
    assert nearly_regular_check(sub, 2.5)
