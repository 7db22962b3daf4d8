import random
from math import comb

import pytest

from brute import brute_b, brute_c4, brute_d, brute_pyramids, brute_s, brute_scores, brute_triangles, relabeled
from monoclt.census import (
    b_statistic,
    count_c4,
    pyramid_counts,
    s_statistic,
    score_ordering,
    triangle_census,
)
from monoclt.graph import Graph, bipyramid_chain, complete, cycle, gnp, pyramid


def test_census_k3_k4():
    tc = triangle_census(complete(3))
    assert tc.triangles == ((0, 1, 2),)
    assert all(tc.d(u, v) == 1 for u, v in complete(3).edges)
    tc4 = triangle_census(complete(4))
    assert len(tc4.triangles) == 4
    assert all(tc4.d(u, v) == 2 for u, v in complete(4).edges)


def test_census_pyramid4():
    tc = triangle_census(pyramid(4))
    assert tc.d(0, 1) == 4
    for s in range(2, 6):
        assert tc.d(0, s) == 1 and tc.d(1, s) == 1


def test_census_matches_brute(small_corpus):
    for name, g in small_corpus:
        tc = triangle_census(g)
        assert list(tc.triangles) == brute_triangles(g), name
        brute = {e: d for e, d in brute_d(g).items() if d > 0}
        assert dict(tc.edge_tri) == brute, name


def test_census_invariants(small_corpus):
    for name, g in small_corpus:
        tc = triangle_census(g)
        assert sum(tc.edge_tri.values()) == 3 * len(tc.triangles), name
        for (u, v), d in tc.edge_tri.items():
            assert d <= min(g.degree(u), g.degree(v)) - 1, name
        for a, b, c in tc.triangles:
            assert g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)


def test_pyramid_counts_examples():
    assert pyramid_counts(triangle_census(complete(4))).as_tuple() == (4, 6, 0, 0)
    assert pyramid_counts(triangle_census(pyramid(10))).as_tuple() == (10, 45, 120, 210)
    assert pyramid_counts(triangle_census(cycle(4))).as_tuple() == (0, 0, 0, 0)


def test_pyramid_counts_match_brute(small_corpus):
    for name, g in small_corpus:
        if len(brute_triangles(g)) > 12:
            continue
        pc = pyramid_counts(triangle_census(g))
        for s, value in zip((1, 2, 3, 4), pc.as_tuple()):
            assert value == brute_pyramids(g, s), (name, s)


def test_pyramid_counts_equal_triangle_list(small_corpus):
    for name, g in small_corpus:
        tc = triangle_census(g)
        assert pyramid_counts(tc).n1 == len(tc.triangles), name


def test_count_c4_examples():
    assert count_c4(cycle(4)) == 1
    assert count_c4(complete(4)) == 3
    assert count_c4(complete(5)) == 15


@pytest.mark.parametrize("n", range(2, 10))
def test_count_c4_complete(n):
    assert count_c4(complete(n)) == 3 * comb(n, 4)


def test_count_c4_matches_brute(small_corpus):
    for name, g in small_corpus:
        assert count_c4(g) == brute_c4(g), name


def test_b_statistic_examples():
    assert b_statistic(triangle_census(pyramid(10))) == 45
    assert b_statistic(triangle_census(complete(4))) == 48
    assert b_statistic(triangle_census(bipyramid_chain(2))) == 1


def test_b_statistic_matches_brute(small_corpus):
    for name, g in small_corpus:
        assert b_statistic(triangle_census(g)) == brute_b(g), name


def test_b_statistic_relabeling_invariant():
    rng = random.Random(7)
    for g in (complete(4), pyramid(6), gnp(20, 0.3, 5)):
        base = b_statistic(triangle_census(g))
        for _ in range(3):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert b_statistic(triangle_census(relabeled(g, perm))) == base


def test_score_ordering_pyramid():
    g = pyramid(4)
    tc = triangle_census(g)
    order = score_ordering(g, tc)
    assert order == [0, 1, 2, 3, 4, 5]
    scores = brute_scores(g)
    assert scores[0] == scores[1] == 4 + comb(4, 2)
    assert all(scores[u] == 1 for u in range(2, 6))


def test_score_ordering_ties_and_triangle_free():
    g = complete(4)
    assert score_ordering(g, triangle_census(g)) == [0, 1, 2, 3]
    p5 = Graph.from_edges(5, [(i, i + 1) for i in range(4)])
    assert score_ordering(p5, triangle_census(p5)) == [0, 1, 2, 3, 4]


def test_score_ordering_matches_brute(small_corpus):
    for name, g in small_corpus:
        tc = triangle_census(g)
        scores = brute_scores(g)
        expected = sorted(range(g.n), key=lambda v: (-scores[v], v))
        assert score_ordering(g, tc) == expected, name


def test_s_statistic_pyramid4():
    g = pyramid(4)
    tc = triangle_census(g)
    order = score_ordering(g, tc)
    assert s_statistic(tc, order) == 4
    assert s_statistic(tc, list(reversed(order))) == 76


def test_s_statistic_k4_any_order():
    tc = triangle_census(complete(4))
    for order in ([0, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]):
        assert s_statistic(tc, order) == 64


def test_s_statistic_matches_brute(small_corpus):
    rng = random.Random(3)
    for name, g in small_corpus:
        tc = triangle_census(g)
        order = list(range(g.n))
        rng.shuffle(order)
        assert s_statistic(tc, order) == brute_s(g, order), name


def test_s_statistic_requires_permutation():
    tc = triangle_census(complete(4))
    with pytest.raises(ValueError):
        s_statistic(tc, [0, 1, 2])
    with pytest.raises(ValueError):
        s_statistic(tc, [0, 1, 2, 2])


@pytest.mark.parametrize("n", range(2, 31))
def test_s_equals_n_on_pyramids_under_score_order(n):
    g = pyramid(n)
    tc = triangle_census(g)
    assert s_statistic(tc, score_ordering(g, tc)) == n


def test_score_order_regression_bound():
    # diagnostic: under the score ordering, s(G) stays well below
    # (n1+n2)^(3/2) (1+n4)^(1/4) across the corpus (regression constant 10)
    graphs = [complete(k) for k in range(4, 10)]
    graphs += [pyramid(n) for n in range(2, 31)]
    graphs += [bipyramid_chain(n) for n in range(2, 31)]
    graphs += [gnp(30, p, seed) for p in (0.2, 0.5) for seed in range(5)]
    for g in graphs:
        tc = triangle_census(g)
        pc = pyramid_counts(tc)
        if pc.n1 == 0:
            continue
        s_val = s_statistic(tc, score_ordering(g, tc))
        denom = (pc.n1 + pc.n2) ** 1.5 * (1 + pc.n4) ** 0.25
        assert s_val / denom < 10.0
