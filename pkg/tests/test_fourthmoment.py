import random
from fractions import Fraction

import pytest

from brute import relabeled
from monoclt.census import pyramid_counts, triangle_census
from monoclt.errors import BudgetExceededError, NoTrianglesError
from monoclt.fourthmoment import (
    TriangleMultiset,
    bipyramid_quad_coefficient,
    centered_product_expectation,
    centered_product_poly,
    class_coefficient,
    class_key,
    discover_classes,
    fourth_moment_exact,
    key_representative,
    pyramid_class_coefficient,
)
from monoclt.graph import bipyramid_chain, complete, gnp, pyramid
from monoclt.ratpoly import RationalPoly
from monoclt.sim import exact_distribution

# frozen closed forms for the structurally identifiable classes
DELTA1 = RationalPoly([0, 0, 1, 0, -7, 0, 12, 0, -6])
DELTA2 = RationalPoly([0, 0, 0, 14, -14, -72, 60, 96, -84])
DELTA3 = RationalPoly([0, 0, 0, 0, 36, -108, -72, 360, -216])
DELTA4 = RationalPoly([0, 0, 0, 0, 0, 24, -168, 288, -144])
H16 = RationalPoly([0, 0, 0, 0, 0, 0, 0, 24, -24])

QUAD_REP = ((0, 2, 4), (1, 2, 5), (0, 3, 6), (1, 3, 7))


def test_centered_product_single_triangle_symbolic():
    m = TriangleMultiset(((0, 1, 2),), (2,))
    assert centered_product_poly(m) == RationalPoly([0, 0, 1, 0, -1])  # x^2 (1 - x^2)


def test_centered_product_shared_edge_quadruple():
    m = TriangleMultiset(((0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 1, 5)), (1, 1, 1, 1))
    assert centered_product_poly(m) == RationalPoly([0, 0, 0, 0, 0, 1, -4, 6, -3])


def test_centered_product_multiplicity_four_at_two_colors():
    m = TriangleMultiset(((0, 1, 2),), (4,))
    assert centered_product_expectation(m, 2) == Fraction(21, 256)


def test_centered_product_lone_triangle_vanishes():
    m = TriangleMultiset(((0, 1, 2), (5, 6, 7)), (3, 1))
    assert centered_product_poly(m).is_zero
    m = TriangleMultiset(((0, 1, 2), (0, 1, 3), (5, 6, 7)), (1, 2, 1))
    assert centered_product_poly(m).is_zero


def test_multiset_validation():
    with pytest.raises(ValueError):
        TriangleMultiset(((0, 1, 2), (2, 1, 0)), (1, 1))  # same triangle twice
    with pytest.raises(ValueError):
        TriangleMultiset(((0, 1, 1),), (1,))
    with pytest.raises(ValueError):
        TriangleMultiset(((0, 1, 2),), (5,))
    with pytest.raises(ValueError):
        TriangleMultiset(((0, 1, 2),), (0,))


def test_class_coefficient_identifiable_rows():
    assert class_coefficient([(0, 1, 2)]) == DELTA1
    assert pyramid_class_coefficient(1) == DELTA1
    assert pyramid_class_coefficient(2) == DELTA2
    assert pyramid_class_coefficient(3) == DELTA3
    assert pyramid_class_coefficient(4) == DELTA4
    assert bipyramid_quad_coefficient() == H16
    assert class_coefficient(QUAD_REP) == H16


def test_class_coefficient_zero_classes():
    # two triangles sharing exactly one vertex
    assert class_coefficient([(0, 1, 2), (0, 3, 4)]).is_zero
    # two vertex-disjoint edge-sharing pairs
    assert class_coefficient([(0, 1, 2), (0, 1, 3), (4, 5, 6), (4, 5, 7)]).is_zero
    # disconnected sets cancel in general
    assert class_coefficient([(0, 1, 2), (3, 4, 5)]).is_zero
    assert class_coefficient([(0, 1, 2), (0, 1, 3), (4, 5, 6)]).is_zero
    assert class_coefficient([(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)]).is_zero


def test_class_coefficient_sign_dichotomy_rows():
    assert pyramid_class_coefficient(4)(Fraction(1, 2)) == Fraction(-3, 16)
    assert bipyramid_quad_coefficient()(Fraction(1, 2)) == Fraction(3, 32)
    for c in (2, 3, 4):
        assert pyramid_class_coefficient(4)(Fraction(1, c)) < 0
    for c in (5, 6, 7, 10):
        assert pyramid_class_coefficient(4)(Fraction(1, c)) > 0


def test_class_key_invariant_under_relabeling_and_order():
    rng = random.Random(5)
    tris = [(0, 1, 2), (0, 1, 3), (1, 3, 4), (2, 3, 4)]
    base = class_key(tris)
    for _ in range(10):
        perm = list(range(30))
        rng.shuffle(perm)
        mapped = [tuple(sorted(perm[v] for v in t)) for t in tris]
        rng.shuffle(mapped)
        assert class_key(mapped) == base


def test_class_key_distinguishes_shapes():
    shared_edge = class_key([(0, 1, 2), (0, 1, 3)])
    shared_vertex = class_key([(0, 1, 2), (0, 3, 4)])
    disjoint = class_key([(0, 1, 2), (3, 4, 5)])
    assert len({shared_edge, shared_vertex, disjoint}) == 3


def test_key_representative_round_trip():
    for tris in ([(0, 1, 2)], [(0, 1, 2), (0, 1, 3)], list(QUAD_REP)):
        key = class_key(tris)
        rep = key_representative(key)
        assert class_key(rep) == key


def test_fourth_moment_spot_values():
    cases = [
        (complete(3), 2, Fraction(-2, 3)),
        (complete(4), 2, Fraction(5, 3)),
        (pyramid(2), 2, Fraction(-1, 4)),
    ]
    for g, c, want in cases:
        tc = triangle_census(g)
        dec = fourth_moment_exact(tc, pyramid_counts(tc), c)
        assert dec.excess4 == want


def test_fourth_moment_matches_enumeration(small_corpus):
    for name, g in small_corpus:
        tc = triangle_census(g)
        pc = pyramid_counts(tc)
        if pc.n1 == 0:
            continue
        for c in (2, 3, 4, 5, 7):
            if c**g.n > 10**7:
                continue
            dec = fourth_moment_exact(tc, pc, c)
            dist = exact_distribution(g, c, tc=tc)
            assert dec.excess4 == dist.excess4("T3"), (name, c)


def test_fourth_moment_relabeling_invariant():
    rng = random.Random(2)
    g = gnp(9, 0.5, 4)
    tc = triangle_census(g)
    base = fourth_moment_exact(tc, pyramid_counts(tc), 3).excess4
    perm = list(range(g.n))
    rng.shuffle(perm)
    h = relabeled(g, perm)
    tch = triangle_census(h)
    assert fourth_moment_exact(tch, pyramid_counts(tch), 3).excess4 == base


def test_fourth_moment_requires_triangles():
    from monoclt.graph import cycle

    tc = triangle_census(cycle(5))
    with pytest.raises(NoTrianglesError):
        fourth_moment_exact(tc, pyramid_counts(tc), 2)


def test_budget_enforced():
    tc = triangle_census(complete(6))
    with pytest.raises(BudgetExceededError):
        fourth_moment_exact(tc, pyramid_counts(tc), 2, budget=10)


def test_discovery_thread_invariance():
    tris = triangle_census(complete(7)).triangles
    serial = discover_classes(tris)
    threaded = discover_classes(tris, threads=4)
    assert [(r.key, n) for r, n in serial.entries] == [(r.key, n) for r, n in threaded.entries]


def test_discovery_counts_on_k4():
    # K4: 4 single triangles, 6 shared-edge pairs, 4 one-face-missing
    # triples, 1 full tetrahedron quadruple; every class connected
    disc = discover_classes(triangle_census(complete(4)).triangles)
    by_size = {}
    for rec, cnt in disc.entries:
        assert rec.is_connected()
        by_size[rec.specified_triangles] = by_size.get(rec.specified_triangles, 0) + cnt
    assert by_size == {1: 4, 2: 6, 3: 4, 4: 1}


def test_decomposition_counts_on_pyramid():
    # the n-pyramid realizes exactly the four shared-edge classes
    g = pyramid(6)
    tc = triangle_census(g)
    dec = fourth_moment_exact(tc, pyramid_counts(tc), 2)
    got = {rec.key: cnt for rec, cnt in dec.entries}
    expected = {
        class_key([(0, 1, 2 + i) for i in range(s)]): n
        for s, n in ((1, 6), (2, 15), (3, 20), (4, 15))
    }
    assert got == expected


def test_decomposition_counts_on_bipyramid_chain():
    # 2n single triangles plus C(n,2) hub-alternation quadruples
    g = bipyramid_chain(3)
    tc = triangle_census(g)
    dec = fourth_moment_exact(tc, pyramid_counts(tc), 2)
    got = {rec.key: cnt for rec, cnt in dec.entries}
    assert got == {class_key([(0, 1, 2)]): 6, class_key(QUAD_REP): 3}


def test_k9_all_classes_against_enumeration():
    # K9 realizes every one of the 32 classes, so this one equality
    # validates all coefficient polynomials at once (1.95M colorings)
    g = complete(9)
    tc = triangle_census(g)
    dec = fourth_moment_exact(tc, pyramid_counts(tc), 5, threads=4)
    assert len(dec.entries) == 32
    assert dec.excess4 == Fraction(4673, 252)
    assert dec.excess4 == exact_distribution(g, 5, threads=4).excess4("T3")


def test_composite_decomposition_frozen_value():
    # pyramid(8) + chain(17) at c=2: the five contributing classes give
    # (42 d1 + 28 d2 + 56 d3 + 70 d4 + 136 h16) / sigma^4 = -1123/8281,
    # frozen from an independent hand evaluation of the closed forms
    from monoclt.graph import disjoint_union

    g = disjoint_union(pyramid(8), bipyramid_chain(17))
    tc = triangle_census(g)
    dec = fourth_moment_exact(tc, pyramid_counts(tc), 2)
    assert dec.excess4 == Fraction(-1123, 8281)
    got = {rec.key: cnt for rec, cnt in dec.entries}
    expected = {
        class_key([(0, 1, 2 + i) for i in range(s)]): cnt
        for s, cnt in ((1, 8 + 34), (2, 28), (3, 56), (4, 70))
    }
    expected[class_key(QUAD_REP)] = 136
    assert got == expected


def test_decomposition_json_schema():
    tc = triangle_census(complete(4))
    dec = fourth_moment_exact(tc, pyramid_counts(tc), 2)
    blob = dec.to_json_dict()
    assert blob["excess4"] == {"num": "5", "den": "3", "float": pytest.approx(5 / 3)}
    assert len(blob["classes"]) == 4
    for entry in blob["classes"]:
        assert set(entry) == {
            "signature",
            "representative_triangles",
            "representative_edges",
            "coefficient",
            "count",
        }
        int(entry["count"])
        for coef in entry["coefficient"]:
            int(coef)
