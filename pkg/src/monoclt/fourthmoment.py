"""Exact fourth-moment engine for the standardized monochromatic
triangle count.

Writing T as a sum of centered triangle indicators, E(T^4) expands over
ordered 4-tuples of triangles. Grouping tuples by the set of distinct
triangles involved (1 to 4 of them, "the specified triangles") and
subtracting the matching expansion of 3 Var(T)^2 assigns every such set
a polynomial coefficient in x = 1/c that depends only on the isomorphism
class of (union graph, specified triangle set). Sets whose union is
disconnected cancel exactly, so only vertex-connected sets are
enumerated:

    E(Z^4) - 3 = sum over classes of coefficient(x) * count / Var(T)^2.

Class identity is decided by an exact canonical form: fixing an order of
the k triangles, each union vertex gets a k-bit incidence pattern, and
the multiset of patterns determines the labeled structure completely;
minimizing over the k! <= 24 triangle orders gives a canonical key.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceededError, NoTrianglesError
from .ratpoly import ONE, X, ZERO, RationalPoly

DEFAULT_BUDGET = 10**8

Triangle = tuple[int, int, int]

_PERMS = {k: list(itertools.permutations(range(k))) for k in (1, 2, 3, 4)}


# ---------------------------------------------------------------------------
# configuration multisets and their centered-product expectations


@dataclass(frozen=True)
class TriangleMultiset:
    """1..4 distinct triangles with positive multiplicities summing to <= 4."""

    triangles: tuple[Triangle, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        tris = [tuple(sorted(t)) for t in self.triangles]
        if any(len(set(t)) != 3 for t in tris):
            raise ValueError("each triangle needs three distinct vertices")
        if len(set(tris)) != len(tris):
            raise ValueError("triangles must be distinct")
        if len(tris) != len(self.multiplicities):
            raise ValueError("one multiplicity per triangle")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be >= 1")
        total = sum(self.multiplicities)
        if not 1 <= total <= 4:
            raise ValueError("total multiplicity must be between 1 and 4")
        object.__setattr__(self, "triangles", tuple(tris))


def _union_stats(triangles: Sequence[Triangle]) -> tuple[int, int]:
    """(vertex count, connected component count) of the union graph."""
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for t in triangles:
        for v in t:
            parent.setdefault(v, v)
        ra = find(t[0])
        for v in t[1:]:
            rb = find(v)
            if ra != rb:
                parent[rb] = ra
    roots = {find(v) for v in parent}
    return len(parent), len(roots)


def _triangle_components(triangles: Sequence[Triangle]) -> list[list[int]]:
    """Indices of the triangles grouped by vertex-connectivity of the union."""
    groups: list[list[int]] = []
    vertex_group: dict[int, int] = {}
    for i, t in enumerate(triangles):
        hit = sorted({vertex_group[v] for v in t if v in vertex_group})
        if not hit:
            gid = len(groups)
            groups.append([i])
        else:
            gid = hit[0]
            groups[gid].append(i)
            for other in hit[1:]:
                groups[gid].extend(groups[other])
                for v_ in {v for j in groups[other] for v in triangles[j]}:
                    vertex_group[v_] = gid
                groups[other] = []
        for v in t:
            vertex_group[v] = gid
    return [sorted(g) for g in groups if g]


def _component_expectation(triangles: Sequence[Triangle], mults: Sequence[int]) -> RationalPoly:
    # E prod_i (X_i - x^2)^{m_i} over one vertex-connected component, by
    # inclusion-exclusion over which indicators survive: X_i binary gives
    # (X - p)^m = alpha + beta X with alpha = (-p)^m,
    # beta = (1-p)^m - (-p)^m, and P(all of T mono) = x^(|V(T)| - comps(T)).
    k = len(triangles)
    p = X**2
    alpha = [(-p) ** m for m in mults]
    beta = [(ONE - p) ** m - alpha[i] for i, m in enumerate(mults)]
    total = ZERO
    for bits in range(1 << k):
        coef = ONE
        chosen = []
        for i in range(k):
            if bits >> i & 1:
                coef = coef * beta[i]
                chosen.append(triangles[i])
            else:
                coef = coef * alpha[i]
        if chosen:
            nv, ncomp = _union_stats(chosen)
            coef = coef * X ** (nv - ncomp)
        total = total + coef
    return total


def centered_product_poly(mset: TriangleMultiset) -> RationalPoly:
    """E prod (1{triangle mono} - 1/c^2)^mult as a polynomial in x = 1/c.

    Factorizes over vertex-connected components; a component that is a
    single multiplicity-1 triangle is a mean-zero factor, so the whole
    product vanishes.
    """
    result = ONE
    for comp in _triangle_components(mset.triangles):
        if len(comp) == 1 and mset.multiplicities[comp[0]] == 1:
            return ZERO
        part = _component_expectation(
            [mset.triangles[i] for i in comp],
            [mset.multiplicities[i] for i in comp],
        )
        if part.is_zero:
            return ZERO
        result = result * part
    return result


def centered_product_expectation(mset: TriangleMultiset, c: int) -> Fraction:
    if c < 2:
        raise ValueError(f"need c >= 2 colors, got {c}")
    return centered_product_poly(mset)(Fraction(1, c))


# ---------------------------------------------------------------------------
# class coefficients


def _compositions_of_4(k: int) -> list[tuple[int, ...]]:
    return [m for m in itertools.product(range(1, 5), repeat=k) if sum(m) == 4]


def _multinomial4(m: Sequence[int]) -> int:
    out = math.factorial(4)
    for mi in m:
        out //= math.factorial(mi)
    return out


_VAR_A = X**2 - X**4  # variance of one triangle indicator
_VAR_B = 2 * (X**3 - X**4)  # 2 cov of an edge-sharing pair


def class_coefficient(triangles: Iterable[Triangle]) -> RationalPoly:
    """Coefficient polynomial of the class represented by these 1..4
    distinct triangles.

    Fourth-moment side: sum over multiplicity assignments (positive, total
    4) of the multinomial count times the centered-product expectation.
    Variance side: 3 Var(T)^2 expands over ordered pairs of constituents,
    where a constituent is a single triangle (weight x^2 - x^4) or an
    edge-sharing pair (weight 2(x^3 - x^4)); every ordered pair whose
    triangles cover exactly this set contributes 3 * weight * weight.
    """
    tris = tuple(sorted(tuple(sorted(t)) for t in triangles))
    k = len(tris)
    if not 1 <= k <= 4:
        raise ValueError("a class has 1 to 4 specified triangles")
    e_side = ZERO
    for m in _compositions_of_4(k):
        e_side = e_side + _multinomial4(m) * centered_product_poly(TriangleMultiset(tris, m))
    vsets = [frozenset(t) for t in tris]
    constituents: list[tuple[frozenset, RationalPoly]] = [
        (frozenset([i]), _VAR_A) for i in range(k)
    ]
    for i in range(k):
        for j in range(i + 1, k):
            if len(vsets[i] & vsets[j]) == 2:
                constituents.append((frozenset([i, j]), _VAR_B))
    full = frozenset(range(k))
    v_side = ZERO
    for si, wi in constituents:
        for sj, wj in constituents:
            if si | sj == full:
                v_side = v_side + 3 * (wi * wj)
    return e_side - v_side


@lru_cache(maxsize=None)
def pyramid_class_coefficient(s: int) -> RationalPoly:
    """Coefficient of the s-pyramid class (s triangles on one shared edge)."""
    if not 1 <= s <= 4:
        raise ValueError("pyramid classes have 1 to 4 triangles")
    return class_coefficient([(0, 1, 2 + i) for i in range(s)])


@lru_cache(maxsize=None)
def bipyramid_quad_coefficient() -> RationalPoly:
    """Coefficient of the class realized by quadruples
    {a,s,.},{b,s,.},{a,t,.},{b,t,.} in the bipyramid chain: four triangles
    meeting pairwise in at most a vertex, hub/spine contacts forming a
    4-cycle a-s-b-t."""
    return class_coefficient([(0, 2, 4), (1, 2, 5), (0, 3, 6), (1, 3, 7)])


# ---------------------------------------------------------------------------
# canonical classing


def class_key(triangles: Sequence[Triangle]) -> tuple:
    """Canonical key of a set of distinct triangles under vertex relabeling.

    With the triangle order fixed, each union vertex is described
    completely by its incidence bitmask over the triangles; the sorted
    pattern multiset therefore determines the structure up to vertex
    relabeling, and minimizing over triangle orders removes the remaining
    freedom.
    """
    tris = [frozenset(t) for t in triangles]
    k = len(tris)
    if len(set(tris)) != k or not 1 <= k <= 4:
        raise ValueError("need 1 to 4 distinct triangles")
    verts = sorted(set().union(*tris))
    base = [sum(1 << i for i, t in enumerate(tris) if v in t) for v in verts]
    best = None
    for perm in _PERMS[k]:
        mapped = tuple(sorted(sum(((pat >> i) & 1) << perm[i] for i in range(k)) for pat in base))
        if best is None or mapped < best:
            best = mapped
    return (k, best)


def key_representative(key: tuple) -> tuple[Triangle, ...]:
    """Rebuild a concrete representative (on vertices 0..v-1) from a key."""
    k, patterns = key
    tris = []
    for i in range(k):
        tri = tuple(v for v, pat in enumerate(patterns) if (pat >> i) & 1)
        if len(tri) != 3:
            raise ValueError(f"invalid class key {key!r}")
        tris.append(tri)
    return tuple(tris)


@dataclass(frozen=True)
class ClassRecord:
    """One configuration class: canonical key, a representative on small
    vertex labels, and its coefficient polynomial."""

    key: tuple
    representative: tuple[Triangle, ...]
    coefficient: RationalPoly

    @property
    def specified_triangles(self) -> int:
        return self.key[0]

    @property
    def vertex_count(self) -> int:
        return len(self.key[1])

    def union_edges(self) -> tuple[tuple[int, int], ...]:
        edges = set()
        for a, b, c in self.representative:
            edges.update(((a, b), (a, c), (b, c)))
        return tuple(sorted(edges))

    def degree_multiset(self) -> tuple[int, ...]:
        deg: dict[int, int] = {}
        for u, v in self.union_edges():
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return tuple(sorted(deg.values()))

    def is_connected(self) -> bool:
        return _union_stats(self.representative)[1] == 1


_RECORD_CACHE: dict[tuple, ClassRecord] = {}


def _record_for_key(key: tuple) -> ClassRecord:
    rec = _RECORD_CACHE.get(key)
    if rec is None:
        rep = key_representative(key)
        rec = ClassRecord(key=key, representative=rep, coefficient=class_coefficient(rep))
        _RECORD_CACHE[key] = rec
    return rec


# ---------------------------------------------------------------------------
# enumeration of connected triangle sets


def _subset_key0(vm: Sequence[int], members: Sequence[int]) -> tuple:
    # Fast per-subset fingerprint: popcounts of all intersections of the
    # member vertex masks. For the (ordered) members this determines the
    # incidence-pattern multiset exactly, so the map key0 -> class is
    # well-defined; it is just not yet order-canonical.
    if len(members) == 2:
        a, b = members
        return (2, (vm[a] & vm[b]).bit_count())
    if len(members) == 3:
        a, b, c = members
        va, vb, vc = vm[a], vm[b], vm[c]
        ab = va & vb
        return (
            3,
            ab.bit_count(),
            (va & vc).bit_count(),
            (vb & vc).bit_count(),
            (ab & vc).bit_count(),
        )
    a, b, c, d = members
    va, vb, vc, vd = vm[a], vm[b], vm[c], vm[d]
    ab = va & vb
    ac = va & vc
    bc = vb & vc
    cd = vc & vd
    return (
        4,
        ab.bit_count(),
        ac.bit_count(),
        (va & vd).bit_count(),
        bc.bit_count(),
        (vb & vd).bit_count(),
        cd.bit_count(),
        (ab & vc).bit_count(),
        (ab & vd).bit_count(),
        (ac & vd).bit_count(),
        (bc & vd).bit_count(),
        (ab & cd).bit_count(),
    )


def _triangle_adjacency(triangles: Sequence[Triangle]) -> tuple[list[int], list[int]]:
    """(vertex masks, adjacency masks) over triangle indices; two
    triangles are adjacent when they share at least one vertex."""
    vm = [(1 << a) | (1 << b) | (1 << c) for a, b, c in triangles]
    at_vertex: dict[int, list[int]] = {}
    for i, t in enumerate(triangles):
        for v in t:
            at_vertex.setdefault(v, []).append(i)
    adjm = [0] * len(triangles)
    for tris in at_vertex.values():
        mask = 0
        for i in tris:
            mask |= 1 << i
        for i in tris:
            adjm[i] |= mask
    for i in range(len(triangles)):
        adjm[i] &= ~(1 << i)
    return vm, adjm


def _enumerate_seeds(
    seeds: Iterable[int],
    vm: Sequence[int],
    adjm: Sequence[int],
    budget: int,
) -> tuple[dict, dict, int]:
    """Enumerate every connected subset of 1..4 triangles whose minimum
    index is a seed, tallying subsets per key0 fingerprint.

    Uses extension enumeration on the triangle-adjacency graph: a subset
    containing seed v only ever grows through indices > v, and each
    candidate is offered for extension exactly once, so every connected
    subset appears exactly once.
    """
    counts: dict[tuple, int] = {}
    reps: dict[tuple, tuple[int, ...]] = {}
    emitted = 0

    def tally(members: tuple[int, ...]):
        key = _subset_key0(vm, members)
        prev = counts.get(key)
        if prev is None:
            counts[key] = 1
            reps[key] = members
        else:
            counts[key] = prev + 1

    def extend(members: tuple[int, ...], nbhd: int, ext: int):
        nonlocal emitted
        while ext:
            wbit = ext & -ext
            ext ^= wbit
            w = wbit.bit_length() - 1
            new_members = members + (w,)
            emitted += 1
            if emitted > budget:
                raise BudgetExceededError(
                    f"connected configuration count exceeded budget {budget}"
                )
            tally(new_members)
            if len(new_members) < 4:
                extend(new_members, nbhd | adjm[w], ext | (adjm[w] & ~nbhd & gt_mask))

    for v in seeds:
        emitted += 1
        if emitted > budget:
            raise BudgetExceededError(f"connected configuration count exceeded budget {budget}")
        key1 = (1,)
        counts[key1] = counts.get(key1, 0) + 1
        reps.setdefault(key1, (v,))
        gt_mask = -1 << (v + 1)
        nbhd = adjm[v] | (1 << v)
        extend((v,), nbhd, adjm[v] & gt_mask)
    return counts, reps, emitted


def _merge_tallies(parts) -> tuple[dict, dict, int]:
    counts: dict[tuple, int] = {}
    reps: dict[tuple, tuple[int, ...]] = {}
    emitted = 0
    for pc, pr, pe in parts:
        emitted += pe
        for key, cnt in pc.items():
            counts[key] = counts.get(key, 0) + cnt
            reps.setdefault(key, pr[key])
    return counts, reps, emitted


@dataclass(frozen=True)
class Discovery:
    """Classes found in one graph: entries pair each nonzero-coefficient
    class with its embedded-copy count; zero-coefficient classes are
    dropped (their key count is reported for diagnostics)."""

    entries: tuple[tuple[ClassRecord, int], ...]
    zero_class_count: int
    enumerated: int

    def by_key(self) -> dict[tuple, tuple[ClassRecord, int]]:
        return {rec.key: (rec, cnt) for rec, cnt in self.entries}


def discover_classes(
    triangles: Sequence[Triangle],
    *,
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
) -> Discovery:
    """Enumerate all connected 1..4-triangle configurations, grouped into
    canonical classes with exact counts."""
    vm, adjm = _triangle_adjacency(triangles)
    m = len(triangles)
    if threads and threads > 1 and m > 8:
        stripes = [range(s, m, threads) for s in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: _enumerate_seeds(s, vm, adjm, budget), stripes))
        counts0, reps0, emitted = _merge_tallies(parts)
        if emitted > budget:
            raise BudgetExceededError(f"connected configuration count exceeded budget {budget}")
    else:
        counts0, reps0, emitted = _enumerate_seeds(range(m), vm, adjm, budget)

    key0_to_key: dict[tuple, tuple] = {}
    class_counts: dict[tuple, int] = {}
    for key0, cnt in counts0.items():
        key = key0_to_key.get(key0)
        if key is None:
            key = class_key([triangles[i] for i in reps0[key0]])
            key0_to_key[key0] = key
        class_counts[key] = class_counts.get(key, 0) + cnt

    entries = []
    zero_classes = 0
    for key in sorted(class_counts):
        rec = _record_for_key(key)
        # enumeration is over vertex-connected sets only; anything else
        # slipping through would signal a broken walker
        assert rec.is_connected(), f"disconnected class emitted: {key}"
        if rec.coefficient.is_zero:
            zero_classes += 1
        else:
            entries.append((rec, class_counts[key]))
    return Discovery(entries=tuple(entries), zero_class_count=zero_classes, enumerated=emitted)


# ---------------------------------------------------------------------------
# the exact fourth moment


@dataclass(frozen=True)
class Decomposition:
    """E(Z^4) - 3 for one graph and color count, split over classes."""

    c: int
    sigma2: Fraction
    entries: tuple[tuple[ClassRecord, int], ...]
    excess4: Fraction
    enumerated: int

    @property
    def sigma4(self) -> Fraction:
        return self.sigma2**2

    def to_json_dict(self) -> dict:
        classes = []
        for rec, cnt in self.entries:
            coeffs = []
            for coef in rec.coefficient.coeffs:
                assert coef.denominator == 1
                coeffs.append(str(coef.numerator))
            classes.append(
                {
                    "signature": {
                        "specified_triangles": rec.specified_triangles,
                        "vertices": rec.vertex_count,
                        "edges": len(rec.union_edges()),
                        "degrees": list(rec.degree_multiset()),
                    },
                    "representative_triangles": [list(t) for t in rec.representative],
                    "representative_edges": [list(e) for e in rec.union_edges()],
                    "coefficient": coeffs,
                    "count": str(cnt),
                }
            )
        return {
            "c": self.c,
            "classes": classes,
            "sigma2": _fraction_json(self.sigma2),
            "excess4": _fraction_json(self.excess4),
            "enumerated_configurations": self.enumerated,
        }


def _fraction_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator), "float": float(q)}


def fourth_moment_exact(
    tc,
    pc,
    c: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
) -> Decomposition:
    """Exact E(Z^4) - 3 for the monochromatic triangle count of the graph
    behind the census tc (pyramid counts pc feed the variance)."""
    from .moments import t3_mean_var

    if pc.n1 < 1:
        raise NoTrianglesError("fourth moment needs at least one triangle")
    disc = discover_classes(tc.triangles, budget=budget, threads=threads)
    x = Fraction(1, c)
    sigma2 = t3_mean_var(pc, c).variance
    total = Fraction(0)
    for rec, cnt in disc.entries:
        total += rec.coefficient(x) * cnt
    return Decomposition(
        c=c,
        sigma2=sigma2,
        entries=disc.entries,
        excess4=total / sigma2**2,
        enumerated=disc.enumerated,
    )
