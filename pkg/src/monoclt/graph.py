"""Simple undirected graphs: construction, edge-list I/O, and generators
for every family used in the experiments.

Families:
    complete(n)         K_n
    star(n)             K_{1,n}: center 0, n leaves
    cycle(n)            C_n, n >= 3
    pyramid(n)          n triangles sharing one base edge: vertices
                        {0, 1} (base) and {2, ..., n+1} (apexes)
    bipyramid_chain(n)  two hubs a=0, b=1, spine 2..n+1; spine vertex s
                        forms one triangle with each hub through a private
                        third vertex, so 2n edge-disjoint triangles total
    composite(n, c)     pyramid(n) disjoint-union bipyramid_chain(n') with
                        n' sized so the two families' fourth-moment
                        contributions cancel at c colors (2 <= c <= 4)
    gnp(n, p, seed)     Erdos-Renyi G(n, p), deterministic given seed
    disjoint_union      disjoint union of sub-family specs
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BadParamsError,
    CompositeUndefinedError,
    MalformedLineError,
    SelfLoopError,
)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    edges are stored as (u, v) with u < v in ascending order; adjacency
    lists are sorted. Instances are immutable and safe to share.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            norm.add((u, v) if u < v else (v, u))
        edge_tuple = tuple(sorted(norm))
        adj_lists = [[] for _ in range(n)]
        for u, v in edge_tuple:
            adj_lists[u].append(v)
            adj_lists[v].append(u)
        adj = tuple(tuple(sorted(a)) for a in adj_lists)
        return cls(n=n, edges=edge_tuple, adj=adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def digest(self) -> str:
        """sha256 of the canonical serialization; used in CLI reports."""
        return hashlib.sha256(serialize_edge_list(self).encode()).hexdigest()


@dataclass(frozen=True)
class ParseResult:
    graph: Graph
    duplicate_count: int
    # id_map[i] = original id of internal vertex i (identity when a
    # vertices= header pinned the numbering)
    id_map: tuple[int, ...]


_HEADER_RE = re.compile(r"vertices\s*=\s*(\d+)")


def parse_edge_list(text: str) -> ParseResult:
    """Parse whitespace-separated "u v" lines into a Graph.

    '#' starts a comment. A header comment "# vertices=N ..." pins the
    vertex count (allowing isolated vertices); otherwise the distinct ids
    seen are compacted to 0..k-1 and the original ids preserved in id_map.
    Duplicate edges are collapsed and tallied; self-loops are rejected.
    """
    header_n: Optional[int] = None
    raw_edges: list[tuple[int, int]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        body, _, comment = line.partition("#")
        if header_n is None and comment:
            m = _HEADER_RE.search(comment)
            if m:
                header_n = int(m.group(1))
        body = body.strip()
        if not body:
            continue
        tokens = body.split()
        if len(tokens) != 2:
            raise MalformedLineError(line_no, line)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise MalformedLineError(line_no, line) from None
        if u < 0 or v < 0:
            raise MalformedLineError(line_no, line)
        if u == v:
            raise SelfLoopError(u, line_no)
        raw_edges.append((u, v) if u < v else (v, u))

    seen = set()
    duplicates = 0
    deduped = []
    for e in raw_edges:
        if e in seen:
            duplicates += 1
        else:
            seen.add(e)
            deduped.append(e)

    if header_n is not None:
        for u, v in deduped:
            if v >= header_n:
                raise MalformedLineError(0, f"vertex id {v} >= declared vertices={header_n}")
        graph = Graph.from_edges(header_n, deduped)
        return ParseResult(graph, duplicates, tuple(range(header_n)))

    ids = sorted({x for e in deduped for x in e})
    compact = {orig: i for i, orig in enumerate(ids)}
    graph = Graph.from_edges(len(ids), [(compact[u], compact[v]) for u, v in deduped])
    return ParseResult(graph, duplicates, tuple(ids))


def serialize_edge_list(g: Graph) -> str:
    """Canonical text form: header comment plus "u v" lines in ascending order."""
    lines = [f"# vertices={g.n} edges={g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# family generators

_FAMILIES = (
    "complete",
    "star",
    "cycle",
    "pyramid",
    "bipyramid_chain",
    "composite",
    "gnp",
    "disjoint_union",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: Optional[int] = None
    p: Optional[float] = None
    seed: Optional[int] = None
    c: Optional[int] = None
    parts: tuple["FamilySpec", ...] = field(default=())

    def describe(self) -> dict:
        out: dict = {"family": self.family}
        if self.n is not None:
            out["n"] = self.n
        if self.p is not None:
            out["p"] = self.p
        if self.seed is not None:
            out["seed"] = self.seed
        if self.c is not None:
            out["c"] = self.c
        if self.parts:
            out["parts"] = [p.describe() for p in self.parts]
        return out


def _require_n(spec: FamilySpec, minimum: int) -> int:
    if spec.n is None or spec.n < minimum:
        raise BadParamsError(f"{spec.family} requires n >= {minimum}, got {spec.n}")
    return spec.n


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star(n: int) -> Graph:
    """K_{1,n}: n edges from center 0."""
    return Graph.from_edges(n + 1, [(0, v) for v in range(1, n + 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def pyramid(n: int) -> Graph:
    """n triangles {0, 1, s} sharing the base edge (0, 1); n+2 vertices, 2n+1 edges."""
    edges = [(0, 1)]
    for s in range(2, n + 2):
        edges.append((0, s))
        edges.append((1, s))
    return Graph.from_edges(n + 2, edges)


def bipyramid_chain(n: int) -> Graph:
    """Hubs a=0 and b=1, spine 2..n+1, private apexes n+2..3n+1.

    Spine vertex s (0-based id 1+s) makes triangles {a, s, u_{a,s}} and
    {b, s, u_{b,s}}; 3n+2 vertices, 6n edges, 2n triangles, and no two
    triangles share an edge.
    """
    edges = []
    for s in range(1, n + 1):
        spine = 1 + s
        ua = n + 1 + s
        ub = 2 * n + 1 + s
        edges += [(0, spine), (0, ua), (spine, ua)]
        edges += [(1, spine), (1, ub), (spine, ub)]
    return Graph.from_edges(3 * n + 2, edges)


def composite_chain_length(n: int, c: int) -> int:
    """Chain size n' = ceil(sqrt(2|d4|/h16 * C(n,4))) used by composite(n, c).

    d4 and h16 are the 4-pyramid and chain-quadruple class coefficients of
    the exact fourth-moment decomposition; d4 < 0 only for 2 <= c <= 4,
    which is exactly when the construction exists.
    """
    from .fourthmoment import bipyramid_quad_coefficient, pyramid_class_coefficient

    if c < 2:
        raise BadParamsError(f"composite requires c >= 2, got {c}")
    x = Fraction(1, c)
    d4 = pyramid_class_coefficient(4)(x)
    h16 = bipyramid_quad_coefficient()(x)
    if d4 >= 0:
        raise CompositeUndefinedError(
            f"composite family undefined for c={c}: 4-pyramid coefficient {d4} is nonnegative"
        )
    target = 2 * (-d4) / h16 * math.comb(n, 4)  # n'^2 >= target, minimal
    k = math.isqrt(target.numerator // target.denominator)
    while k * k * target.denominator < target.numerator:
        k += 1
    return k


def gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with a counter-based generator; identical seeds give
    identical graphs regardless of platform or thread count."""
    if not (0.0 <= p <= 1.0):
        raise BadParamsError(f"gnp requires 0 <= p <= 1, got {p}")
    rng = np.random.Generator(np.random.Philox(key=seed & _MASK64))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    draws = rng.random(len(pairs))
    return Graph.from_edges(n, [e for e, d in zip(pairs, draws) if d < p])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph.from_edges(offset, edges)


def generate(spec: FamilySpec) -> Graph:
    """Build the graph described by spec. Deterministic for every family;
    gnp is deterministic given its seed."""
    fam = spec.family
    if fam not in _FAMILIES:
        raise BadParamsError(f"unknown family {fam!r}; expected one of {_FAMILIES}")
    if fam == "complete":
        return complete(_require_n(spec, 1))
    if fam == "star":
        return star(_require_n(spec, 1))
    if fam == "cycle":
        return cycle(_require_n(spec, 3))
    if fam == "pyramid":
        return pyramid(_require_n(spec, 1))
    if fam == "bipyramid_chain":
        return bipyramid_chain(_require_n(spec, 1))
    if fam == "composite":
        n = _require_n(spec, 4)
        if spec.c is None:
            raise BadParamsError("composite requires c")
        n_chain = composite_chain_length(n, spec.c)
        return disjoint_union(pyramid(n), bipyramid_chain(n_chain))
    if fam == "gnp":
        n = _require_n(spec, 1)
        if spec.p is None:
            raise BadParamsError("gnp requires p")
        if spec.seed is None:
            raise BadParamsError("gnp requires a seed")
        return gnp(n, spec.p, spec.seed)
    if fam == "disjoint_union":
        if not spec.parts:
            raise BadParamsError("disjoint_union requires at least one part")
        return disjoint_union(*(generate(part) for part in spec.parts))
    raise AssertionError("unreachable")
