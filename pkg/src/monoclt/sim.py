"""Randomized and exhaustive oracles for the coloring statistics.

Monte Carlo sampling uses a counter-based generator keyed by
(seed, block index) over fixed-size replication blocks, so results are
bit-identical for a given (seed, replications) no matter how many
threads run the blocks or in what order. The exhaustive oracle iterates
every coloring in fixed-width chunks and returns the exact joint law of
(edge count, triangle count) with rational masses.

Empirical moments are exact: statistics are small nonnegative integers,
so each run is reduced to a value-count table and moments come from
big-integer power sums.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .census import TriangleCensus, pyramid_counts, triangle_census
from .errors import EmptySampleError, TooLargeError
from .graph import Graph
from .moments import T2Inputs, standard_normal_cdf, t2_moments, t3_mean_var

BLOCK = 1024  # replications per RNG block; fixed so reports never depend on threading
DEFAULT_ENUM_CAP = 10**7
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    c: int
    replications: int
    seed: int
    statistic: str = "both"  # "T2", "T3", or "both"
    atom_gap: Optional[float] = None  # raw-scale gap for atom clustering

    def __post_init__(self):
        if self.c < 2:
            raise ValueError(f"need c >= 2 colors, got {self.c}")
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.statistic not in ("T2", "T3", "both"):
            raise ValueError(f"unknown statistic {self.statistic!r}")


@dataclass(frozen=True)
class Atom:
    location: float
    mass: float


@dataclass(frozen=True)
class StatisticSummary:
    """Empirical law of one statistic from a sampling run."""

    statistic: str
    replications: int
    distribution: tuple[tuple[int, int], ...]  # (value, count), ascending
    mean: Fraction
    variance: Fraction
    central4: Fraction
    model_mean: Optional[Fraction]
    model_variance: Optional[Fraction]
    ks_normal: Optional[float]  # KS of the model-standardized law vs N(0,1)
    atoms: tuple[Atom, ...] = field(default=())

    def to_json_dict(self) -> dict:
        out = {
            "statistic": self.statistic,
            "replications": self.replications,
            "distribution": [[int(v), int(n)] for v, n in self.distribution],
            "mean": _frac_json(self.mean),
            "variance": _frac_json(self.variance),
            "central4": _frac_json(self.central4),
            "ks_normal": self.ks_normal,
        }
        if self.model_mean is not None:
            out["model_mean"] = _frac_json(self.model_mean)
            out["model_variance"] = _frac_json(self.model_variance)
        if self.atoms:
            out["atoms"] = [{"location": a.location, "mass": a.mass} for a in self.atoms]
        return out


@dataclass(frozen=True)
class SimReport:
    config: SimConfig
    summaries: tuple[StatisticSummary, ...]

    def summary(self, statistic: str) -> StatisticSummary:
        for s in self.summaries:
            if s.statistic == statistic:
                return s
        raise KeyError(statistic)

    def to_json_dict(self) -> dict:
        return {
            "config": {
                "c": self.config.c,
                "replications": self.config.replications,
                "seed": self.config.seed,
                "statistic": self.config.statistic,
                "atom_gap": self.config.atom_gap,
            },
            "results": [s.to_json_dict() for s in self.summaries],
        }


def _frac_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator), "float": float(q)}


# ---------------------------------------------------------------------------
# Monte Carlo sampling


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, block & _MASK64]))


def sample_statistics(
    g: Graph,
    cfg: SimConfig,
    tc: Optional[TriangleCensus] = None,
    threads: Optional[int] = None,
    raw_sinks: Optional[dict] = None,
) -> SimReport:
    """Sample uniformly random colorings and tabulate the statistics.

    Identical (seed, replications) give identical reports regardless of
    thread count: block b of 1024 replications always draws from the
    stream keyed (seed, b), and value counts are summed.

    raw_sinks optionally maps a statistic name ("T2"/"T3") to a writable
    binary stream; per-replication values are then written to it as
    little-endian 64-bit integers in replication order.
    """
    want_t2 = cfg.statistic in ("T2", "both")
    want_t3 = cfg.statistic in ("T3", "both")
    raw_sinks = raw_sinks or {}
    keep_raw = bool(raw_sinks)
    if tc is None and want_t3:
        tc = triangle_census(g)

    edges = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2) if want_t2 else None
    tris = (
        np.asarray(tc.triangles, dtype=np.int64).reshape(-1, 3) if want_t3 else None
    )
    dtype = np.uint8 if cfg.c <= 255 else np.uint16
    n_blocks = (cfg.replications + BLOCK - 1) // BLOCK

    def run_block(b: int):
        size = min(BLOCK, cfg.replications - b * BLOCK)
        colors = _block_rng(cfg.seed, b).integers(0, cfg.c, size=(size, g.n), dtype=dtype)
        t2 = t3 = c2 = c3 = None
        if want_t2:
            if len(edges):
                t2 = (colors[:, edges[:, 0]] == colors[:, edges[:, 1]]).sum(axis=1)
            else:
                t2 = np.zeros(size, dtype=np.int64)
            c2 = np.bincount(t2, minlength=(len(edges) + 1))
        if want_t3:
            if len(tris):
                a = colors[:, tris[:, 0]]
                bb = colors[:, tris[:, 1]]
                cc = colors[:, tris[:, 2]]
                t3 = ((a == bb) & (bb == cc)).sum(axis=1)
            else:
                t3 = np.zeros(size, dtype=np.int64)
            c3 = np.bincount(t3, minlength=(len(tris) + 1))
        if not keep_raw:
            t2 = t3 = None
        return c2, c3, t2, t3

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_block, range(n_blocks)))
    else:
        results = [run_block(b) for b in range(n_blocks)]

    for name, idx in (("T2", 2), ("T3", 3)):
        sink = raw_sinks.get(name)
        if sink is not None:
            for r in results:  # block order == replication order
                if r[idx] is not None:
                    sink.write(r[idx].astype("<i8").tobytes())

    summaries = []
    if want_t2:
        counts2 = np.sum([r[0] for r in results], axis=0, dtype=np.int64)
        model2 = None
        if g.edge_count >= 1:
            model2 = t2_moments(T2Inputs.from_graph(g), cfg.c)
        summaries.append(_summarize("T2", counts2, cfg, model2))
    if want_t3:
        counts3 = np.sum([r[1] for r in results], axis=0, dtype=np.int64)
        model3 = None
        if len(tc.triangles) >= 1:
            model3 = t3_mean_var(pyramid_counts(tc), cfg.c)
        summaries.append(_summarize("T3", counts3, cfg, model3))
    return SimReport(config=cfg, summaries=tuple(summaries))


def _summarize(name: str, counts: np.ndarray, cfg: SimConfig, model) -> StatisticSummary:
    support = [int(v) for v in np.nonzero(counts)[0]]
    dist = tuple((v, int(counts[v])) for v in support)
    total = cfg.replications
    mean, var, m4 = _moments_from_counts(dist, total)
    ks = None
    if model is not None and model.variance > 0:
        mu = float(model.mean)
        sd = math.sqrt(float(model.variance))
        zs = [(v - mu) / sd for v, _ in dist]
        masses = [n / total for _, n in dist]
        ks = ks_from_distribution(zs, masses, standard_normal_cdf)
    atoms: tuple[Atom, ...] = ()
    if cfg.atom_gap is not None:
        atoms = atom_summary(
            [float(v) for v, _ in dist], [n / total for _, n in dist], cfg.atom_gap
        )
    return StatisticSummary(
        statistic=name,
        replications=total,
        distribution=dist,
        mean=mean,
        variance=var,
        central4=m4,
        model_mean=None if model is None else model.mean,
        model_variance=None if model is None else model.variance,
        ks_normal=ks,
        atoms=atoms,
    )


def _moments_from_counts(
    dist: Sequence[tuple[int, int]], total: int
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact mean, variance, and fourth central moment from value counts."""
    s1 = sum(v * n for v, n in dist)
    s2 = sum(v * v * n for v, n in dist)
    s3 = sum(v**3 * n for v, n in dist)
    s4 = sum(v**4 * n for v, n in dist)
    mu = Fraction(s1, total)
    m2 = Fraction(s2, total) - mu**2
    m4 = Fraction(s4, total) - 4 * mu * Fraction(s3, total) + 6 * mu**2 * Fraction(s2, total) - 3 * mu**4
    return mu, m2, m4


# ---------------------------------------------------------------------------
# exhaustive enumeration oracle


@dataclass(frozen=True)
class ExactDistribution:
    """Exact joint law of (T2, T3) over all c^n colorings."""

    c: int
    n: int
    joint: dict[tuple[int, int], Fraction]

    def t2_pmf(self) -> dict[int, Fraction]:
        return _marginal(self.joint, 0)

    def t3_pmf(self) -> dict[int, Fraction]:
        return _marginal(self.joint, 1)

    def moments(self, which: str) -> tuple[Fraction, Fraction, Fraction]:
        """(mean, variance, fourth central moment) of T2 or T3."""
        pmf = self.t2_pmf() if which == "T2" else self.t3_pmf()
        mu = sum((Fraction(v) * p for v, p in pmf.items()), Fraction(0))
        m2 = sum(((v - mu) ** 2 * p for v, p in pmf.items()), Fraction(0))
        m4 = sum(((v - mu) ** 4 * p for v, p in pmf.items()), Fraction(0))
        return mu, m2, m4

    def excess4(self, which: str) -> Fraction:
        mu, m2, m4 = self.moments(which)
        if m2 == 0:
            raise ZeroDivisionError("degenerate statistic has no standardized law")
        return m4 / m2**2 - 3


def _marginal(joint: dict, index: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for key, p in joint.items():
        k = key[index]
        out[k] = out.get(k, Fraction(0)) + p
    return dict(sorted(out.items()))


def exact_distribution(
    g: Graph,
    c: int,
    cap: int = DEFAULT_ENUM_CAP,
    threads: Optional[int] = None,
    tc: Optional[TriangleCensus] = None,
) -> ExactDistribution:
    """Joint pmf of (T2, T3) by iterating all c^n colorings.

    Work is chunked over fixed color-prefix blocks; chunk tallies are
    integer arrays summed in a fixed order, so the result is exact and
    independent of thread count.
    """
    if c < 2:
        raise ValueError(f"need c >= 2 colors, got {c}")
    total = c**g.n
    if total > cap:
        raise TooLargeError(f"enumeration size {total} exceeds cap {cap}")
    if tc is None:
        tc = triangle_census(g)
    edges = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    tris = np.asarray(tc.triangles, dtype=np.int64).reshape(-1, 3)
    stride = len(tris) + 1
    width = (len(edges) + 1) * stride
    divisors = np.array([c**j for j in range(g.n)], dtype=np.int64)

    chunk_size = min(total, 1 << 18)
    starts = list(range(0, total, chunk_size))

    def run_chunk(start: int) -> np.ndarray:
        idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
        colors = np.empty((len(idx), g.n), dtype=np.uint16)
        for j in range(g.n):
            colors[:, j] = (idx // divisors[j]) % c
        if len(edges):
            t2 = (colors[:, edges[:, 0]] == colors[:, edges[:, 1]]).sum(axis=1)
        else:
            t2 = np.zeros(len(idx), dtype=np.int64)
        if len(tris):
            a = colors[:, tris[:, 0]]
            b = colors[:, tris[:, 1]]
            cc = colors[:, tris[:, 2]]
            t3 = ((a == b) & (b == cc)).sum(axis=1)
        else:
            t3 = np.zeros(len(idx), dtype=np.int64)
        return np.bincount(t2 * stride + t3, minlength=width)

    if threads and threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tallies = list(pool.map(run_chunk, starts))
    else:
        tallies = [run_chunk(s) for s in starts]
    combined = np.sum(tallies, axis=0, dtype=np.int64)

    denom = total
    joint = {}
    for flat in np.nonzero(combined)[0]:
        t2, t3 = divmod(int(flat), stride)
        joint[(t2, t3)] = Fraction(int(combined[flat]), denom)
    return ExactDistribution(c=c, n=g.n, joint=joint)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov distance and atom detection


def ks_statistic(sample: Sequence[float], cdf: Callable[[float], float]) -> float:
    """sup over sample points x of max(|Fhat(x) - F(x)|, |Fhat(x-) - F(x)|)
    for the empirical CDF Fhat; for step-function empirical laws this is
    the full Kolmogorov distance to F."""
    sample = sorted(sample)
    if not sample:
        raise EmptySampleError("KS distance needs a nonempty sample")
    values = []
    masses = []
    prev = None
    for x in sample:
        if prev is not None and x == prev:
            masses[-1] += 1
        else:
            values.append(x)
            masses.append(1)
            prev = x
    n = len(sample)
    return ks_from_distribution(values, [m / n for m in masses], cdf)


def ks_from_distribution(
    values: Sequence[float], masses: Sequence[float], cdf: Callable[[float], float]
) -> float:
    """KS distance of a discrete law (ascending support, masses) to cdf."""
    cum = 0.0
    worst = 0.0
    for x, m in zip(values, masses):
        fx = cdf(x)
        worst = max(worst, abs(cum - fx))  # approaching x from the left
        cum += m
        worst = max(worst, abs(cum - fx))
    return worst


def atom_summary(
    values: Sequence[float], masses: Sequence[float], min_gap: float
) -> tuple[Atom, ...]:
    """Cluster a discrete law into atoms: split the sorted support wherever
    consecutive values are more than min_gap apart, then report each
    cluster's mass and mass-weighted center."""
    if not values:
        return ()
    order = sorted(range(len(values)), key=lambda i: values[i])
    clusters: list[list[int]] = [[order[0]]]
    for i in order[1:]:
        if values[i] - values[clusters[-1][-1]] > min_gap:
            clusters.append([i])
        else:
            clusters[-1].append(i)
    atoms = []
    for cluster in clusters:
        mass = sum(masses[i] for i in cluster)
        center = sum(values[i] * masses[i] for i in cluster) / mass
        atoms.append(Atom(location=center, mass=mass))
    return tuple(atoms)
