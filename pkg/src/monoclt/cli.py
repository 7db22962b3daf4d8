"""Command-line front end.

One subcommand per module concern:

    generate       build a family graph and write its edge list
    census         triangle census, pyramid counts, 4-cycle/4-walk statistics
    moments        exact means/variances (and edge-count excess fourth moment)
    bounds         CLT error-bound brackets (up to absolute constants)
    fourth-moment  exact fourth-moment decomposition over classes
    simulate       seeded Monte Carlo runs with KS diagnostics
    verify         self-checks: oracle equality, class discovery, sign dichotomy

Every JSON report embeds the tool version, the resolved configuration,
and the input graph digest; rerunning an embedded configuration
reproduces the report byte-for-byte. Exit codes: 0 success, 1 domain
error, 2 usage error. The --threads flag never changes results.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .census import (
    b_statistic,
    count_c4,
    pyramid_counts,
    s_statistic,
    score_ordering,
    triangle_census,
)
from .errors import MonocltError
from .fourthmoment import DEFAULT_BUDGET, fourth_moment_exact
from .graph import FamilySpec, Graph, generate, parse_edge_list, serialize_edge_list
from .moments import T2Inputs, clt_bound_t2, clt_bound_t3, t2_moments, t3_mean_var
from .sim import DEFAULT_ENUM_CAP, SimConfig, sample_statistics

_FAMILY_CHOICES = (
    "complete",
    "star",
    "cycle",
    "pyramid",
    "bipyramid_chain",
    "composite",
    "gnp",
    "disjoint_union",
)


def _frac(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator), "float": float(q)}


def _add_graph_source(sub: argparse.ArgumentParser):
    sub.add_argument("--input", help="edge-list file (one 'u v' pair per line)")
    sub.add_argument("--family", choices=_FAMILY_CHOICES, help="generated family")
    sub.add_argument("--n", type=int, help="family size parameter")
    sub.add_argument("--p", type=float, help="edge probability (gnp)")
    sub.add_argument("--graph-seed", type=int, help="seed for the gnp family")
    sub.add_argument(
        "--parts",
        nargs="+",
        metavar="FAMILY:N",
        help="parts of a disjoint_union, e.g. pyramid:8 bipyramid_chain:17",
    )


def _parse_part(text: str, parser: argparse.ArgumentParser) -> FamilySpec:
    name, _, arg = text.partition(":")
    if name not in _FAMILY_CHOICES or name in ("gnp", "composite", "disjoint_union") or not arg:
        parser.error(f"bad --parts entry {text!r}; use a deterministic family like pyramid:8")
    try:
        return FamilySpec(family=name, n=int(arg))
    except ValueError:
        parser.error(f"bad --parts entry {text!r}")


def _resolve_graph(args, parser: argparse.ArgumentParser, need_c: bool = False):
    """Returns (graph, source-config dict). Exactly one input source."""
    if (args.input is None) == (args.family is None):
        parser.error("give exactly one graph source: --input FILE or --family NAME")
    if args.input is not None:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            parser.error(f"cannot read {args.input}: {exc}")
        result = parse_edge_list(text)
        return result.graph, {"input": args.input}
    parts = tuple(_parse_part(p, parser) for p in (args.parts or ()))
    spec = FamilySpec(
        family=args.family,
        n=args.n,
        p=args.p,
        seed=args.graph_seed,
        c=getattr(args, "c", None),
        parts=parts,
    )
    return generate(spec), spec.describe()


def _emit(args, payload: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _report(args, command: str, config: dict, graph: Optional[Graph], body: dict) -> str:
    report = {
        "tool": "monoclt",
        "version": __version__,
        "command": command,
        "config": config,
        "report": body,
    }
    if graph is not None:
        report["input"] = {
            "digest": graph.digest(),
            "vertices": graph.n,
            "edges": graph.edge_count,
        }
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monoclt",
        description="exact statistics and simulation oracles for monochromatic "
        "edge/triangle counts under uniformly random vertex colorings",
    )
    parser.add_argument("--version", action="version", version=f"monoclt {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("generate", help="write a family graph as an edge list")
    _add_graph_source(p)
    p.add_argument("--c", type=int, help="colors (sizes the composite family)")
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("census", help="triangle census and derived statistics")
    _add_graph_source(p)
    p.add_argument("--c", type=int, help="colors (sizes the composite family)")
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("moments", help="exact closed-form moments")
    _add_graph_source(p)
    p.add_argument("--c", type=int, required=True, help="number of colors (>= 2)")
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("bounds", help="CLT error-bound brackets")
    _add_graph_source(p)
    p.add_argument("--c", type=int, required=True, help="number of colors (>= 2)")
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("fourth-moment", help="exact fourth-moment decomposition")
    _add_graph_source(p)
    p.add_argument("--c", type=int, required=True, help="number of colors (>= 2)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("simulate", help="seeded Monte Carlo sampling")
    _add_graph_source(p)
    p.add_argument("--c", type=int, required=True, help="number of colors (>= 2)")
    p.add_argument("--reps", type=int, required=True, help="replications")
    p.add_argument("--seed", type=int, required=True, help="sampling seed")
    p.add_argument("--statistic", choices=("T2", "T3", "both"), default="both")
    p.add_argument("--atom-gap", type=float, help="raw-scale gap for atom clustering")
    p.add_argument(
        "--raw-out",
        metavar="BASE",
        help="also stream per-replication values to BASE.t2.bin / BASE.t3.bin "
        "(little-endian 64-bit integers, replication order)",
    )
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--out", help="output path (default stdout)")

    p = subs.add_parser("verify", help="run the built-in acceptance checks")
    p.add_argument("--threads", type=int, default=os.cpu_count())
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args, parser)
    except MonocltError as exc:
        error = {
            "tool": "monoclt",
            "version": __version__,
            "operation": args.command,
            "error": type(exc).__name__,
            "detail": str(exc),
            "inputs": {
                k: v
                for k, v in vars(args).items()
                if k not in ("command", "out") and v is not None
            },
        }
        sys.stderr.write(json.dumps(error, sort_keys=True, indent=2, default=str) + "\n")
        return 1


def _dispatch(args, parser) -> int:
    cmd = args.command
    if cmd == "generate":
        graph, source = _resolve_graph(args, parser)
        _emit(args, serialize_edge_list(graph))
        return 0

    if cmd == "census":
        graph, source = _resolve_graph(args, parser)
        tc = triangle_census(graph)
        pc = pyramid_counts(tc)
        order = score_ordering(graph, tc)
        body = {
            "triangles": str(pc.n1),
            "pyramids": {str(s): str(v) for s, v in zip((1, 2, 3, 4), pc.as_tuple())},
            "four_cycles": str(count_c4(graph)),
            "b_statistic": str(b_statistic(tc)),
            "s_statistic_score_order": str(s_statistic(tc, order)),
            "score_ordering": order,
        }
        _emit(args, _report(args, cmd, {"source": source}, graph, body))
        return 0

    if cmd == "moments":
        graph, source = _resolve_graph(args, parser)
        tc = triangle_census(graph)
        pc = pyramid_counts(tc)
        body: dict = {}
        t2 = t2_moments(T2Inputs.from_graph(graph), args.c)
        body["T2"] = {
            "mean": _frac(t2.mean),
            "variance": _frac(t2.variance),
            "excess4": _frac(t2.excess4),
            "inputs": t2.inputs,
        }
        if pc.n1 >= 1:
            t3 = t3_mean_var(pc, args.c)
            body["T3"] = {
                "mean": _frac(t3.mean),
                "variance": _frac(t3.variance),
                "inputs": t3.inputs,
            }
        _emit(args, _report(args, cmd, {"source": source, "c": args.c}, graph, body))
        return 0

    if cmd == "bounds":
        graph, source = _resolve_graph(args, parser)
        tc = triangle_census(graph)
        pc = pyramid_counts(tc)
        body = {}
        t2b = clt_bound_t2(graph.edge_count, count_c4(graph), args.c)
        body["T2"] = {
            "rational_part": _frac(t2b.rational_part),
            "sqrt_base": t2b.sqrt_base,
            "inner": t2b.inner,
            "bound_bracket": t2b.bound,
        }
        if pc.n1 >= 1:
            t3b = clt_bound_t3(pc, b_statistic(tc))
            body["T3"] = {
                "r1": _frac(t3b.r1),
                "r2": _frac(t3b.r2),
                "bracket": t3b.bracket,
                "bound_bracket": t3b.bound,
            }
        body["note"] = "brackets bound the Kolmogorov distance up to unspecified absolute constants"
        _emit(args, _report(args, cmd, {"source": source, "c": args.c}, graph, body))
        return 0

    if cmd == "fourth-moment":
        graph, source = _resolve_graph(args, parser)
        tc = triangle_census(graph)
        pc = pyramid_counts(tc)
        dec = fourth_moment_exact(tc, pc, args.c, budget=args.budget, threads=args.threads)
        config = {"source": source, "c": args.c, "budget": args.budget}
        _emit(args, _report(args, cmd, config, graph, dec.to_json_dict()))
        return 0

    if cmd == "simulate":
        graph, source = _resolve_graph(args, parser)
        cfg = SimConfig(
            c=args.c,
            replications=args.reps,
            seed=args.seed,
            statistic=args.statistic,
            atom_gap=args.atom_gap,
        )
        raw_sinks = {}
        try:
            if args.raw_out:
                for stat in ("T2", "T3"):
                    if cfg.statistic in (stat, "both"):
                        raw_sinks[stat] = open(f"{args.raw_out}.{stat.lower()}.bin", "wb")
            report = sample_statistics(
                graph, cfg, threads=args.threads, raw_sinks=raw_sinks or None
            )
        finally:
            for sink in raw_sinks.values():
                sink.close()
        config = {"source": source, **report.to_json_dict()["config"]}
        _emit(args, _report(args, cmd, config, graph, report.to_json_dict()["results"]))
        return 0

    if cmd == "verify":
        return _verify(args.threads)

    parser.error(f"unknown command {cmd!r}")
    return 2


# ---------------------------------------------------------------------------
# verify: condensed acceptance checks


def _verify(threads: Optional[int]) -> int:
    from .fourthmoment import (
        bipyramid_quad_coefficient,
        discover_classes,
        pyramid_class_coefficient,
    )
    from .graph import bipyramid_chain, complete, cycle, gnp, pyramid, star
    from .sim import exact_distribution

    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail and not ok:
            line += f"  ({detail})"
        print(line)
        if not ok:
            failures += 1

    path5 = Graph.from_edges(5, [(i, i + 1) for i in range(4)])
    corpus = [
        ("K3", complete(3)),
        ("K4", complete(4)),
        ("K5", complete(5)),
        ("C4", cycle(4)),
        ("P5", path5),
        ("K1_3", star(3)),
        ("pyramid3", pyramid(3)),
        ("bipyramid2", bipyramid_chain(2)),
        ("gnp8", gnp(8, 0.4, 1)),
    ]
    ok = True
    detail = ""
    for name, g in corpus:
        tc = triangle_census(g)
        pc = pyramid_counts(tc)
        for c in (2, 3):
            dist = exact_distribution(g, c, tc=tc, threads=threads)
            mu2, v2, _ = dist.moments("T2")
            rep2 = t2_moments(T2Inputs.from_graph(g), c)
            if (mu2, v2) != (rep2.mean, rep2.variance) or dist.excess4("T2") != rep2.excess4:
                ok, detail = False, f"T2 mismatch on {name}, c={c}"
            if pc.n1 >= 1:
                rep3 = t3_mean_var(pc, c)
                mu3, v3, _ = dist.moments("T3")
                if (mu3, v3) != (rep3.mean, rep3.variance):
                    ok, detail = False, f"T3 mismatch on {name}, c={c}"
                dec = fourth_moment_exact(tc, pc, c, threads=threads)
                if dec.excess4 != dist.excess4("T3"):
                    ok, detail = False, f"fourth-moment mismatch on {name}, c={c}"
    check("oracle equality (closed forms vs full enumeration)", ok, detail)

    disc = discover_classes(triangle_census(complete(9)).triangles, threads=threads)
    check(
        "class discovery on K9 finds exactly 32 classes",
        len(disc.entries) == 32,
        f"found {len(disc.entries)}",
    )

    found = {rec.key for rec, _ in disc.entries}
    from .fourthmoment import class_key

    named = [class_key([(0, 1, 2 + i) for i in range(s)]) for s in (1, 2, 3, 4)]
    named.append(class_key([(0, 2, 4), (1, 2, 5), (0, 3, 6), (1, 3, 7)]))
    check("pyramid and chain-quadruple classes present", all(k in found for k in named))

    ok = True
    for c in (5, 6, 7, 10):
        x = Fraction(1, c)
        if not all(rec.coefficient(x) > 0 for rec, _ in disc.entries):
            ok = False
    for c in (2, 3, 4):
        if not pyramid_class_coefficient(4)(Fraction(1, c)) < 0:
            ok = False
    if pyramid_class_coefficient(4)(Fraction(1, 2)) != Fraction(-3, 16):
        ok = False
    if bipyramid_quad_coefficient()(Fraction(1, 2)) != Fraction(3, 32):
        ok = False
    check("sign dichotomy (all positive for c >= 5; 4-pyramid negative for c <= 4)", ok)

    print(f"{'OK' if failures == 0 else 'FAILED'}: {4 - failures}/4 checks passed")
    return 0 if failures == 0 else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
