"""Command-line entry point.

    clustcompare compare A.clusters B.clusters [--measures fstar_wo,omega] [--per-cluster]
    clustcompare experiment shuffle --reps 100 --seed 1 --out shuffle.csv
    clustcompare generate overlap --eta 2 --seed 7 --out pair
    clustcompare induce graph.edges vertex.clusters --closure --out edges.clusters

Exit status: 0 on success, 2 for malformed input or arguments, 3 when the
universes of two inputs disagree.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import generators, harness
from .errors import ClusteringError, UniverseMismatch
from .graph import Graph, edge_closure, induce_edge_clustering, induce_vertex_clustering
from .io import read_clusters, read_edges, write_clusters
from .similarity import match_report

EXIT_INPUT = 2
EXIT_UNIVERSE = 3
BASELINES = {"omega", "onmi_lfk", "onmi_mgh"}


def _measures(text: str) -> list[str]:
    names = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in names if m not in harness.MEASURES]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown measure(s) {', '.join(unknown)}; choose from {', '.join(harness.MEASURES)}"
        )
    return names


def _numbers(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _sizes(text: str) -> list[int]:
    """``32x32`` or ``10,20,30``."""
    if "x" in text:
        size, count = text.split("x", 1)
        return [int(size)] * int(count)
    return [int(t) for t in text.split(",") if t.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def cmd_compare(args) -> int:
    t0 = time.perf_counter()
    a = read_clusters(args.a, n=args.n)
    b = read_clusters(args.b, n=args.n)
    if a.n != b.n:
        raise UniverseMismatch(f"{args.a} has n={a.n} but {args.b} has n={b.n}")
    outl = (len(a.outliers()), len(b.outliers()))
    if any(outl) and BASELINES.intersection(args.measures):
        _warn("inputs contain outliers; baseline measures ignore them (outliers share no cluster)")
    values = {m: harness.MEASURES[m](a, b) for m in args.measures}
    report = match_report(a, b) if args.per_cluster else None
    elapsed = time.perf_counter() - t0

    if args.format == "json":
        doc = {
            "a": str(args.a),
            "b": str(args.b),
            "n": a.n,
            "clusters": [len(a), len(b)],
            "outliers": list(outl),
            "measures": {m: float(harness.fmt(v)) for m, v in values.items()},
        }
        if report is not None:
            doc["outlier_jaccard"] = (
                None if report.outlier_jaccard is None else float(harness.fmt(report.outlier_jaccard))
            )
            doc["per_cluster"] = {
                side: [
                    {"cluster": r.cluster, "size": r.size, "match": r.match,
                     "fstar": float(harness.fmt(r.fstar)), "weight": float(harness.fmt(r.weight))}
                    for r in recs
                ]
                for side, recs in (("a_to_b", report.forward), ("b_to_a", report.backward))
            }
        if args.timing:
            doc["wall_time_s"] = elapsed
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return 0

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("measure", "value"))
    for m, v in values.items():
        w.writerow((m, harness.fmt(v)))
    if args.timing:
        w.writerow(("wall_time_s", harness.fmt(elapsed)))
    if report is not None:
        buf.write("\n")
        w.writerow(("direction", "cluster", "size", "match", "fstar", "weight"))
        for side, recs in (("a_to_b", report.forward), ("b_to_a", report.backward)):
            for r in recs:
                w.writerow((side, r.cluster, r.size, "" if r.match is None else r.match,
                            harness.fmt(r.fstar), harness.fmt(r.weight)))
    _emit(buf.getvalue(), args.out)
    return 0


def _agg_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + ".agg" + (p.suffix or ".csv"))


def cmd_experiment(args) -> int:
    result = harness.run_experiment(
        args.scenario,
        grid=args.grid,
        reps=args.reps,
        seed=args.seed,
        measures=args.measures,
        jobs=args.jobs,
        sizes=args.sizes,
        ref_eta=args.ref_eta,
    )
    Path(args.out).write_text(result.raw_csv(), encoding="utf-8", newline="\n")
    agg = _agg_path(args.out)
    agg.write_text(result.aggregate_csv(), encoding="utf-8", newline="\n")
    print(f"wrote {len(result.rows)} rows to {args.out} and summary to {agg}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    rng = generators.make_rng(args.seed)
    s = args.scenario
    if s == "shuffle":
        a, b = generators.scenario_shuffle(args.fraction, rng)
    elif s == "skew":
        a, b = generators.scenario_skew(args.steps, rng)
    elif s == "kclusters":
        a, b = generators.scenario_kclusters(args.k, rng)
    else:
        sizes = args.sizes or [generators.N_OBJECTS // generators.N_PARTS] * generators.N_PARTS
        layer = generators.build_layer(sizes, rng)
        ref = args.ref_eta if args.ref_eta is not None else harness.GEOMETRIC[s]
        eta = args.eta if args.eta is not None else ref
        a = generators.geometric_clustering(layer, ref)
        b = generators.geometric_clustering(layer, eta)
    for tag, c in (("a", a), ("b", b)):
        path = f"{args.out}.{tag}.clusters"
        write_clusters(c, path)
        print(f"wrote {path}: {len(c)} clusters, {len(c.outliers())} outliers", file=sys.stderr)
    return 0


def cmd_induce(args) -> int:
    n, edges = read_edges(args.graph, n=args.n)
    g = Graph(n, edges)
    if args.from_edges:
        e = read_clusters(args.clusters, n=None if _has_header(args.clusters) else g.n_edges)
        if e.n != g.n_edges:
            raise UniverseMismatch(f"edge clustering has n={e.n}, graph has {g.n_edges} edges")
        if args.closure:
            vc = induce_vertex_clustering(g, e)
            out, stats = induce_edge_clustering(g, vc, with_stats=True)
        else:
            out, stats = induce_vertex_clustering(g, e, with_stats=True)
    else:
        c = read_clusters(args.clusters, n=None if _has_header(args.clusters) else g.n)
        if c.n != g.n:
            raise UniverseMismatch(f"clustering has n={c.n}, graph has {g.n} vertices")
        out, stats = induce_edge_clustering(g, c, with_stats=True)
        if args.closure:
            out = edge_closure(g, out)
    write_clusters(out, args.out)
    kind = "vertex" if args.from_edges and not args.closure else "edge"
    if kind == "edge":
        mapping = Path(args.map or f"{args.out}.map.csv")
        lines = ["edge_id,u,v"] + [f"{i},{u},{v}" for i, (u, v) in enumerate(g.edges.tolist())]
        mapping.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    print(
        f"{len(out)} {kind} clusters; {stats.outliers} {kind} outliers; "
        f"dropped {stats.dropped_empty} empty; collapsed {stats.collapsed_duplicates} duplicate",
        file=sys.stderr,
    )
    return 0


def _has_header(path: str) -> bool:
    with open(path, encoding="utf-8") as fh:
        return any(line.strip().replace(" ", "").startswith("#n=") for line in fh)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clustcompare", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compare", help="compare two clusterings")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--n", type=int, help="universe size (overrides file headers)")
    c.add_argument("--measures", type=_measures, default=["fstar_wo"])
    c.add_argument("--per-cluster", action="store_true", help="include best-match rows")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--timing", action="store_true", help="add wall time (non-deterministic)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("experiment", help="run a seeded scenario sweep")
    e.add_argument("scenario", choices=harness.SCENARIOS)
    e.add_argument("--grid", type=_numbers, help="comma-separated parameter values")
    e.add_argument("--reps", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--measures", type=_measures, default=["fstar_wo"])
    e.add_argument("--sizes", type=_sizes, help="geometric part sizes, e.g. 32x32")
    e.add_argument("--ref-eta", type=float)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out", required=True, help="raw CSV path; summary goes to <stem>.agg.csv")
    e.set_defaults(func=cmd_experiment)

    g = sub.add_parser("generate", help="write one scenario pair as .clusters files")
    g.add_argument("scenario", choices=harness.SCENARIOS)
    g.add_argument("--fraction", type=float, default=0.5)
    g.add_argument("--steps", type=int, default=generators.N_OBJECTS)
    g.add_argument("--k", type=int, default=32)
    g.add_argument("--eta", type=float)
    g.add_argument("--ref-eta", type=float)
    g.add_argument("--sizes", type=_sizes)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output prefix; writes <out>.a/.b.clusters")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("induce", help="induce edge clusterings from a graph")
    i.add_argument("graph", help="edge list with '#n=<N>' header")
    i.add_argument("clusters")
    i.add_argument("--n", type=int, help="vertex count (overrides the edge-list header)")
    i.add_argument("--from-edges", action="store_true", help="input clustering is over edge ids")
    i.add_argument("--closure", action="store_true")
    i.add_argument("--map", help="edge-id map path (default <out>.map.csv)")
    i.add_argument("--out", required=True)
    i.set_defaults(func=cmd_induce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UniverseMismatch as exc:
        print(f"error: UniverseMismatch: {exc}", file=sys.stderr)
        return EXIT_UNIVERSE
    except (ClusteringError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
