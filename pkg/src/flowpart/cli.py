"""Command-line entry point.

Deterministic results go to stdout; wall-clock runtimes go to stderr so
that reruns with the same inputs produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench
from .generate import GeneratorConfig, generate
from .graph import GraphError, LoadReport, format_edge_list, load_edge_list
from .heuristic import heuristic_max_flow
from .maxflow import edmonds_karp
from .partition import recursive_partition


def _index_base(text: str):
    if text == "auto":
        return "auto"
    if text in ("0", "1"):
        return int(text)
    raise argparse.ArgumentTypeError("index base must be auto, 0 or 1")


def _add_load_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--symmetrize",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="add missing reverse edges with equal capacity (default: on)",
    )
    p.add_argument("--default-capacity", type=int, default=1, help="capacity of unweighted lines")
    p.add_argument("--index-base", type=_index_base, default="auto", help="auto, 0 or 1")


def _load_options(args) -> dict:
    return dict(
        symmetrize=args.symmetrize,
        default_capacity=args.default_capacity,
        index_base=args.index_base,
    )


def _load(args):
    """Load ``args.graph`` and translate file-level s/t ids to internal ids."""
    report = LoadReport(index_base=0)
    g = load_edge_list(args.graph, report=report, **_load_options(args))
    s = args.source - report.index_base
    t = args.sink - report.index_base
    return g, s, t, report.index_base


def cmd_exact(args) -> int:
    g, s, t, _ = _load(args)
    g.prepare()
    f, seconds = bench.timed(lambda: edmonds_karp(g, s, t))
    print(f"value={f.value}")
    print(f"augmentations={f.augmentations}")
    print(f"runtime_seconds={seconds:.6f}", file=sys.stderr)
    return 0


def cmd_heuristic(args) -> int:
    g, s, t, _ = _load(args)
    g.prepare()
    h, seconds = bench.timed(lambda: heuristic_max_flow(g, s, t, args.level, args.seed))
    sys.stdout.write(h.to_text())
    print(f"runtime_seconds={seconds:.6f}", file=sys.stderr)
    return 0


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(
        args.clusters, args.nodes_per_cluster, args.inp, args.outp, seed=args.seed,
        weight_min=args.weight_min, weight_max=args.weight_max,
    )
    g, labels = generate(cfg)
    text = format_edge_list(g)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.labels:
        Path(args.labels).write_text(
            "vertex_id,cluster_id\n" + "".join(f"{v},{c}\n" for v, c in enumerate(labels)),
            encoding="utf-8",
        )
    return 0


def cmd_partition(args) -> int:
    g = load_edge_list(args.graph, **_load_options(args))
    p = recursive_partition(g, args.level, args.seed)
    text = p.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    sizes = ",".join(str(len(m)) for m in p.members)
    print(f"k={p.k} sizes={sizes} cut_edges={len(p.cut_edges(g))}", file=sys.stderr)
    return 0


def _emit(records, args) -> None:
    if args.out:
        bench.write_records(records, args.out)
    sys.stdout.write(bench.summarize(records))


def cmd_bench_scaling(args) -> int:
    records = bench.run_scaling_sweep(
        args.nodes, inp=args.inp, outp=args.outp, level=args.level, clusters=args.clusters,
        repetitions=args.reps, seed=args.seed, workers=args.workers,
    )
    _emit(records, args)
    return 0


def cmd_bench_levels(args) -> int:
    records = bench.run_level_sweep(
        args.nodes, args.levels, inp=args.inp, outp=args.outp, clusters=args.clusters,
        repetitions=args.reps, seed=args.seed, workers=args.workers,
    )
    if args.out:
        bench.write_records(records, args.out)
    sys.stdout.write(bench.format_ratio_table(bench.level_ratio_table(records)))
    return 0


def cmd_bench_datasets(args) -> int:
    records = []
    for draw in range(args.draws):
        records += bench.run_dataset_bench(
            args.paths, level=args.level, seed=args.seed + draw, repetitions=args.reps,
            top=args.top, **_load_options(args),
        )
    _emit(records, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowpart", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("exact", cmd_exact, "exact max flow (Edmonds-Karp)"),
        ("heuristic", cmd_heuristic, "partition-based approximate max flow"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("graph")
        p.add_argument("source", type=int, help="source id as written in the file")
        p.add_argument("sink", type=int, help="sink id as written in the file")
        if name == "heuristic":
            p.add_argument("--level", type=int, default=3)
            p.add_argument("--seed", type=int, default=0)
        _add_load_options(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("gen", help="generate a clustered random graph")
    p.add_argument("--clusters", type=int, default=4)
    p.add_argument("--nodes-per-cluster", type=int, default=10)
    p.add_argument("--inp", type=float, default=0.5)
    p.add_argument("--outp", type=float, default=0.05)
    p.add_argument("--weight-min", type=int, default=1)
    p.add_argument("--weight-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="edge-list file (default: stdout)")
    p.add_argument("--labels", help="write planted cluster labels as CSV")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="recursive Kernighan-Lin partitioning")
    p.add_argument("graph")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV file (default: stdout)")
    _add_load_options(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("bench", help="benchmark experiments")
    bsub = p.add_subparsers(dest="bench_command", required=True)

    def common(q):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--reps", type=int, default=1)
        q.add_argument("--out", help="CSV output file")
        q.add_argument("--workers", type=int, default=1, help="parallel repetitions (skews timings)")

    def generated(q):
        q.add_argument("--nodes", type=int, nargs="+", default=[100, 1000])
        q.add_argument("--inp", type=float, default=0.01)
        q.add_argument("--outp", type=float, default=0.005)
        q.add_argument("--clusters", type=int, default=8)

    q = bsub.add_parser("scaling", help="exact vs heuristic over graph size")
    generated(q)
    q.add_argument("--level", type=int, default=3)
    common(q)
    q.set_defaults(func=cmd_bench_scaling)

    q = bsub.add_parser("levels", help="heuristic runtime over partition levels")
    generated(q)
    q.add_argument("--levels", type=int, nargs="+", default=[0, 2, 4, 6, 8, 10])
    common(q)
    q.set_defaults(func=cmd_bench_levels)

    q = bsub.add_parser("datasets", help="exact vs heuristic on dataset files")
    q.add_argument("paths", nargs="+")
    q.add_argument("--level", type=int, default=3)
    q.add_argument("--top", type=int, default=20, help="sample endpoints among the top-degree vertices")
    q.add_argument("--draws", type=int, default=1, help="endpoint draws, seeds seed..seed+draws-1")
    common(q)
    _add_load_options(q)
    q.set_defaults(func=cmd_bench_datasets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (GraphError, ValueError, OSError) as exc:
        print(f"flowpart: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
