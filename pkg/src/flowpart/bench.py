"""Benchmark harness: scaling sweeps, level sweeps and dataset runs."""

from __future__ import annotations

import csv
import dataclasses
import gc
import io
import logging
import os
import re
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .generate import GeneratorConfig, generate, stream
from .graph import CapacitatedGraph, EdgeListError, LoadReport, load_edge_list
from .heuristic import HeuristicResult, heuristic_max_flow
from .maxflow import edmonds_karp

log = logging.getLogger(__name__)

CSV_VERSION = "#flowpart-csv-v1"
PLANTED_POLICY = "distinct-planted-clusters"
TOP_DEGREE_POLICY = "top20-degree"
_ENDPOINT_STREAM = 2

T = TypeVar("T")


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    dataset: str
    nodes: int
    edges: int
    inp: float | None
    outp: float | None
    level: int
    k: int
    source: int
    sink: int
    endpoint_policy: str
    exact_value: int
    heuristic_value: int
    branch: str
    exact_runtime_seconds: float
    heuristic_runtime_seconds: float
    partition_runtime_seconds: float
    seed: int
    repetition: int

    def __post_init__(self):
        if self.k != 1 << self.level:
            raise ValueError(f"k={self.k} does not equal 2**{self.level}")
        if self.heuristic_value < 0 or self.exact_value < 0:
            raise ValueError("flow values must be non-negative")
        if min(self.exact_runtime_seconds, self.heuristic_runtime_seconds) < 0:
            raise ValueError("runtimes must be non-negative")


FIELDS = [f.name for f in dataclasses.fields(ExperimentRecord)]
_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentRecord)}


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = dataclasses.asdict(r)
        # repr keeps floats round-trippable
        w.writerow({k: "" if v is None else repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _convert(name: str, text: str):
    kind = _TYPES[name]
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    if kind == "float | None":
        return None if text == "" else float(text)
    return text


def records_from_csv(text: str) -> list[ExperimentRecord]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_VERSION:
        raise ValueError(f"missing {CSV_VERSION} header line")
    reader = csv.DictReader(lines[1:])
    return [ExperimentRecord(**{k: _convert(k, v) for k, v in row.items()}) for row in reader]


def write_records(records: Sequence[ExperimentRecord], path: str | os.PathLike) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def read_records(path: str | os.PathLike) -> list[ExperimentRecord]:
    return records_from_csv(Path(path).read_text(encoding="utf-8"))


def derive_seed(*parts: int) -> int:
    """Stable 32-bit seed for one (config, repetition) cell."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def timed(fn: Callable[[], T]) -> tuple[T, float]:
    """Wall-clock one call with the garbage collector paused."""
    enabled = gc.isenabled()
    gc.disable()
    try:
        start = time.perf_counter()
        out = fn()
        elapsed = time.perf_counter() - start
    finally:
        if enabled:
            gc.enable()
    return out, elapsed


def planted_endpoints(labels: Sequence[int], seed: int) -> tuple[int, int]:
    """Source and sink drawn from two distinct planted clusters."""
    rng = stream(seed, _ENDPOINT_STREAM)
    clusters = sorted(set(labels))
    if len(clusters) < 2:
        members = list(range(len(labels)))
        s, t = rng.choice(len(members), size=2, replace=False)
        return int(s), int(t)
    a, b = rng.choice(len(clusters), size=2, replace=False)
    in_a = [v for v, c in enumerate(labels) if c == clusters[a]]
    in_b = [v for v, c in enumerate(labels) if c == clusters[b]]
    return in_a[int(rng.integers(len(in_a)))], in_b[int(rng.integers(len(in_b)))]


def top_degree_endpoints(g: CapacitatedGraph, seed: int, top: int = 20) -> tuple[int, int]:
    """Distinct source and sink drawn uniformly from the highest-degree vertices.

    Degree counts distinct neighbors; ties go to the lower vertex id.
    """
    deg = g.degrees()
    ranked = sorted(range(g.vertex_count), key=lambda v: (-deg[v], v))[:top]
    rng = stream(seed, _ENDPOINT_STREAM)
    i, j = rng.choice(len(ranked), size=2, replace=False)
    return ranked[int(i)], ranked[int(j)]


def measure(
    g: CapacitatedGraph, s: int, t: int, level: int, seed: int, exact: tuple[int, float] | None = None
) -> tuple[int, float, HeuristicResult, float]:
    """Time exact and heuristic flow on the same endpoints.

    Graph indices are built before either clock starts.
    """
    g.prepare()
    if exact is None:
        f, exact_seconds = timed(lambda: edmonds_karp(g, s, t))
        exact = (f.value, exact_seconds)
    h, h_seconds = timed(lambda: heuristic_max_flow(g, s, t, level, seed))
    return exact[0], exact[1], h, h_seconds


def _run(cells: Sequence[T], fn: Callable[[T], list[ExperimentRecord]], workers: int) -> list[ExperimentRecord]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, cells))
    else:
        chunks = [fn(c) for c in cells]
    return [r for chunk in chunks for r in chunk]


def _generated_record(experiment, cfg, g, s, t, level, exact_value, exact_s, h, h_s, seed, rep):
    return ExperimentRecord(
        experiment=experiment,
        dataset="generated",
        nodes=g.vertex_count,
        edges=g.undirected_edge_count,
        inp=cfg.inp,
        outp=cfg.outp,
        level=level,
        k=1 << level,
        source=s,
        sink=t,
        endpoint_policy=PLANTED_POLICY,
        exact_value=exact_value,
        heuristic_value=h.value,
        branch=h.branch,
        exact_runtime_seconds=exact_s,
        heuristic_runtime_seconds=h_s,
        partition_runtime_seconds=h.partition_seconds,
        seed=seed,
        repetition=rep,
    )


def run_scaling_sweep(
    node_counts: Sequence[int],
    *,
    inp: float = 0.01,
    outp: float = 0.005,
    level: int = 3,
    clusters: int = 8,
    repetitions: int = 1,
    seed: int = 0,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Exact vs heuristic on clustered graphs of growing size.

    ``nodes_per_cluster = n // clusters``; the recorded node count is the
    realized one.
    """
    if not node_counts or any(n < clusters for n in node_counts):
        raise ValueError(f"node counts must be at least the cluster count {clusters}")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    def cell(item: tuple[int, int]) -> list[ExperimentRecord]:
        n, rep = item
        cell_seed = derive_seed(seed, n, rep)
        cfg = GeneratorConfig(clusters, n // clusters, inp, outp, seed=cell_seed)
        g, labels = generate(cfg)
        s, t = planted_endpoints(labels, cell_seed)
        ev, es, h, hs = measure(g, s, t, level, cell_seed)
        return [_generated_record("scaling", cfg, g, s, t, level, ev, es, h, hs, cell_seed, rep)]

    cells = [(n, rep) for n in node_counts for rep in range(repetitions)]
    return _run(cells, cell, workers)


def run_level_sweep(
    node_counts: Sequence[int],
    levels: Sequence[int] = (0, 2, 4, 6, 8, 10),
    *,
    inp: float = 0.01,
    outp: float = 0.005,
    clusters: int = 8,
    repetitions: int = 1,
    seed: int = 0,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Heuristic runtime for several levels on the same graphs.

    Levels with ``2**l`` above the vertex count are skipped with a warning.
    The exact flow is computed once per graph and repeated in each record.
    """
    if 0 not in levels:
        raise ValueError("level sweep needs the baseline level 0")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    def cell(item: tuple[int, int]) -> list[ExperimentRecord]:
        n, rep = item
        cell_seed = derive_seed(seed, n, rep)
        cfg = GeneratorConfig(clusters, n // clusters, inp, outp, seed=cell_seed)
        g, labels = generate(cfg)
        s, t = planted_endpoints(labels, cell_seed)
        out = []
        exact = None
        for level in levels:
            if (1 << level) > g.vertex_count:
                if rep == 0:
                    log.warning("skipping level %d: 2**%d > %d vertices", level, level, g.vertex_count)
                continue
            ev, es, h, hs = measure(g, s, t, level, cell_seed, exact)
            exact = (ev, es)
            out.append(_generated_record("levels", cfg, g, s, t, level, ev, es, h, hs, cell_seed, rep))
        return out

    cells = [(n, rep) for n in node_counts for rep in range(repetitions)]
    return _run(cells, cell, workers)


@dataclass(frozen=True)
class LevelRatio:
    nodes: int
    level: int
    k: int
    median_runtime_seconds: float
    ratio_to_baseline: float
    repetitions: int


def level_ratio_table(
    records: Sequence[ExperimentRecord], runtime: Callable[[ExperimentRecord], float] | None = None
) -> list[LevelRatio]:
    """Median heuristic runtime per (nodes, level) and its ratio to level 0."""
    if runtime is None:
        runtime = lambda r: r.heuristic_runtime_seconds  # noqa: E731
    groups: dict[tuple[int, int], list[float]] = {}
    for r in records:
        groups.setdefault((r.nodes, r.level), []).append(runtime(r))
    rows = []
    for nodes in sorted({n for n, _ in groups}):
        if (nodes, 0) not in groups:
            raise ValueError(f"no level-0 baseline for {nodes} nodes")
        base = statistics.median(groups[(nodes, 0)])
        for level in sorted(l for n, l in groups if n == nodes):
            med = statistics.median(groups[(nodes, level)])
            ratio = med / base if base > 0 else float("inf")
            rows.append(LevelRatio(nodes, level, 1 << level, med, ratio, len(groups[(nodes, level)])))
    return rows


def format_ratio_table(rows: Sequence[LevelRatio]) -> str:
    out = ["nodes  level  k  median_s  ratio"]
    for r in rows:
        out.append(f"{r.nodes} {r.level} {r.k} {r.median_runtime_seconds:.6f} {r.ratio_to_baseline:.4f}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class KnownDataset:
    name: str
    nodes: int
    edges: int
    keywords: tuple[str, ...]


# published vertex / undirected edge counts of the brain repository graphs
KNOWN_DATASETS = (
    KnownDataset("Drosophila Medulla", 1781, 9735, ("drosophila", "medulla")),
    KnownDataset("Mouse Retina", 1076, 90811, ("mouse", "retina")),
    KnownDataset("Macaque-rhesus Brain", 242, 4090, ("macaque", "brain")),
    KnownDataset("Mouse Brain", 213, 21807, ("mouse", "brain")),
    KnownDataset("Macaque-rhesus Cortical", 93, 2667, ("macaque", "interareal")),
    KnownDataset("Macaque-rhesus Cerebral", 91, 1615, ("macaque", "cerebral")),
)


def identify_dataset(path: str | os.PathLike) -> KnownDataset | None:
    words = set(re.split(r"[^a-z0-9]+", Path(path).name.lower()))
    for ds in KNOWN_DATASETS:
        if all(k in words for k in ds.keywords):
            return ds
    return None


def load_dataset(path: str | os.PathLike, **load_options) -> tuple[CapacitatedGraph, LoadReport]:
    report = LoadReport(index_base=0)
    try:
        g = load_edge_list(path, report=report, **load_options)
    except (EdgeListError, OSError, ValueError) as exc:
        raise EdgeListError(f"dataset {Path(path).name}: {exc}") from exc
    return g, report


def run_dataset_bench(
    paths: Sequence[str | os.PathLike],
    *,
    level: int = 3,
    seed: int = 0,
    repetitions: int = 1,
    top: int = 20,
    **load_options,
) -> list[ExperimentRecord]:
    """Exact vs heuristic on dataset files with top-degree endpoints.

    Every repetition reuses the endpoints and seed of the first one, so
    repetitions differ only in measured runtime.
    """
    records = []
    for path in paths:
        g, report = load_dataset(path, **load_options)
        known = identify_dataset(path)
        name = known.name if known else Path(path).stem
        if known and (g.vertex_count, g.undirected_edge_count) != (known.nodes, known.edges):
            log.warning(
                "%s: loaded %d nodes / %d edges, published %d / %d",
                name, g.vertex_count, g.undirected_edge_count, known.nodes, known.edges,
            )
        if report.rounded_weights or report.reverse_edges_added:
            log.info(
                "%s: %d weights rounded, %d reverse edges added",
                name, report.rounded_weights, report.reverse_edges_added,
            )
        s, t = top_degree_endpoints(g, seed, top)
        for rep in range(repetitions):
            ev, es, h, hs = measure(g, s, t, level, seed)
            records.append(
                ExperimentRecord(
                    experiment="datasets",
                    dataset=name,
                    nodes=g.vertex_count,
                    edges=g.undirected_edge_count,
                    inp=None,
                    outp=None,
                    level=level,
                    k=1 << level,
                    source=s,
                    sink=t,
                    endpoint_policy=TOP_DEGREE_POLICY,
                    exact_value=ev,
                    heuristic_value=h.value,
                    branch=h.branch,
                    exact_runtime_seconds=es,
                    heuristic_runtime_seconds=hs,
                    partition_runtime_seconds=h.partition_seconds,
                    seed=seed,
                    repetition=rep,
                )
            )
    return records


def summarize(records: Sequence[ExperimentRecord]) -> str:
    """Median runtimes and values grouped by (experiment, dataset, nodes, level)."""
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.experiment, r.dataset, r.nodes, r.level), []).append(r)
    lines = ["experiment dataset nodes level reps exact_s heuristic_s exact_value heuristic_value"]
    for (exp, ds, nodes, level), rs in groups.items():
        med = statistics.median
        lines.append(
            f"{exp} {ds.replace(' ', '_')} {nodes} {level} {len(rs)} "
            f"{med(r.exact_runtime_seconds for r in rs):.6f} "
            f"{med(r.heuristic_runtime_seconds for r in rs):.6f} "
            f"{med(r.exact_value for r in rs)} {med(r.heuristic_value for r in rs)}"
        )
    return "\n".join(lines) + "\n"
