"""Partition-based approximate maximum flow.

The graph is split into ``k = 2**level`` parts. If source and sink share a
part, the exact flow inside that part is returned. Otherwise every part gets
a flow budget (an exact max flow between sampled endpoints inside the part),
parts become supernodes joined by uncapacitated arcs wherever an original
edge crosses between them, and budget is pushed along shortest supernode
paths until the sink's part is unreachable.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .generate import stream
from .graph import CapacitatedGraph, GraphError, induced_subgraph
from .maxflow import edmonds_karp
from .partition import DEFAULT_MAX_PASSES, Partitioning, recursive_partition

# Budget of a single-vertex part: it relays flow without an internal bottleneck.
UNBOUNDED = None
Budget = Optional[int]

SAME_CLUSTER = "same-cluster"
CROSS_CLUSTER = "cross-cluster"
_SAMPLING_STREAM = 1


@dataclass
class SuperGraph:
    """Condensed graph with one node per part; only nodes carry capacity."""

    successors: tuple[tuple[int, ...], ...]
    budgets: list[Budget]
    removed: list[bool]

    @property
    def k(self) -> int:
        return len(self.successors)

    def arcs(self) -> set[tuple[int, int]]:
        return {(a, b) for a, succ in enumerate(self.successors) for b in succ}

    def adjacency_matrix(self) -> list[list[bool]]:
        m = [[False] * self.k for _ in range(self.k)]
        for a, b in self.arcs():
            m[a][b] = True
        return m


def build_supergraph(
    g: CapacitatedGraph, p: Partitioning, budgets: Sequence[Budget]
) -> SuperGraph:
    """Supernode arc a->b iff some edge runs from part a to part b (a != b).

    Parts with zero budget start out removed.
    """
    if len(budgets) != p.k:
        raise GraphError(f"expected {p.k} budgets, got {len(budgets)}")
    lab = p.labels
    succ: list[set[int]] = [set() for _ in range(p.k)]
    for u, v, _ in g.edges:
        if lab[u] != lab[v]:
            succ[lab[u]].add(lab[v])
    budgets = list(budgets)
    return SuperGraph(
        tuple(tuple(sorted(s)) for s in succ),
        budgets,
        [b is not UNBOUNDED and b <= 0 for b in budgets],
    )


def shortest_superpath(sg: SuperGraph, source: int, target: int) -> list[int] | None:
    """Fewest-hop path over non-removed supernodes, lowest ids expanded first."""
    if sg.removed[source] or sg.removed[target]:
        return None
    parent = {source: source}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        if a == target:
            path = [a]
            while a != source:
                a = parent[a]
                path.append(a)
            return path[::-1]
        for b in sg.successors[a]:
            if b not in parent and not sg.removed[b]:
                parent[b] = a
                queue.append(b)
    return None


@dataclass(frozen=True)
class HeuristicResult:
    value: int
    branch: str
    level: int
    seed: int
    source: int
    sink: int
    source_part: int
    sink_part: int
    part_sizes: tuple[int, ...]
    budgets: tuple[Budget, ...] = ()  # initial per-part budgets (cross-cluster only)
    endpoints: tuple[tuple[int, int] | None, ...] = ()
    paths: tuple[tuple[tuple[int, ...], int], ...] = ()  # (supernode path, pushed amount)
    fallback_used: bool = False
    partitioning: Partitioning | None = field(default=None, compare=False, repr=False)
    partition_seconds: float = field(default=0.0, compare=False)

    @property
    def k(self) -> int:
        return 1 << self.level

    def to_text(self) -> str:
        """``key=value`` lines, including the supernode path trace."""

        def fmt(b: Budget) -> str:
            return "inf" if b is UNBOUNDED else str(b)

        lines = [
            f"value={self.value}",
            f"branch={self.branch}",
            f"level={self.level}",
            f"k={self.k}",
            f"seed={self.seed}",
            f"source={self.source}",
            f"sink={self.sink}",
            f"source_part={self.source_part}",
            f"sink_part={self.sink_part}",
            "part_sizes=" + ",".join(map(str, self.part_sizes)),
        ]
        if self.branch == CROSS_CLUSTER:
            lines.append("budgets=" + ",".join(fmt(b) for b in self.budgets))
            lines.append(
                "endpoints="
                + ",".join("-" if e is None else f"{e[0]}>{e[1]}" for e in self.endpoints)
            )
            lines.append(f"iterations={len(self.paths)}")
            for i, (path, mu) in enumerate(self.paths):
                lines.append(f"path{i}=" + ">".join(map(str, path)) + f" mu={mu}")
            lines.append(f"fallback_used={str(self.fallback_used).lower()}")
        return "\n".join(lines) + "\n"


def _flow_within(g: CapacitatedGraph, members: Sequence[int], a: int, b: int) -> int:
    if len(members) == g.vertex_count:
        return edmonds_karp(g, a, b).value
    sub, relabel = induced_subgraph(g, members)
    return edmonds_karp(sub, relabel[a], relabel[b]).value


def part_budgets(
    g: CapacitatedGraph, p: Partitioning, s: int, t: int, seed: int
) -> tuple[list[Budget], list[tuple[int, int] | None]]:
    """Flow budget and sampled (from, to) endpoints for every part."""
    rng = stream(seed, _SAMPLING_STREAM)
    i, j = p.labels[s], p.labels[t]
    budgets: list[Budget] = []
    endpoints: list[tuple[int, int] | None] = []
    for r, members in enumerate(p.members):
        if len(members) < 2:
            budgets.append(UNBOUNDED)
            endpoints.append(None)
            continue
        if r == i:
            others = [v for v in members if v != s]
            a, b = s, others[int(rng.integers(len(others)))]
        elif r == j:
            others = [v for v in members if v != t]
            a, b = others[int(rng.integers(len(others)))], t
        else:
            x, y = rng.choice(len(members), size=2, replace=False)
            a, b = members[int(x)], members[int(y)]
        budgets.append(_flow_within(g, members, a, b))
        endpoints.append((a, b))
    return budgets, endpoints


def _fallback_amount(g: CapacitatedGraph, s: int) -> int:
    caps = [g.edges[e][2] for _, e in g.adjacency[s]]
    return min(caps) if caps else 0


def push_superflow(
    g: CapacitatedGraph, sg: SuperGraph, s: int, i: int, j: int
) -> tuple[int, list[tuple[tuple[int, ...], int]], bool]:
    """Drain budget along shortest supernode paths from part i to part j."""
    total = 0
    paths: list[tuple[tuple[int, ...], int]] = []
    fallback = False
    while True:
        path = shortest_superpath(sg, i, j)
        if path is None:
            break
        finite = [sg.budgets[r] for r in path if sg.budgets[r] is not UNBOUNDED]
        if finite:
            mu = min(finite)
        else:
            # every part on the path is a single vertex: no budget to limit flow
            fallback = True
            mu = _fallback_amount(g, s)
            if mu == 0:
                break
            for r in path:
                sg.budgets[r] = mu
        total += mu
        paths.append((tuple(path), mu))
        for r in path:
            if sg.budgets[r] is not UNBOUNDED:
                sg.budgets[r] -= mu
                if sg.budgets[r] == 0:
                    sg.removed[r] = True
    return total, paths, fallback


def heuristic_max_flow(
    g: CapacitatedGraph,
    s: int,
    t: int,
    level: int,
    seed: int,
    max_passes: int = DEFAULT_MAX_PASSES,
) -> HeuristicResult:
    """Approximate s-t maximum flow using ``2**level`` parts."""
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        raise GraphError(f"source and sink must differ (both {s})")
    start = time.perf_counter()
    p = recursive_partition(g, level, seed, max_passes)
    partition_seconds = time.perf_counter() - start
    i, j = p.labels[s], p.labels[t]
    members = p.members
    common = dict(
        level=level,
        seed=seed,
        source=s,
        sink=t,
        source_part=i,
        sink_part=j,
        part_sizes=tuple(len(m) for m in members),
        partitioning=p,
        partition_seconds=partition_seconds,
    )
    if i == j:
        value = _flow_within(g, members[i], s, t)
        return HeuristicResult(value=value, branch=SAME_CLUSTER, **common)

    budgets, endpoints = part_budgets(g, p, s, t, seed)
    sg = build_supergraph(g, p, budgets)
    value, paths, fallback = push_superflow(g, sg, s, i, j)
    return HeuristicResult(
        value=value,
        branch=CROSS_CLUSTER,
        budgets=tuple(budgets),
        endpoints=tuple(endpoints),
        paths=tuple(paths),
        fallback_used=fallback,
        **common,
    )


