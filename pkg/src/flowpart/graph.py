"""Directed capacitated graphs, induced subgraphs and edge-list I/O."""

from __future__ import annotations

import math
import numbers
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

Edge = tuple[int, int, int]


class GraphError(ValueError):
    """Base class for invalid graph construction."""


class SelfLoopError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class CapacityError(GraphError):
    pass


class EdgeListError(GraphError):
    """Raised for unreadable or malformed edge-list files."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class CapacitatedGraph:
    """Immutable directed graph with positive integer capacities.

    Edges are stored merged (one entry per ordered pair) and sorted by
    ``(u, v)``; the edge id is the position in ``edges``.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Outgoing ``(neighbor, edge_id)`` pairs per vertex, by neighbor id."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v, _) in enumerate(self.edges):
            out[u].append((v, e))
        return tuple(tuple(a) for a in out)

    @cached_property
    def residual_arcs(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-vertex arcs of the residual network, sorted by neighbor id.

        An arc is ``(neighbor, code)`` where ``code = e`` walks edge ``e``
        forward and ``code = ~e`` walks it backward (cancelling flow).
        """
        arcs: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e, (u, v, _) in enumerate(self.edges):
            arcs[u].append((v, e))
            arcs[v].append((u, ~e))
        # for the same neighbor the backward arc (negative code) sorts first
        return tuple(tuple(sorted(a)) for a in arcs)

    @cached_property
    def capacities(self) -> tuple[int, ...]:
        return tuple(c for _, _, c in self.edges)

    @cached_property
    def undirected_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Symmetrized, unweighted neighbor lists (sorted, no duplicates)."""
        nbrs: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v, _ in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(tuple(sorted(s)) for s in nbrs)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def undirected_edge_count(self) -> int:
        """Number of distinct unordered vertex pairs joined by an edge."""
        return sum(len(n) for n in self.undirected_neighbors) // 2

    def out_degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> list[int]:
        """Undirected degree (distinct neighbors) of every vertex."""
        return [len(n) for n in self.undirected_neighbors]

    def prepare(self) -> "CapacitatedGraph":
        """Build every cached index now instead of on first use."""
        self.adjacency, self.residual_arcs, self.capacities, self.undirected_neighbors
        return self

    def check_vertex(self, u: int) -> None:
        if not 0 <= u < self.vertex_count:
            raise VertexRangeError(f"vertex {u} out of range [0, {self.vertex_count})")


def build_graph(vertex_count: int, edge_list: Iterable[Sequence[int]]) -> CapacitatedGraph:
    """Validate ``(u, v, capacity)`` triples and merge parallel edges."""
    if vertex_count < 0:
        raise VertexRangeError(f"vertex_count must be >= 0, got {vertex_count}")
    merged: dict[tuple[int, int], int] = {}
    for u, v, c in edge_list:
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise VertexRangeError(f"edge ({u}, {v}) has endpoint outside [0, {vertex_count})")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if isinstance(c, bool) or not isinstance(c, numbers.Integral) or c < 1:
            raise CapacityError(f"edge ({u}, {v}) has invalid capacity {c!r}")
        key = (int(u), int(v))
        merged[key] = merged.get(key, 0) + int(c)
    edges = tuple((u, v, c) for (u, v), c in sorted(merged.items()))
    return CapacitatedGraph(vertex_count, edges)


def induced_subgraph(
    g: CapacitatedGraph, vertices: Iterable[int]
) -> tuple[CapacitatedGraph, dict[int, int]]:
    """Subgraph on ``vertices`` with ids compacted in ascending original order.

    Returns the subgraph and the map from original to subgraph ids.
    """
    members = sorted(set(vertices))
    if not members:
        raise GraphError("induced subgraph needs at least one vertex")
    for u in members:
        g.check_vertex(u)
    relabel = {u: i for i, u in enumerate(members)}
    edges = []
    for u in members:
        ru = relabel[u]
        for v, e in g.adjacency[u]:
            rv = relabel.get(v)
            if rv is not None:
                edges.append((ru, rv, g.edges[e][2]))
    # already merged and sorted because members and adjacency are sorted
    return CapacitatedGraph(len(members), tuple(edges)), relabel


def _parse_number(token: str) -> float | int:
    try:
        return int(token)
    except ValueError:
        return float(token)


def _round_capacity(w: float | int) -> int:
    if isinstance(w, int):
        return max(1, w)
    if not math.isfinite(w):
        raise ValueError(f"non-finite weight {w}")
    return max(1, math.floor(w + 0.5))


_DIRECTIVE = "# flowpart"


@dataclass
class LoadReport:
    """Side information gathered while reading an edge-list file."""

    index_base: int
    lines: int = 0
    self_loops_dropped: int = 0
    reverse_edges_added: int = 0
    rounded_weights: int = 0
    directive: dict[str, str] = field(default_factory=dict)


def load_edge_list(
    path: str | os.PathLike,
    *,
    weighted: bool | None = None,
    default_capacity: int = 1,
    index_base: Literal["auto", 0, 1] | str | int = "auto",
    symmetrize: bool = True,
    report: LoadReport | None = None,
) -> CapacitatedGraph:
    """Read a whitespace-separated edge list (``u v`` or ``u v w`` per line).

    ``weighted=None`` uses a third column whenever one is present. Lines
    starting with ``%`` or ``#`` are comments; a Matrix Market banner makes
    the first non-comment line a dimension line, which is skipped. Self-loops
    are dropped and counted in ``report``.
    """
    path = os.fspath(path)
    if default_capacity < 1:
        raise CapacityError(f"default_capacity must be >= 1, got {default_capacity}")
    if index_base not in ("auto", 0, 1, "0", "1"):
        raise ValueError(f"index_base must be auto, 0 or 1, got {index_base!r}")
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            text = fh.read()
    except OSError as exc:
        raise EdgeListError(f"cannot read file ({exc.strerror})", path) from exc

    raw: list[tuple[int, int, int, int]] = []  # u, v, capacity, line number
    directive: dict[str, str] = {}
    matrix_market = False
    skip_dimension = False
    rounded = 0
    lines = text.splitlines()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("%%MatrixMarket"):
            matrix_market = skip_dimension = True
            continue
        if stripped.startswith(_DIRECTIVE):
            for item in stripped[len(_DIRECTIVE):].split():
                key, _, value = item.partition("=")
                directive[key] = value
            continue
        if stripped[0] in "%#":
            continue
        if skip_dimension:
            skip_dimension = False
            continue
        parts = stripped.replace(",", " ").split()
        if len(parts) < 2:
            raise EdgeListError(f"expected 'u v [w]', got {stripped!r}", path, lineno)
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex id in {stripped!r}", path, lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative vertex id in {stripped!r}", path, lineno)
        cap = default_capacity
        use_weight = weighted if weighted is not None else len(parts) >= 3
        if use_weight:
            if len(parts) < 3:
                raise EdgeListError("weighted file but line has no weight", path, lineno)
            try:
                w = _parse_number(parts[2])
                cap = _round_capacity(w)
            except ValueError:
                raise EdgeListError(f"bad weight {parts[2]!r}", path, lineno) from None
            if not isinstance(w, int):
                rounded += 1
        raw.append((u, v, cap, lineno))

    if not raw:
        raise EdgeListError("file contains no edges", path)

    if "index_base" in directive:
        base = int(directive["index_base"])
    elif index_base == "auto":
        # Matrix Market is 1-based by definition
        base = 1 if matrix_market or all(u != 0 and v != 0 for u, v, _, _ in raw) else 0
    else:
        base = int(index_base)
    max_id = max(max(u, v) for u, v, _, _ in raw)
    n = max_id - base + 1
    if "vertices" in directive:
        n = max(n, int(directive["vertices"]))

    rep = report if report is not None else LoadReport(index_base=base)
    rep.index_base = base
    rep.lines = len(raw)
    rep.rounded_weights = rounded
    rep.directive = directive

    edges: dict[tuple[int, int], int] = {}
    for u, v, cap, lineno in raw:
        u -= base
        v -= base
        if u < 0 or v < 0:
            raise EdgeListError(f"vertex id below index base {base}", path, lineno)
        if u == v:
            rep.self_loops_dropped += 1
            continue
        edges[(u, v)] = edges.get((u, v), 0) + cap
    if symmetrize:
        for (u, v), cap in list(edges.items()):
            if (v, u) not in edges:
                edges[(v, u)] = cap
                rep.reverse_edges_added += 1
    if not edges:
        raise EdgeListError("file contains no edges besides self-loops", path)
    return build_graph(n, ((u, v, c) for (u, v), c in edges.items()))


def format_edge_list(g: CapacitatedGraph) -> str:
    """Serialize as ``u v w`` lines, 0-based, sorted by ``(u, v)``."""
    head = f"{_DIRECTIVE} vertices={g.vertex_count} index_base=0\n"
    return head + "".join(f"{u} {v} {c}\n" for u, v, c in g.edges)


def write_edge_list(g: CapacitatedGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
