"""Exact maximum flow (Edmonds-Karp) and a brute-force min-cut oracle."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import CapacitatedGraph, GraphError

MAX_ORACLE_VERTICES = 20


@dataclass(frozen=True)
class FlowResult:
    value: int
    edge_flows: tuple[int, ...]
    augmentations: int = 0


def _check_terminals(g: CapacitatedGraph, s: int, t: int) -> None:
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        raise GraphError(f"source and sink must differ (both {s})")


def edmonds_karp(g: CapacitatedGraph, s: int, t: int) -> FlowResult:
    """Maximum s-t flow by shortest (hop count) augmenting paths.

    BFS expands neighbors in ascending vertex id, so the returned per-edge
    flows are deterministic, not just the value.
    """
    _check_terminals(g, s, t)
    n = g.vertex_count
    cap = g.capacities
    arcs = g.residual_arcs
    flow = [0] * len(cap)
    value = 0
    augmentations = 0
    while True:
        # pred[v] holds the arc code used to reach v; None = unvisited
        pred: list[int | None] = [None] * n
        pred[s] = 0
        queue = deque([s])
        found = False
        while queue and not found:
            u = queue.popleft()
            for v, code in arcs[u]:
                if pred[v] is not None:
                    continue
                if code >= 0:
                    if cap[code] == flow[code]:
                        continue
                elif flow[~code] == 0:
                    continue
                pred[v] = code
                if v == t:
                    found = True
                    break
                queue.append(v)
        if not found:
            break

        bottleneck = None
        v = t
        while v != s:
            code = pred[v]
            if code >= 0:
                r = cap[code] - flow[code]
                v = g.edges[code][0]
            else:
                r = flow[~code]
                v = g.edges[~code][1]
            if bottleneck is None or r < bottleneck:
                bottleneck = r
        v = t
        while v != s:
            code = pred[v]
            if code >= 0:
                flow[code] += bottleneck
                v = g.edges[code][0]
            else:
                flow[~code] -= bottleneck
                v = g.edges[~code][1]
        value += bottleneck
        augmentations += 1
    return FlowResult(value, tuple(flow), augmentations)


def min_cut_oracle(g: CapacitatedGraph, s: int, t: int) -> int:
    """Minimum s-t cut capacity by enumerating every vertex subset."""
    _check_terminals(g, s, t)
    n = g.vertex_count
    if n > MAX_ORACLE_VERTICES:
        raise GraphError(f"oracle enumerates subsets; {n} vertices exceeds {MAX_ORACLE_VERTICES}")
    others = [v for v in range(n) if v not in (s, t)]
    edges = [(1 << u, 1 << v, c) for u, v, c in g.edges]
    best = None
    for bits in range(1 << len(others)):
        side = 1 << s
        for i, v in enumerate(others):
            if bits >> i & 1:
                side |= 1 << v
        cut = 0
        for bu, bv, c in edges:
            if side & bu and not side & bv:
                cut += c
        if best is None or cut < best:
            best = cut
    return best


def validate_flow(g: CapacitatedGraph, s: int, t: int, f: FlowResult) -> str | None:
    """Return ``None`` if ``f`` is a feasible s-t flow of value ``f.value``.

    Otherwise returns a description of the first violation found.
    """
    if len(f.edge_flows) != g.edge_count:
        return f"flow has {len(f.edge_flows)} entries but graph has {g.edge_count} edges"
    net = [0] * g.vertex_count
    for e, ((u, v, c), x) in enumerate(zip(g.edges, f.edge_flows)):
        if x < 0 or x > c:
            return f"capacity violated on edge {e} ({u}->{v}): flow {x}, capacity {c}"
        net[u] += x
        net[v] -= x
    for v in range(g.vertex_count):
        if v != s and v != t and net[v] != 0:
            return f"conservation violated at vertex {v}: net outflow {net[v]}"
    if net[s] != f.value:
        return f"net outflow of source {s} is {net[s]}, flow value is {f.value}"
    if -net[t] != f.value:
        return f"net inflow of sink {t} is {-net[t]}, flow value is {f.value}"
    return None
