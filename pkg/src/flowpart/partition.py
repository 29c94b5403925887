"""Kernighan-Lin bisection and recursive 2**l partitioning.

Edge directions and capacities are ignored: the partitioner works on the
symmetrized, unweighted graph and minimizes the number of cut edges.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import CapacitatedGraph, GraphError

DEFAULT_MAX_PASSES = 10


@dataclass(frozen=True)
class Bipartition:
    sides: tuple[int, ...]  # 0 or 1 per vertex
    cut_size: int
    pass_cuts: tuple[int, ...]  # cut before the first pass, then after each improving pass

    @property
    def sizes(self) -> tuple[int, int]:
        ones = sum(self.sides)
        return len(self.sides) - ones, ones


@dataclass(frozen=True)
class SplitTrace:
    """Record of one bisection performed during recursive partitioning."""

    depth: int
    part: int  # id prefix (binary path) of the part that was split
    sizes: tuple[int, int]
    pass_cuts: tuple[int, ...]


@dataclass(frozen=True)
class Partitioning:
    level: int
    labels: tuple[int, ...]  # partition id in [0, k) per vertex
    trace: tuple[SplitTrace, ...] = ()

    @property
    def k(self) -> int:
        return 1 << self.level

    @property
    def members(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, p in enumerate(self.labels):
            out[p].append(v)
        return tuple(tuple(m) for m in out)

    def cut_edges(self, g: CapacitatedGraph) -> list[tuple[int, int]]:
        """Directed edges whose endpoints lie in different partitions."""
        lab = self.labels
        return [(u, v) for u, v, _ in g.edges if lab[u] != lab[v]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex_id", "partition_id"])
        w.writerows(enumerate(self.labels))
        return buf.getvalue()


def cut_size(neighbors: Sequence[Sequence[int]], sides: Sequence[int]) -> int:
    """Number of undirected edges with endpoints on different sides."""
    return sum(1 for u, nb in enumerate(neighbors) for v in nb if u < v and sides[u] != sides[v])


def same_grouping(a: Sequence[int], b: Sequence[int]) -> bool:
    """True if two labelings induce the same vertex groups (ids may differ)."""
    if len(a) != len(b):
        return False
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    for x, y in zip(a, b):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def co_membership(a: Sequence[int], b: Sequence[int]) -> float:
    """Fraction of pairs grouped together under ``b`` that ``a`` also groups together."""
    together = agree = 0
    n = len(b)
    for u in range(n):
        for v in range(u + 1, n):
            if b[u] == b[v]:
                together += 1
                agree += a[u] == a[v]
    return agree / together if together else 1.0


def _split_rng(seed: int, depth: int, part: int) -> np.random.Generator:
    # one independent stream per node of the recursion tree
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, depth, part)))


def random_balanced_sides(n: int, rng: np.random.Generator) -> list[int]:
    """Balanced random 0/1 assignment; for odd n the larger side is random."""
    order = rng.permutation(n)
    big_side = int(rng.integers(2))
    n_zero = n // 2 if big_side == 1 else n - n // 2
    sides = [1] * n
    for v in order[:n_zero]:
        sides[int(v)] = 0
    return sides


class _Csr:
    """Flat neighbor arrays for vectorized gain initialization."""

    def __init__(self, neighbors: Sequence[Sequence[int]]):
        self.n = len(neighbors)
        self.degree = np.fromiter((len(nb) for nb in neighbors), dtype=np.int64, count=self.n)
        self.rows = np.repeat(np.arange(self.n), self.degree)
        self.cols = np.fromiter(
            (v for nb in neighbors for v in nb), dtype=np.int64, count=int(self.degree.sum())
        )
        self.max_deg = int(self.degree.max()) if self.n else 0

    def external(self, sides: Sequence[int]) -> np.ndarray:
        s = np.asarray(sides, dtype=np.int8)
        crossing = s[self.rows] != s[self.cols]
        return np.bincount(self.rows[crossing], minlength=self.n)


def _kl_pass(
    neighbors: Sequence[Sequence[int]], nbr_sets: Sequence[set[int]], csr: _Csr, sides: list[int]
):
    """One KL pass: greedy locked swaps; returns (swaps, gains)."""
    n = len(sides)
    max_deg = csr.max_deg
    # d[u] = external - internal edge count, stored shifted by max_deg
    d = (max_deg - csr.degree + 2 * csr.external(sides)).tolist()

    # buckets[side][d] is a stack with lazy deletion: an entry x is live
    # only while x is unlocked and d[x] still equals the bucket index
    width = 2 * max_deg + 1
    buckets: list[list[list[int]]] = [[[] for _ in range(width)] for _ in range(2)]
    for u in range(n - 1, -1, -1):
        buckets[sides[u]][d[u]].append(u)
    top = [width - 1, width - 1]
    locked = bytearray(n)
    n_ones = sum(sides)

    row_a, row_b = buckets
    swaps: list[tuple[int, int]] = []
    gains: list[int] = []
    for _ in range(min(n - n_ones, n_ones)):
        # pop stale entries until the highest live vertex of each side is on top
        i = top[0]
        while True:
            stack = row_a[i]
            while stack and (locked[stack[-1]] or d[stack[-1]] != i):
                stack.pop()
            if stack:
                break
            i -= 1
        top[0] = i
        a = stack[-1]
        i = top[1]
        while True:
            stack = row_b[i]
            while stack and (locked[stack[-1]] or d[stack[-1]] != i):
                stack.pop()
            if stack:
                break
            i -= 1
        top[1] = i
        b = stack[-1]
        gain = d[a] + d[b] - 2 * max_deg
        if b in nbr_sets[a]:
            a, b, gain = _best_pair(buckets, top, d, locked, max_deg, nbr_sets)
        swaps.append((a, b))
        gains.append(gain)
        locked[a] = locked[b] = 1
        # a leaves side 0: its side-0 neighbors gain an external edge, side-1 ones lose one
        for x in neighbors[a]:
            if locked[x]:
                continue
            if sides[x]:
                i = d[x] - 2
                d[x] = i
                row_b[i].append(x)
            else:
                i = d[x] + 2
                d[x] = i
                row_a[i].append(x)
                if i > top[0]:
                    top[0] = i
        for x in neighbors[b]:
            if locked[x]:
                continue
            if sides[x]:
                i = d[x] + 2
                d[x] = i
                row_b[i].append(x)
                if i > top[1]:
                    top[1] = i
            else:
                i = d[x] - 2
                d[x] = i
                row_a[i].append(x)
    return swaps, gains


def _live(stack: list[int], i: int, d: list[int], locked: bytearray):
    seen = set()
    for x in reversed(stack):
        if not locked[x] and d[x] == i and x not in seen:
            seen.add(x)
            yield x


def _best_pair(buckets, top, d, locked, max_deg, nbr_sets):
    """Exhaustive best-gain pair search, used when the top pair is adjacent.

    Gains are d_a + d_b - 2 for adjacent pairs, so only vertices within one
    bucket of either maximum can beat the adjacent top pair.
    """
    row_a, row_b = buckets
    ta, tb = top
    best = None
    for ia in range(ta, -1, -1):
        if best is not None and ia + tb - 2 * max_deg <= best[2]:
            break
        for a in _live(row_a[ia], ia, d, locked):
            nb_a = nbr_sets[a]
            for ib in range(tb, -1, -1):
                base = ia + ib - 2 * max_deg
                if best is not None and base <= best[2]:
                    break
                for b in _live(row_b[ib], ib, d, locked):
                    gain = base - 2 if b in nb_a else base
                    if best is None or gain > best[2]:
                        best = (a, b, gain)
                        if gain == base:
                            break
    return best


def kernighan_lin_sides(
    neighbors: Sequence[Sequence[int]],
    sides: list[int],
    max_passes: int = DEFAULT_MAX_PASSES,
) -> tuple[list[int], list[int]]:
    """Improve ``sides`` in place by KL passes; returns (sides, pass_cuts)."""
    nbr_sets = [set(nb) for nb in neighbors]
    csr = _Csr(neighbors)
    cut = int(csr.external(sides).sum()) // 2
    pass_cuts = [cut]
    for _ in range(max_passes):
        swaps, gains = _kl_pass(neighbors, nbr_sets, csr, sides)
        best_total, best_len, total = 0, 0, 0
        for i, g in enumerate(gains, start=1):
            total += g
            if total > best_total:
                best_total, best_len = total, i
        if best_total <= 0:
            break
        for a, b in swaps[:best_len]:
            sides[a], sides[b] = 1, 0
        cut -= best_total
        pass_cuts.append(cut)
    return sides, pass_cuts


def kernighan_lin(
    g: CapacitatedGraph, seed: int, max_passes: int = DEFAULT_MAX_PASSES
) -> Bipartition:
    """Balanced bisection of ``g`` minimizing the number of cut edges."""
    if g.vertex_count < 2:
        raise GraphError(f"bisection needs at least 2 vertices, got {g.vertex_count}")
    rng = _split_rng(seed, 0, 0)
    sides = random_balanced_sides(g.vertex_count, rng)
    sides, pass_cuts = kernighan_lin_sides(g.undirected_neighbors, sides, max_passes)
    return Bipartition(tuple(sides), pass_cuts[-1], tuple(pass_cuts))


def recursive_partition(
    g: CapacitatedGraph, level: int, seed: int, max_passes: int = DEFAULT_MAX_PASSES
) -> Partitioning:
    """Split ``g`` into ``2**level`` parts by repeated KL bisection.

    Part ids are binary paths: at each split the side-0 half appends a 0 bit
    and the side-1 half a 1 bit, so ids are stable for a given seed.
    """
    if level < 0:
        raise GraphError(f"level must be >= 0, got {level}")
    if (1 << level) > g.vertex_count:
        raise GraphError(f"2**{level} partitions exceed {g.vertex_count} vertices")
    labels = [0] * g.vertex_count
    trace: list[SplitTrace] = []

    def split(vertices: list[int], nbrs: list[list[int]], depth: int, part: int) -> None:
        # vertices are ascending; nbrs holds local ids within this part
        if depth == level:
            for v in vertices:
                labels[v] = part
            return
        rng = _split_rng(seed, depth, part)
        sides = random_balanced_sides(len(vertices), rng)
        sides, pass_cuts = kernighan_lin_sides(nbrs, sides, max_passes)
        local_ids = [0] * len(vertices)
        counts = [0, 0]
        for i, side in enumerate(sides):
            local_ids[i] = counts[side]
            counts[side] += 1
        trace.append(SplitTrace(depth, part, (counts[0], counts[1]), tuple(pass_cuts)))
        for side in (0, 1):
            keep = [i for i in range(len(vertices)) if sides[i] == side]
            sub_nbrs = [
                [local_ids[j] for j in nbrs[i] if sides[j] == side] for i in keep
            ]
            split([vertices[i] for i in keep], sub_nbrs, depth + 1, (part << 1) | side)

    split(list(range(g.vertex_count)), [list(nb) for nb in g.undirected_neighbors], 0, 0)
    return Partitioning(level, tuple(labels), tuple(trace))
