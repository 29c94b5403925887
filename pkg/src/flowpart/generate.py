"""Seeded clustered random graphs (planted partition model)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import CapacitatedGraph, build_graph

# Bump when the sampling scheme changes; old seeds then map to new graphs.
RNG_SCHEME = "pcg64-v1"
_TOPOLOGY_STREAM = 0
_WEIGHT_STREAM = 1


@dataclass(frozen=True)
class GeneratorConfig:
    clusters: int
    nodes_per_cluster: int
    inp: float
    outp: float
    seed: int = 0
    weight_min: int = 1
    weight_max: int = 10

    def __post_init__(self):
        if self.clusters < 1 or self.nodes_per_cluster < 1:
            raise ValueError("clusters and nodes_per_cluster must be positive")
        for name in ("inp", "outp"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.weight_min < 1 or self.weight_max < self.weight_min:
            raise ValueError(f"bad weight range [{self.weight_min}, {self.weight_max}]")

    @property
    def vertex_count(self) -> int:
        return self.clusters * self.nodes_per_cluster


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _triangle_pairs(index: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices onto pairs i < j < m in row-major order."""
    # row i starts at i*(2m - i - 1)/2; invert the quadratic, then fix rounding
    index = index.astype(np.int64)
    b = 2 * m - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * index)) / 2).astype(np.int64)
    start = i * (2 * m - i - 1) // 2
    # float rounding can be off by one row in either direction
    too_far = start > index
    i[too_far] -= 1
    start = i * (2 * m - i - 1) // 2
    next_start = (i + 1) * (2 * m - i - 2) // 2
    short = index >= next_start
    i[short] += 1
    start = i * (2 * m - i - 1) // 2
    j = index - start + i + 1
    return i, j


def _sample(rng: np.random.Generator, population: int, p: float) -> np.ndarray:
    # Binomial count then a uniform subset is the same law as independent Bernoulli trials
    if population == 0 or p == 0.0:
        return np.empty(0, dtype=np.int64)
    count = int(rng.binomial(population, p))
    if count == population:
        return np.arange(population, dtype=np.int64)
    return np.sort(rng.choice(population, size=count, replace=False)).astype(np.int64)


def sample_pairs(cfg: GeneratorConfig) -> list[tuple[int, int]]:
    """Realized undirected pairs (u < v), sorted, without weights."""
    rng = stream(cfg.seed, _TOPOLOGY_STREAM)
    m = cfg.nodes_per_cluster
    chunks: list[np.ndarray] = []
    for a in range(cfg.clusters):
        idx = _sample(rng, m * (m - 1) // 2, cfg.inp)
        i, j = _triangle_pairs(idx, m)
        chunks.append(np.stack([i + a * m, j + a * m], axis=1))
        for b in range(a + 1, cfg.clusters):
            idx = _sample(rng, m * m, cfg.outp)
            chunks.append(np.stack([idx // m + a * m, idx % m + b * m], axis=1))
    if not chunks:
        return []
    pairs = np.concatenate(chunks)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return [(int(u), int(v)) for u, v in pairs[order]]


def generate(cfg: GeneratorConfig) -> tuple[CapacitatedGraph, tuple[int, ...]]:
    """Clustered graph plus the planted cluster label of every vertex.

    Each realized pair gets one weight, used as the capacity of both
    directions.
    """
    pairs = sample_pairs(cfg)
    weights = stream(cfg.seed, _WEIGHT_STREAM).integers(
        cfg.weight_min, cfg.weight_max + 1, size=len(pairs)
    )
    edges = []
    for (u, v), w in zip(pairs, weights.tolist()):
        edges.append((u, v, w))
        edges.append((v, u, w))
    labels = tuple(v // cfg.nodes_per_cluster for v in range(cfg.vertex_count))
    return build_graph(cfg.vertex_count, edges), labels
