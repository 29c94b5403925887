import random

import pytest

from flowpart.graph import build_graph

ACCEPTANCE_LINES: list[str] = []


def random_graph(seed, max_vertices=10, min_vertices=2, density=0.35, max_cap=10):
    """Seeded random directed graph with capacities in 1..max_cap."""
    rng = random.Random(seed)
    n = rng.randint(min_vertices, max_vertices)
    edges = [
        (u, v, rng.randint(1, max_cap))
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < density
    ]
    s, t = rng.sample(range(n), 2)
    return build_graph(n, edges), s, t


def sparse_random_graph(seed, n, avg_out_degree=3, max_cap=10):
    rng = random.Random(seed)
    edges = []
    for _ in range(n * avg_out_degree):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v, rng.randint(1, max_cap)))
    s, t = rng.sample(range(n), 2)
    return build_graph(n, edges), s, t


def undirected(n, pairs, cap=1):
    return build_graph(n, [e for u, v in pairs for e in ((u, v, cap), (v, u, cap))])


def clique_pairs(vertices):
    vs = list(vertices)
    return [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
