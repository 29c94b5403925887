import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowpart.graph import GraphError, VertexRangeError, build_graph
from flowpart.maxflow import FlowResult, edmonds_karp, min_cut_oracle, validate_flow

from conftest import random_graph, sparse_random_graph

DIAMOND = build_graph(4, [(0, 1, 3), (0, 2, 4), (1, 3, 3), (2, 3, 4)])


def test_single_edge():
    g = build_graph(2, [(0, 1, 7)])
    f = edmonds_karp(g, 0, 1)
    assert f.value == 7
    assert f.edge_flows == (7,)


def test_diamond():
    # every s-t cut of the diamond has capacity 7 (four subsets, by hand)
    assert edmonds_karp(DIAMOND, 0, 3).value == 7
    assert min_cut_oracle(DIAMOND, 0, 3) == 7


def test_unreachable_sink():
    g = build_graph(4, [(0, 1, 5), (2, 3, 5), (3, 1, 2)])
    assert edmonds_karp(g, 0, 3).value == 0
    assert min_cut_oracle(g, 0, 3) == 0


def test_backward_arc_needed():
    # the first shortest path 0-1-2-3 blocks; cancelling flow on 1->2 recovers 2
    g = build_graph(4, [(0, 1, 1), (0, 2, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)])
    assert edmonds_karp(g, 0, 3).value == 2


def test_errors():
    with pytest.raises(GraphError):
        edmonds_karp(DIAMOND, 1, 1)
    with pytest.raises(VertexRangeError):
        edmonds_karp(DIAMOND, 0, 9)
    big = build_graph(21, [(0, 1, 1)])
    with pytest.raises(GraphError):
        min_cut_oracle(big, 0, 1)


@pytest.mark.parametrize("seed", range(60))
def test_matches_oracle(seed):
    g, s, t = random_graph(seed)
    assert edmonds_karp(g, s, t).value == min_cut_oracle(g, s, t)


@pytest.mark.parametrize("seed", range(20))
def test_matches_networkx(seed):
    g, s, t = sparse_random_graph(seed, 80)
    G = nx.DiGraph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_weighted_edges_from(g.edges, weight="capacity")
    assert edmonds_karp(g, s, t).value == nx.maximum_flow_value(G, s, t)


@pytest.mark.parametrize("seed", range(30))
def test_augmentation_bound_and_validity(seed):
    g, s, t = sparse_random_graph(seed, 60)
    f = edmonds_karp(g, s, t)
    assert f.augmentations <= g.vertex_count * max(g.edge_count, 1)
    assert validate_flow(g, s, t, f) is None


def test_deterministic_flows():
    g, s, t = sparse_random_graph(3, 100)
    assert edmonds_karp(g, s, t) == edmonds_karp(g, s, t)


def test_validate_zero_flow():
    assert validate_flow(DIAMOND, 0, 3, FlowResult(0, (0, 0, 0, 0))) is None


def test_validate_capacity_violation():
    msg = validate_flow(DIAMOND, 0, 3, FlowResult(4, (4, 0, 4, 0)))
    assert msg is not None and "edge 0" in msg and "capacity" in msg


def test_validate_conservation_violation():
    msg = validate_flow(DIAMOND, 0, 3, FlowResult(3, (3, 0, 2, 0)))
    assert msg is not None and "vertex 1" in msg


def test_validate_value_mismatch():
    msg = validate_flow(DIAMOND, 0, 3, FlowResult(5, (3, 0, 3, 0)))
    assert msg is not None and "source" in msg


def test_validate_wrong_length():
    assert validate_flow(DIAMOND, 0, 3, FlowResult(0, (0,))) is not None


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 8))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, 10))
    edges = [e for e in draw(st.lists(pairs, max_size=25)) if e[0] != e[1]]
    s, t = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    return build_graph(n, edges), s, t


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_max_flow_equals_min_cut(case):
    g, s, t = case
    f = edmonds_karp(g, s, t)
    assert f.value == min_cut_oracle(g, s, t)
    assert validate_flow(g, s, t, f) is None
