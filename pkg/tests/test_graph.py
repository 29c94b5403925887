import random

import pytest

from flowpart.graph import (
    CapacityError,
    EdgeListError,
    GraphError,
    LoadReport,
    SelfLoopError,
    VertexRangeError,
    build_graph,
    format_edge_list,
    induced_subgraph,
    load_edge_list,
    write_edge_list,
)

from conftest import random_graph


def test_minimal_graph():
    g = build_graph(2, [(0, 1, 7)])
    assert g.edges == ((0, 1, 7),)
    assert g.vertex_count == 2


def test_parallel_edges_merge():
    g = build_graph(2, [(0, 1, 3), (0, 1, 4)])
    assert g.edges == ((0, 1, 7),)


def test_opposite_edges_stay_separate():
    g = build_graph(2, [(0, 1, 3), (1, 0, 4)])
    assert g.edges == ((0, 1, 3), (1, 0, 4))


@pytest.mark.parametrize(
    "edges, error",
    [
        ([(0, 0, 1)], SelfLoopError),
        ([(0, 3, 1)], VertexRangeError),
        ([(-1, 2, 1)], VertexRangeError),
        ([(0, 1, 0)], CapacityError),
        ([(0, 1, -2)], CapacityError),
        ([(0, 1, 1.5)], CapacityError),
    ],
)
def test_build_graph_errors(edges, error):
    with pytest.raises(error):
        build_graph(3, edges)


def test_empty_graph_allowed():
    g = build_graph(0, [])
    assert g.edge_count == 0


def test_adjacency_and_residual_arcs():
    g = build_graph(3, [(2, 0, 1), (0, 2, 5), (0, 1, 2)])
    assert g.edges == ((0, 1, 2), (0, 2, 5), (2, 0, 1))
    assert g.adjacency[0] == ((1, 0), (2, 1))
    # vertex 0: forward to 1 and 2, backward arc from edge 2->0
    neighbors = [v for v, _ in g.residual_arcs[0]]
    assert neighbors == sorted(neighbors)
    assert len(g.residual_arcs[0]) == 3


def test_induced_subgraph_triangle():
    tri = [(0, 1, 1), (1, 2, 2), (2, 0, 3)]
    other = [(3, 4, 4), (4, 5, 5), (5, 3, 6)]
    g = build_graph(6, tri + other)
    sub, relabel = induced_subgraph(g, {3, 4, 5})
    assert sub.vertex_count == 3
    assert relabel == {3: 0, 4: 1, 5: 2}
    assert sorted(sub.edges) == [(0, 1, 4), (1, 2, 5), (2, 0, 6)]


def test_induced_subgraph_no_inner_edges():
    g = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    sub, _ = induced_subgraph(g, {0, 2})
    assert sub.vertex_count == 2
    assert sub.edges == ()


def test_induced_subgraph_empty_set():
    g = build_graph(3, [(0, 1, 1)])
    with pytest.raises(GraphError):
        induced_subgraph(g, set())


@pytest.mark.parametrize("seed", range(25))
def test_induced_subgraph_matches_filter(seed):
    g, _, _ = random_graph(seed, max_vertices=10, min_vertices=10)
    rng = random.Random(seed)
    subset = {v for v in range(10) if rng.random() < 0.5} or {0}
    sub, relabel = induced_subgraph(g, subset)
    back = {i: v for v, i in relabel.items()}
    got = sorted((back[u], back[v], c) for u, v, c in sub.edges)
    expected = sorted((u, v, c) for u, v, c in g.edges if u in subset and v in subset)
    assert got == expected


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_unweighted_one_based(tmp_path):
    g = load_edge_list(write(tmp_path, "1 2\n2 3\n"), symmetrize=False)
    assert g.vertex_count == 3
    assert g.edges == ((0, 1, 1), (1, 2, 1))


def test_load_default_capacity_and_symmetrize(tmp_path):
    report = LoadReport(index_base=0)
    g = load_edge_list(write(tmp_path, "1 2\n2 1\n2 3\n"), default_capacity=4, report=report)
    assert g.edges == ((0, 1, 4), (1, 0, 4), (1, 2, 4), (2, 1, 4))
    assert report.reverse_edges_added == 1
    assert g.undirected_edge_count == 2


def test_load_comments_and_zero_base(tmp_path):
    text = "% comment\n# another\n0 1 3\n\n1 2 4\n"
    g = load_edge_list(write(tmp_path, text), symmetrize=False)
    assert g.vertex_count == 3
    assert g.edges == ((0, 1, 3), (1, 2, 4))


def test_load_matrix_market(tmp_path):
    text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 2\n1 2\n3 4\n"
    g = load_edge_list(write(tmp_path, text), symmetrize=False)
    assert g.vertex_count == 4
    assert g.edges == ((0, 1, 1), (2, 3, 1))


def test_load_rounds_weights(tmp_path):
    report = LoadReport(index_base=0)
    g = load_edge_list(
        write(tmp_path, "0 1 2.5\n1 2 0.2\n2 3 7.49\n"), symmetrize=False, report=report
    )
    assert [c for _, _, c in g.edges] == [3, 1, 7]
    assert report.rounded_weights == 3


def test_load_weighted_flag_off_ignores_column(tmp_path):
    g = load_edge_list(write(tmp_path, "0 1 9\n"), weighted=False, symmetrize=False)
    assert g.edges == ((0, 1, 1),)


def test_load_explicit_index_base(tmp_path):
    g = load_edge_list(write(tmp_path, "1 2\n"), index_base=0, symmetrize=False)
    assert g.vertex_count == 3
    assert g.edges == ((1, 2, 1),)


def test_load_drops_self_loops(tmp_path):
    report = LoadReport(index_base=0)
    g = load_edge_list(write(tmp_path, "1 1\n1 2\n"), report=report, symmetrize=False)
    assert report.self_loops_dropped == 1
    assert g.edge_count == 1


def test_load_merges_duplicates(tmp_path):
    g = load_edge_list(write(tmp_path, "0 1 2\n0 1 3\n"), symmetrize=False)
    assert g.edges == ((0, 1, 5),)


def test_malformed_line_reports_line_number(tmp_path):
    with pytest.raises(EdgeListError) as info:
        load_edge_list(write(tmp_path, "1 2\n3\n"))
    assert info.value.line == 2


def test_non_integer_vertex(tmp_path):
    with pytest.raises(EdgeListError) as info:
        load_edge_list(write(tmp_path, "1 2\na b\n"))
    assert info.value.line == 2


def test_zero_edges(tmp_path):
    with pytest.raises(EdgeListError):
        load_edge_list(write(tmp_path, "% nothing\n"))


def test_unreadable_file(tmp_path):
    with pytest.raises(EdgeListError):
        load_edge_list(tmp_path / "missing.txt")


@pytest.mark.parametrize("seed", range(10))
def test_round_trip_is_idempotent(tmp_path, seed):
    g, _, _ = random_graph(seed, max_vertices=12)
    if g.edge_count == 0:
        g = build_graph(3, [(1, 2, 1)])
    first = tmp_path / "a.txt"
    write_edge_list(g, first)
    again = load_edge_list(first, symmetrize=False)
    assert again == g
    second = tmp_path / "b.txt"
    write_edge_list(again, second)
    assert first.read_text() == second.read_text()


def test_serialization_format():
    g = build_graph(3, [(2, 0, 5), (0, 1, 3)])
    lines = format_edge_list(g).splitlines()
    assert lines[1:] == ["0 1 3", "2 0 5"]
