"""Graph container, matrix views, traversals, and edge-list file format."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramnet.graph import DegreeProfile, Graph, read_edge_list, write_edge_list


def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


def test_construction_normalizes_and_sorts():
    g = Graph.from_edges(4, [(2, 1), (0, 3), (3, 2)])
    assert g.edges == ((0, 3), (1, 2), (2, 3))
    assert g.n_vertices == 4


def test_construction_rejects_out_of_range():
    with pytest.raises(ValueError, match="inside 0..2"):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError, match="inside 0..2"):
        Graph.from_edges(3, [(-1, 1)])


def test_from_edges_drops_loops():
    g = Graph.from_edges(3, [(0, 0), (0, 1), (2, 2)])
    assert g.edges == ((0, 1),)


def test_duplicate_edges_require_multi():
    with pytest.raises(ValueError, match="duplicate"):
        Graph(3, ((0, 1), (0, 1)))
    g = Graph(3, ((0, 1), (0, 1)), allows_multi=True)
    assert g.degrees.tolist() == [2, 2, 0]
    assert g.adjacency_matrix()[0, 1] == 2.0


def test_degrees_and_neighbors():
    g = path3()
    assert g.degrees.tolist() == [1, 2, 1]
    assert g.neighbor_lists == ((1,), (0, 2), (1,))


def test_path3_matrices():
    g = path3()
    a = g.adjacency_matrix()
    lap = g.laplacian()
    assert a.tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
    assert lap.tolist() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]


def test_matrix_views_are_read_only():
    g = path3()
    for arr in (g.adjacency_matrix(), g.laplacian(), g.degrees):
        with pytest.raises(ValueError):
            arr[0] = 99


def test_sparse_matches_dense():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    assert np.array_equal(g.adjacency_csr().toarray(), g.adjacency_matrix())
    assert np.array_equal(g.laplacian_csr().toarray(), g.laplacian())


def test_sparse_multigraph_sums_multiplicity():
    g = Graph(2, ((0, 1), (0, 1)), allows_multi=True)
    assert g.adjacency_csr().toarray().tolist() == [[0, 2], [2, 0]]
    assert g.laplacian_csr().toarray().tolist() == [[2, -2], [-2, 2]]


def test_connected_components():
    g = Graph.from_edges(5, [(0, 1), (2, 3)])
    comps = g.connected_components()
    assert sorted(sorted(c) for c in comps) == [[0, 1], [2, 3], [4]]
    assert not g.is_connected()
    assert path3().is_connected()


def test_bipartite_detection():
    even_cycle = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    odd_cycle = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert even_cycle.is_bipartite()
    assert not odd_cycle.is_bipartite()
    assert path3().is_bipartite()
    # disconnected: bipartite iff every component is
    two_parts = Graph.from_edges(7, [(0, 1), (2, 3), (4, 5), (5, 6), (6, 4)])
    assert not two_parts.is_bipartite()


def test_degree_profile():
    assert path3().degree_profile() == DegreeProfile(1, 2, 4 / 3, False)
    ring = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert ring.degree_profile() == DegreeProfile(2, 2, 2.0, True)


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_edges(5, [(0, 4), (1, 2), (2, 3)])
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    text = path.read_text(encoding="utf-8")
    assert text == "5 3\n0 4\n1 2\n2 3\n"
    back = read_edge_list(path)
    assert back == g


def test_edge_list_multigraph_round_trip(tmp_path):
    g = Graph(3, ((0, 1), (0, 1), (1, 2)), allows_multi=True)
    path = tmp_path / "m.txt"
    write_edge_list(g, path)
    back = read_edge_list(path)  # duplicate rows imply a multigraph
    assert back.allows_multi
    assert back == g


def test_read_edge_list_errors(tmp_path):
    bad_header = tmp_path / "a.txt"
    bad_header.write_text("3\n0 1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        read_edge_list(bad_header)

    bad_count = tmp_path / "b.txt"
    bad_count.write_text("3 2\n0 1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="2 edges"):
        read_edge_list(bad_count)

    bad_vertex = tmp_path / "c.txt"
    bad_vertex.write_text("3 1\n0 7\n", encoding="utf-8")
    with pytest.raises(ValueError, match="outside vertex range"):
        read_edge_list(bad_vertex)

    forced_simple = tmp_path / "d.txt"
    forced_simple.write_text("3 2\n0 1\n0 1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        read_edge_list(forced_simple, allows_multi=False)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=12))
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(possible), unique=True, max_size=len(possible)))
    return Graph.from_edges(n, edges)


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_laplacian_invariants(g):
    lap = g.laplacian()
    assert np.array_equal(lap, lap.T)
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert np.allclose(lap @ np.ones(g.n_vertices), 0.0)
    vals = np.linalg.eigvalsh(lap)
    assert vals[0] >= -1e-9
    # zero-eigenvalue multiplicity equals the number of components
    n_zero = int(np.sum(np.abs(vals) < 1e-8))
    assert n_zero == len(g.connected_components())


@given(small_graphs())
@settings(max_examples=60, deadline=None)
def test_degree_equals_adjacency_row_sum(g):
    assert np.array_equal(g.degrees, g.adjacency_matrix().sum(axis=1).astype(np.int64))
