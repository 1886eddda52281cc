from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import edge_lists, graphs
from lclsim.graph import (
    Graph,
    GraphError,
    ball,
    dumps_graph,
    load_graph,
    loads_graph,
    make_cycle,
    make_graph,
    make_grid_torus,
    make_path,
    make_random_graph,
    make_regular_tree,
    power_degree_bound,
    power_graph,
    save_graph,
)
from oracles import all_pairs_distances


def test_path_three():
    G = make_path(3)
    assert G.edges() == [(0, 1), (1, 2)]
    assert [G.degree(x) for x in range(3)] == [1, 2, 1]


def test_torus_three_by_three():
    G = make_grid_torus([3, 3])
    assert G.n == 9
    assert {G.degree(x) for x in range(9)} == {4}
    assert G.num_edges() == 18


def test_torus_edge_labels_are_generators():
    G = make_grid_torus([3, 4])
    for (x, y), lab in G.edge_label.items():
        assert G.edge_label[(y, x)] == ("-" if lab[0] == "+" else "+") + lab[1:]
    assert set(G.edge_label.values()) == {"+e0", "-e0", "+e1", "-e1"}


def test_regular_tree_counts():
    assert make_regular_tree(3, 2).n == 10
    T = make_regular_tree(3, 3)
    assert T.n == 1 + 3 + 6 + 12
    degs = sorted({T.degree(x) for x in range(T.n)})
    assert degs == [1, 3]


@pytest.mark.parametrize(
    "call",
    [lambda: make_path(0), lambda: make_cycle(2), lambda: make_grid_torus([]), lambda: make_grid_torus([3, 2]),
     lambda: make_regular_tree(1, 2), lambda: make_graph("mobius", n=4)],
)
def test_generators_reject_degenerate_input(call):
    with pytest.raises(GraphError):
        call()


def test_constructor_rejects_broken_adjacency():
    with pytest.raises(GraphError):
        Graph(2, [[1], []])
    with pytest.raises(GraphError):
        Graph(2, [[0], []])
    with pytest.raises(GraphError):
        Graph(3, [[1, 1], [0], []])
    with pytest.raises(GraphError):
        Graph(3, [[1, 2], [0], [0]], degree_bound=1)
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 1), (1, 0)])


def test_cycle_ports_and_labels():
    G = make_cycle(5)
    assert G.adj[0] == (1, 4) and G.adj[4] == (0, 3)
    for x in range(5):
        y = (x + 1) % 5
        assert G.edge_label[(x, y)] == "+1" and G.edge_label[(y, x)] == "-1"
    assert G.port_of(0, 4) == 1 and G.neighbor(0, 1) == 4


def test_power_graph_examples():
    P = power_graph(make_path(5), 2)
    assert set(P.adj[2]) == {0, 1, 3, 4}
    C = power_graph(make_cycle(6), 3)
    assert all(C.degree(x) == 5 for x in range(6))
    G = make_grid_torus([3, 4])
    assert power_graph(G, 1).edges() == G.edges()


@given(edge_lists(max_n=14, max_degree=5), st.integers(1, 4))
def test_power_graph_matches_all_pairs_oracle(nE, r):
    n, edges = nE
    G = Graph.from_edges(n, edges)
    D = all_pairs_distances(n, edges)
    P = power_graph(G, r)
    for x in range(n):
        assert set(P.adj[x]) == {y for y in range(n) if y != x and D[x, y] <= r}


def test_power_degree_bound_is_tight_on_trees():
    T = make_regular_tree(3, 4)
    assert power_graph(T, 2).degree(0) == power_degree_bound(3, 2) == 9


def test_ball_examples():
    V = ball(make_cycle(6), 0, 2, list(range(6)))
    assert V.size == 5 and sorted(V.dist) == [0, 1, 1, 2, 2]
    assert ball(make_path(1), 0, 5, [7]).size == 1
    assert ball(make_regular_tree(3, 3), 0, 1, [0] * 40).size == 4


@given(graphs(max_n=14), st.data())
def test_ball_vertex_set_matches_oracle(G, data):
    v = data.draw(st.integers(0, G.n - 1))
    T = data.draw(st.integers(0, 4))
    V = ball(G, v, T, list(range(G.n)))
    D = all_pairs_distances(G.n, G.edges())
    assert set(V.host) == {u for u in range(G.n) if D[v, u] <= T}
    assert V.host[0] == v
    assert all(D[v, u] == d for u, d in zip(V.host, V.dist))
    assert V.payload == tuple(V.host)
    # induced: every host edge between ball vertices appears in the view
    inside = set(V.host)
    local = {u: i for i, u in enumerate(V.host)}
    for i, u in enumerate(V.host):
        expect = {(p, local[w]) for p, w in enumerate(G.adj[u]) if w in inside}
        assert set(V.adj[i]) == expect


def test_ball_requires_payload_everywhere():
    with pytest.raises(GraphError):
        ball(make_path(4), 0, 2, {0: 1, 1: 1})
    with pytest.raises(GraphError):
        ball(make_path(4), 9, 1, [0] * 4)


def test_automorphic_balls_share_an_encoding():
    G = make_cycle(12)
    # vertices 0 and 11 carry the wrap-around edge with reversed port order
    views = {ball(G, v, 3, [0] * 12).encoding() for v in range(4, 8)}
    assert len(views) == 1
    assert ball(G, 1, 3, [0] * 12).encoding() != ball(G, 5, 3, [0] * 12).encoding()
    P = make_path(20)
    assert ball(P, 5, 3, [1] * 20).encoding() == ball(P, 12, 3, [1] * 20).encoding()
    # the endpoint breaks the symmetry
    assert ball(P, 2, 3, [1] * 20).encoding() != ball(P, 12, 3, [1] * 20).encoding()


def test_view_encoding_tracks_payload():
    G = make_cycle(8)
    a = ball(G, 0, 2, list(range(8)))
    b = ball(G, 0, 2, [7 - i for i in range(8)])
    assert a.encoding() != b.encoding()


@given(graphs(max_n=12))
def test_edge_list_round_trip(G):
    assert loads_graph(dumps_graph(G)) == G


@pytest.mark.parametrize("G", [make_cycle(7), make_path(5), make_grid_torus([3, 4]), make_regular_tree(3, 2)])
def test_edge_list_round_trip_with_labels(G, tmp_path):
    save_graph(G, tmp_path / "g.txt")
    H = load_graph(tmp_path / "g.txt")
    assert H == G
    assert dumps_graph(H) == dumps_graph(G)


def test_asymmetric_labels_round_trip():
    G = Graph.from_edges(3, [(0, 1), (1, 2)], {(0, 1): "a", (2, 1): "b"})
    assert loads_graph(dumps_graph(G)) == G


def test_bad_edge_list():
    with pytest.raises(GraphError):
        loads_graph("3\n0 1\n")
    with pytest.raises(GraphError):
        loads_graph("3 2\n0 1 a b c\n")


def test_random_graph_respects_degree_bound():
    G = make_random_graph(300, 4, np.random.default_rng(3))
    assert G.max_degree() <= 4 == G.d
    assert G.num_edges() > 300


def test_bfs_order_covers_components():
    G = Graph.from_edges(5, [(0, 3), (1, 2)])
    assert G.bfs_order() == [0, 3, 1, 2, 4]


def test_neighbor_array_padding():
    A = make_path(3).neighbor_array
    assert A.tolist() == [[1, -1], [0, 2], [1, -1]]
