import math

import pytest
from hypothesis import given

from conftest import small_bipartite
from oracles import brute_codegree
from subdivlab.errors import InputError
from subdivlab.formats import (
    format_bipartite,
    format_graph,
    parse_bipartite_text,
    parse_graph_text,
)
from subdivlab.graphs import (
    BipartiteGraph,
    Graph,
    WeightedGraph,
    build_bipartite,
    codegree,
    neighbourhood_graph,
)


def test_build_k22_all_degrees_two(k22):
    assert k22.side_a_count == k22.side_b_count == 2
    assert all(k22.degree_a(a) == 2 for a in range(2))
    assert all(k22.degree_b(b) == 2 for b in range(2))


def test_build_c6_all_degrees_two(c6_bip):
    assert c6_bip.edge_count == 6
    assert all(c6_bip.degree_a(a) == 2 for a in range(3))
    assert all(c6_bip.degree_b(b) == 2 for b in range(3))


def test_build_single_isolated_vertex():
    g = build_bipartite(1, 0, [])
    assert g.side_a_count == 1 and g.side_b_count == 0 and g.edge_count == 0


def test_build_deduplicates():
    g = build_bipartite(2, 2, [(0, 0), (0, 0), (1, 1)])
    assert g.edge_count == 2


def test_build_rejects_out_of_range_naming_edge():
    with pytest.raises(InputError, match=r"\(2, 0\)"):
        build_bipartite(2, 2, [(2, 0)])


def test_graph_rejects_loops():
    with pytest.raises(InputError):
        Graph(3, [(1, 1)])


def test_codegree_examples(k22, c6_bip):
    assert codegree(k22, 0, 1) == 2
    assert codegree(c6_bip, 0, 1) == 1
    isolated = build_bipartite(2, 3, [])
    assert codegree(isolated, 0, 1) == 0


def test_codegree_diagonal_rejected(k22):
    with pytest.raises(InputError):
        codegree(k22, 1, 1)


def test_neighbourhood_graph_k33(k33):
    w = neighbourhood_graph(k33, "A")
    assert dict(w.pairs()) == {(0, 1): 3, (0, 2): 3, (1, 2): 3}


def test_neighbourhood_graph_c6(c6_bip):
    w = neighbourhood_graph(c6_bip, "A")
    assert dict(w.pairs()) == {(0, 1): 1, (0, 2): 1, (1, 2): 1}


def test_neighbourhood_graph_edgeless():
    w = neighbourhood_graph(build_bipartite(4, 4, []), "A")
    assert w.total_weight() == 0


@given(small_bipartite())
def test_codegree_symmetry(g):
    for u in range(g.side_a_count):
        for v in range(u + 1, g.side_a_count):
            assert g.codegree_a(u, v) == g.codegree_a(v, u)
            assert g.codegree_a(u, v) == brute_codegree(g, "A", u, v)


@given(small_bipartite())
def test_neighbourhood_weight_double_counting(g):
    for side, other_degs in (
        ("A", [g.degree_b(b) for b in range(g.side_b_count)]),
        ("B", [g.degree_a(a) for a in range(g.side_a_count)]),
    ):
        w = neighbourhood_graph(g, side)
        assert w.total_weight() == sum(math.comb(d, 2) for d in other_degs)


@given(small_bipartite())
def test_bipartite_roundtrip(g):
    assert parse_bipartite_text(format_bipartite(g)) == g


def test_graph_roundtrip():
    g = Graph(5, [(0, 1), (1, 2), (3, 4), (0, 4)])
    assert parse_graph_text(format_graph(g)) == g


def test_format_ignores_comments():
    text = "# a comment\nbip 2 2\n0 0  # trailing\n\n1 1\n"
    g = parse_bipartite_text(text)
    assert g.edge_count == 2


def test_induced_bipartite_maps_back(k33):
    sub, a_map, b_map = k33.induced(a_keep=[0, 2], b_keep=[1])
    assert sub.side_a_count == 2 and sub.side_b_count == 1
    assert sub.edge_count == 2
    assert a_map == (0, 2) and b_map == (1,)


def test_induced_graph_parent_map():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    sub, parent = g.induced([1, 2, 3])
    assert parent == (1, 2, 3)
    assert set(sub.edges()) == {(0, 1), (1, 2)}


def test_as_graph_layout(k22):
    g = k22.as_graph()
    assert g.vertex_count == 4
    assert set(g.edges()) == {(0, 2), (0, 3), (1, 2), (1, 3)}


def test_weighted_graph_validation():
    with pytest.raises(InputError):
        WeightedGraph(3, {(1, 1): 2})
    with pytest.raises(InputError):
        WeightedGraph(2, {(0, 1): -1})
    w = WeightedGraph(3, {(2, 0): 5, (0, 1): 0})
    assert w.weight(0, 2) == 5
    assert w.weight(0, 1) == 0
    assert w.support_size() == 1


def test_weighted_restrict():
    w = WeightedGraph(4, {(0, 1): 1, (1, 2): 2, (2, 3): 3})
    sub, idx = w.restrict([1, 2, 3])
    assert idx == (1, 2, 3)
    assert dict(sub.pairs()) == {(0, 1): 2, (1, 2): 3}


def test_immutability(k22):
    with pytest.raises(AttributeError):
        k22.side_a_count = 5
