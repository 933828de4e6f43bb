from fractions import Fraction

import pytest

from subdivlab._seeds import derive_seed
from subdivlab.errors import InputError, RetriesExhausted
from subdivlab.graphs import Graph
from subdivlab.patterns import complete_graph, cycle_graph
from subdivlab.randgraphs import random_graph
from subdivlab.regularize import (
    almost_regular_subgraph,
    almost_regular_target_k,
    balanced_bipartition,
    verify_almost_regular,
)


def c6_plus_chord() -> Graph:
    return Graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])


def test_verify_almost_regular_examples():
    assert verify_almost_regular(complete_graph(5), 1)
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert not verify_almost_regular(star, 3)
    assert verify_almost_regular(star, 4)
    assert verify_almost_regular(c6_plus_chord(), 2)
    assert not verify_almost_regular(c6_plus_chord(), Fraction(4, 3))


def test_verify_almost_regular_isolated_vertex_fails():
    g = Graph(3, [(0, 1)])
    assert not verify_almost_regular(g, 10**9)
    assert not verify_almost_regular(Graph(2), 5)


def test_complete_graph_is_its_own_extraction():
    # K_8 has 28 >= 8^(1+alpha) edges up to alpha = log_8(28) - 1 ~ 0.602
    for alpha in (0.3, 0.5, 0.6):
        cert = almost_regular_subgraph(complete_graph(8), alpha)
        assert cert.m == 8
        assert cert.k_achieved == 1
        assert cert.parent_map == tuple(range(8))
        assert cert.size_target_met and cert.edge_target_met


def test_sparse_input_rejected_with_c_message():
    edges = [(i, j) for i in range(50) for j in range(i + 1, 50)]
    big = Graph(1050, edges)
    with pytest.raises(InputError, match="C ="):
        almost_regular_subgraph(big, 0.5)


def test_dense_block_found_in_sparse_mode():
    # a clique drowned in isolated vertices: the extraction must find it
    edges = [(i, j) for i in range(50) for j in range(i + 1, 50)]
    big = Graph(1050, edges)
    cert = almost_regular_subgraph(big, 0.5, require_dense=False)
    assert cert.k_achieved == 1
    assert all(p < 50 for p in cert.parent_map)
    assert cert.m == 50
    assert cert.c_input < 1


def test_seeded_gnp_extraction_regression():
    g = random_graph(512, 512**-0.25, seed=3)
    cert = almost_regular_subgraph(g, 0.5)
    assert cert.c_input >= 1
    assert verify_almost_regular(cert.subgraph, almost_regular_target_k(0.5))
    # pinned from the first run: random degrees concentrate, whole graph kept
    assert cert.m == 512
    assert cert.k_achieved == Fraction(137, 72)
    assert cert.edge_target_met


def test_extraction_bound_holds_on_corpus():
    k = almost_regular_target_k(0.5)
    for seed in range(20):
        n = 40 + (seed % 4) * 20
        g = random_graph(n, 0.4, derive_seed(99, seed))
        if g.edge_count < n**1.5:
            continue
        cert = almost_regular_subgraph(g, 0.5)
        assert verify_almost_regular(cert.subgraph, k)


def test_parent_map_injective_and_edge_preserving():
    g = random_graph(60, 0.45, seed=12)
    cert = almost_regular_subgraph(g, 0.5)
    pm = cert.parent_map
    assert len(set(pm)) == len(pm)
    for u, v in cert.subgraph.edges():
        assert g.has_edge(pm[u], pm[v])


def test_bipartition_c4():
    cert = balanced_bipartition(cycle_graph(4), 1, seed=0)
    sub = cert.subgraph
    assert sub.side_a_count + sub.side_b_count == 4
    assert sub.edge_count >= 1
    assert verify_almost_regular(sub, 3)
    pm = cert.parent_map
    g = cycle_graph(4)
    for a, b in sub.edges():
        assert g.has_edge(pm[a], pm[sub.side_a_count + b])


def test_bipartition_single_edge_forced_split():
    cert = balanced_bipartition(Graph(2, [(0, 1)]), 1, seed=5)
    assert cert.subgraph.side_a_count == 1
    assert cert.subgraph.side_b_count == 1
    assert cert.subgraph.edge_count == 1


def test_bipartition_c6_deterministic_failure():
    # every bipartition cut of a 6-cycle has even size, but degree retention
    # demands each vertex keep exactly one of its two edges, i.e. a 3-edge
    # cut: impossible, so the run exhausts retries deterministically
    with pytest.raises(RetriesExhausted) as err:
        balanced_bipartition(cycle_graph(6), 1, seed=7)
    assert "degree-retention" in str(err.value)
    assert err.value.best_attempt["attempt"] >= 1


def test_bipartition_rejects_irregular_input():
    star = Graph(5, [(0, i) for i in range(1, 5)])
    with pytest.raises(InputError):
        balanced_bipartition(star, 2, seed=0)


def test_bipartition_seed_determinism():
    g = random_graph(128, 0.4, seed=21)
    first = balanced_bipartition(g, 2, seed=9)
    second = balanced_bipartition(g, 2, seed=9)
    assert first.parent_map == second.parent_map
    assert first.attempts == second.attempts
    assert first.subgraph == second.subgraph
