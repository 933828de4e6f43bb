"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from subdivlab._seeds import derive_seed
from subdivlab.graphs import BipartiteGraph, Graph, build_bipartite
from subdivlab.randgraphs import random_bipartite, random_graph


@pytest.fixture
def k22() -> BipartiteGraph:
    return build_bipartite(2, 2, [(a, b) for a in range(2) for b in range(2)])


@pytest.fixture
def k33() -> BipartiteGraph:
    return build_bipartite(3, 3, [(a, b) for a in range(3) for b in range(3)])


@pytest.fixture
def c6_bip() -> BipartiteGraph:
    """The 6-cycle as bipartite 3+3: a_i ~ b_i and a_i ~ b_(i+1 mod 3)."""
    return build_bipartite(
        3, 3, [(i, i) for i in range(3)] + [(i, (i + 1) % 3) for i in range(3)]
    )


@pytest.fixture
def c8_bip() -> BipartiteGraph:
    return build_bipartite(
        4, 4, [(i, i) for i in range(4)] + [(i, (i + 1) % 4) for i in range(4)]
    )


def bipartite_corpus(
    count: int, max_side: int, master_seed: int, min_side: int = 1
) -> list[BipartiteGraph]:
    """Deterministic corpus of random bipartite graphs with varying sizes
    and densities."""
    out = []
    densities = [0.15, 0.3, 0.5, 0.7, 0.9]
    for i in range(count):
        seed = derive_seed(master_seed, "corpus", i)
        na = min_side + seed % (max_side - min_side + 1)
        nb = min_side + (seed >> 8) % (max_side - min_side + 1)
        p = densities[(seed >> 16) % len(densities)]
        out.append(random_bipartite(na, nb, p, seed))
    return out


def graph_corpus(count: int, max_n: int, master_seed: int, min_n: int = 1) -> list[Graph]:
    out = []
    densities = [0.2, 0.35, 0.5, 0.7]
    for i in range(count):
        seed = derive_seed(master_seed, "gcorpus", i)
        n = min_n + seed % (max_n - min_n + 1)
        p = densities[(seed >> 16) % len(densities)]
        out.append(random_graph(n, p, seed))
    return out


@st.composite
def small_bipartite(draw, max_side: int = 5) -> BipartiteGraph:
    na = draw(st.integers(0, max_side))
    nb = draw(st.integers(0, max_side))
    if na == 0 or nb == 0:
        return BipartiteGraph(na, nb)
    edges = draw(
        st.lists(
            st.tuples(st.integers(0, na - 1), st.integers(0, nb - 1)),
            max_size=na * nb,
        )
    )
    return BipartiteGraph(na, nb, edges)


@st.composite
def small_graph(draw, max_n: int = 7) -> Graph:
    n = draw(st.integers(0, max_n))
    if n < 2:
        return Graph(n)
    edges = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda e: e[0] != e[1]
            ),
            max_size=n * n,
        )
    )
    return Graph(n, edges)
