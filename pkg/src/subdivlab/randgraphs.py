"""Seeded Erdos-Renyi samplers.

numpy's PCG64 keeps sampling fast at a few thousand vertices and is stable
across platforms, so fixed seeds pin fixtures reliably.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .graphs import BipartiteGraph, Graph

__all__ = ["random_graph", "random_bipartite"]


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each of the C(n, 2) pairs is an edge independently."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability {p} outside [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    if n < 2:
        return Graph(n)
    iu, ju = np.triu_indices(n, k=1)
    hits = rng.random(iu.shape[0]) < p
    edges = list(zip(iu[hits].tolist(), ju[hits].tolist()))
    return Graph(n, edges)


def random_bipartite(na: int, nb: int, p: float, seed: int) -> BipartiteGraph:
    """Bipartite G(na, nb, p): each A-B pair is an edge independently."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"edge probability {p} outside [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    if na == 0 or nb == 0:
        return BipartiteGraph(na, nb)
    hits = rng.random((na, nb)) < p
    ai, bi = np.nonzero(hits)
    return BipartiteGraph(na, nb, list(zip(ai.tolist(), bi.tolist())))
