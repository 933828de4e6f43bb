"""Immutable graph containers and the codegree primitives.

Three container types cover everything downstream:

* ``Graph`` -- a simple undirected graph on dense 0-based indices.
* ``BipartiteGraph`` -- two vertex sides A and B with edges only across.
* ``WeightedGraph`` -- symmetric nonnegative integer pair weights; used for
  the codegree ("neighbourhood") graph on one side of a bipartite graph.

Adjacency is stored twice: sorted index tuples for iteration and Python-int
bitmasks for word-parallel intersection, because codegree queries sit in the
innermost loop of every counting routine.  All containers are immutable after
construction and safe to share.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import InputError

__all__ = [
    "Graph",
    "BipartiteGraph",
    "WeightedGraph",
    "build_bipartite",
    "codegree",
    "neighbourhood_graph",
]


def _mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Simple undirected graph: no loops, no parallel edges.

    Duplicate edges in the input are collapsed; a loop raises InputError.
    """

    __slots__ = ("vertex_count", "adj", "masks", "edge_count")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise InputError("vertex_count must be nonnegative")
        n = vertex_count
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {e!r} out of range for {n} vertices")
            if u == v:
                raise InputError(f"loop {e!r} not allowed")
            seen.add((u, v) if u < v else (v, u))
        neigh: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            neigh[u].append(v)
            neigh[v].append(u)
        object.__setattr__(self, "vertex_count", n)
        object.__setattr__(self, "adj", tuple(tuple(sorted(ns)) for ns in neigh))
        object.__setattr__(self, "masks", tuple(_mask_of(ns) for ns in neigh))
        object.__setattr__(self, "edge_count", len(seen))

    def __setattr__(self, *_):  # pragma: no cover - guard rail
        raise AttributeError("Graph is immutable")

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(ns) for ns in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.vertex_count):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph plus the map from new indices to parent indices."""
        keep = sorted(set(vertices))
        for v in keep:
            if not 0 <= v < self.vertex_count:
                raise InputError(f"vertex {v} out of range")
        pos = {v: i for i, v in enumerate(keep)}
        edges = [
            (pos[u], pos[v])
            for u, v in self.edges()
            if u in pos and v in pos
        ]
        return Graph(len(keep), edges), tuple(keep)

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, e={self.edge_count})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.vertex_count == other.vertex_count
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.adj))


class BipartiteGraph:
    """Bipartite graph on sides A and B; every edge crosses the bipartition."""

    __slots__ = (
        "side_a_count",
        "side_b_count",
        "adj_a",
        "adj_b",
        "a_masks",
        "b_masks",
        "edge_count",
    )

    def __init__(
        self,
        side_a_count: int,
        side_b_count: int,
        edges: Iterable[tuple[int, int]] = (),
    ):
        if side_a_count < 0 or side_b_count < 0:
            raise InputError("side sizes must be nonnegative")
        na, nb = side_a_count, side_b_count
        seen: set[tuple[int, int]] = set()
        for e in edges:
            a, b = e
            if not (0 <= a < na and 0 <= b < nb):
                raise InputError(
                    f"edge {e!r} out of range for sides of size {na} and {nb}"
                )
            seen.add((a, b))
        na_adj: list[list[int]] = [[] for _ in range(na)]
        nb_adj: list[list[int]] = [[] for _ in range(nb)]
        for a, b in seen:
            na_adj[a].append(b)
            nb_adj[b].append(a)
        object.__setattr__(self, "side_a_count", na)
        object.__setattr__(self, "side_b_count", nb)
        object.__setattr__(self, "adj_a", tuple(tuple(sorted(ns)) for ns in na_adj))
        object.__setattr__(self, "adj_b", tuple(tuple(sorted(ns)) for ns in nb_adj))
        object.__setattr__(self, "a_masks", tuple(_mask_of(ns) for ns in na_adj))
        object.__setattr__(self, "b_masks", tuple(_mask_of(ns) for ns in nb_adj))
        object.__setattr__(self, "edge_count", len(seen))

    def __setattr__(self, *_):  # pragma: no cover - guard rail
        raise AttributeError("BipartiteGraph is immutable")

    def degree_a(self, a: int) -> int:
        return len(self.adj_a[a])

    def degree_b(self, b: int) -> int:
        return len(self.adj_b[b])

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.a_masks[a] >> b & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for a in range(self.side_a_count):
            for b in self.adj_a[a]:
                yield (a, b)

    def codegree_a(self, u: int, v: int) -> int:
        """Number of common B-neighbours of two distinct A-vertices."""
        if u == v:
            raise InputError("codegree is undefined on the diagonal; ask for the degree instead")
        return (self.a_masks[u] & self.a_masks[v]).bit_count()

    def codegree_b(self, u: int, v: int) -> int:
        """Number of common A-neighbours of two distinct B-vertices."""
        if u == v:
            raise InputError("codegree is undefined on the diagonal; ask for the degree instead")
        return (self.b_masks[u] & self.b_masks[v]).bit_count()

    def swap_sides(self) -> "BipartiteGraph":
        return BipartiteGraph(
            self.side_b_count,
            self.side_a_count,
            [(b, a) for a, b in self.edges()],
        )

    def as_graph(self) -> Graph:
        """View as a plain Graph: A keeps indices 0..|A|-1, B is shifted by |A|."""
        na = self.side_a_count
        return Graph(
            na + self.side_b_count,
            [(a, na + b) for a, b in self.edges()],
        )

    def induced(
        self,
        a_keep: Iterable[int] | None = None,
        b_keep: Iterable[int] | None = None,
    ) -> tuple["BipartiteGraph", tuple[int, ...], tuple[int, ...]]:
        """Induced subgraph plus maps from new side indices to parent indices."""
        a_list = sorted(set(a_keep)) if a_keep is not None else list(range(self.side_a_count))
        b_list = sorted(set(b_keep)) if b_keep is not None else list(range(self.side_b_count))
        for a in a_list:
            if not 0 <= a < self.side_a_count:
                raise InputError(f"A-vertex {a} out of range")
        for b in b_list:
            if not 0 <= b < self.side_b_count:
                raise InputError(f"B-vertex {b} out of range")
        a_pos = {a: i for i, a in enumerate(a_list)}
        b_pos = {b: i for i, b in enumerate(b_list)}
        edges = [
            (a_pos[a], b_pos[b])
            for a, b in self.edges()
            if a in a_pos and b in b_pos
        ]
        return (
            BipartiteGraph(len(a_list), len(b_list), edges),
            tuple(a_list),
            tuple(b_list),
        )

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(a={self.side_a_count}, b={self.side_b_count}, "
            f"e={self.edge_count})"
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.side_a_count == other.side_a_count
            and self.side_b_count == other.side_b_count
            and self.adj_a == other.adj_a
        )

    def __hash__(self) -> int:
        return hash((self.side_a_count, self.side_b_count, self.adj_a))


class WeightedGraph:
    """Symmetric nonnegative integer pair weights; absent pairs weigh 0.

    No weight may sit on a diagonal pair (v, v).  Zero weights passed to the
    constructor are dropped so the stored support is exactly the positive
    pairs.
    """

    __slots__ = ("vertex_count", "_w")

    def __init__(self, vertex_count: int, weights: Mapping[tuple[int, int], int] | None = None):
        if vertex_count < 0:
            raise InputError("vertex_count must be nonnegative")
        store: dict[tuple[int, int], int] = {}
        for (u, v), w in (weights or {}).items():
            if u == v:
                raise InputError(f"weight on diagonal pair ({u}, {v}) not allowed")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputError(f"pair ({u}, {v}) out of range")
            if w < 0 or w != int(w):
                raise InputError(f"weight {w!r} on ({u}, {v}) must be a nonnegative integer")
            if w == 0:
                continue
            key = (u, v) if u < v else (v, u)
            prev = store.get(key)
            if prev is not None and prev != w:
                raise InputError(f"conflicting weights for pair {key}")
            store[key] = int(w)
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "_w", store)

    def __setattr__(self, *_):  # pragma: no cover - guard rail
        raise AttributeError("WeightedGraph is immutable")

    def weight(self, u: int, v: int) -> int:
        if u == v:
            raise InputError("no weight on diagonal pairs")
        key = (u, v) if u < v else (v, u)
        return self._w.get(key, 0)

    def pairs(self) -> Iterator[tuple[tuple[int, int], int]]:
        """Support pairs (u < v) with their positive weights, sorted."""
        for key in sorted(self._w):
            yield key, self._w[key]

    def support_size(self) -> int:
        return len(self._w)

    def total_weight(self) -> int:
        return sum(self._w.values())

    def weighted_degree(self, u: int) -> int:
        return sum(w for (a, b), w in self._w.items() if a == u or b == u)

    def restrict(self, vertices: Iterable[int]) -> tuple["WeightedGraph", tuple[int, ...]]:
        """Sub-weighted-graph on a vertex subset, with an index map back."""
        keep = sorted(set(vertices))
        for v in keep:
            if not 0 <= v < self.vertex_count:
                raise InputError(f"vertex {v} out of range")
        pos = {v: i for i, v in enumerate(keep)}
        sub = {
            (pos[u], pos[v]): w
            for (u, v), w in self._w.items()
            if u in pos and v in pos
        }
        return WeightedGraph(len(keep), sub), tuple(keep)

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.vertex_count}, support={len(self._w)})"


def build_bipartite(
    a_count: int, b_count: int, edges: Iterable[tuple[int, int]]
) -> BipartiteGraph:
    """Construct a bipartite graph; duplicate input edges are deduplicated."""
    return BipartiteGraph(a_count, b_count, edges)


def codegree(g: BipartiteGraph, u: int, v: int, side: str = "A") -> int:
    """Codegree of two distinct vertices on the given side ("A" or "B")."""
    if side == "A":
        return g.codegree_a(u, v)
    if side == "B":
        return g.codegree_b(u, v)
    raise InputError(f"side must be 'A' or 'B', got {side!r}")


def neighbourhood_graph(g: BipartiteGraph, side: str = "A") -> WeightedGraph:
    """Weighted graph on one side whose pair weights are the codegrees.

    Built by double counting: every vertex w of the other side contributes 1
    to each pair of its neighbours, so the total weight is
    sum over w of C(deg(w), 2).
    """
    if side == "A":
        n, other_adj = g.side_a_count, g.adj_b
    elif side == "B":
        n, other_adj = g.side_b_count, g.adj_a
    else:
        raise InputError(f"side must be 'A' or 'B', got {side!r}")
    weights: dict[tuple[int, int], int] = {}
    for ns in other_adj:
        for i in range(len(ns)):
            for j in range(i + 1, len(ns)):
                key = (ns[i], ns[j])
                weights[key] = weights.get(key, 0) + 1
    return WeightedGraph(n, weights)
