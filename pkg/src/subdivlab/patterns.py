"""Pattern family constructors and exact isomorphism checking.

Covers k-subdivisions of multigraphs, hypergraph incidence subdivisions, the
named families (complete, complete bipartite, complete uniform and
complete multipartite hypergraphs), a few concrete generators (cycles, the
3-cube, the Fano plane and its incidence graph), and a canonical-form
isomorphism test used by the identity and regression suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InputError, ResourceError
from .graphs import BipartiteGraph, Graph
from .homcount import Pattern

__all__ = [
    "Multigraph",
    "Hypergraph",
    "subdivide_k",
    "incidence_subdivision",
    "complete_graph",
    "complete_bipartite_graph",
    "complete_uniform_hypergraph",
    "complete_r_partite_hypergraph",
    "cycle_graph",
    "cube_graph",
    "fano_plane",
    "heawood_graph",
    "complete_bipartite_minus_matching",
    "pattern_h_t",
    "pattern_h_st",
    "cycle_pattern",
    "parse_pattern_name",
    "canonical_form",
    "iso_check",
    "automorphism_count",
]

ISO_VERTEX_LIMIT = 64


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph: parallel edges allowed, kept in input order."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for e in self.edges:
            u, v = e
            if u == v:
                raise InputError(f"loop {e!r} not allowed")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputError(f"edge {e!r} out of range")
            norm.append((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    def has_parallel_edges(self) -> bool:
        return len(set(self.edges)) < len(self.edges)

    @classmethod
    def from_graph(cls, g: Graph) -> "Multigraph":
        return cls(g.vertex_count, tuple(g.edges()))


@dataclass(frozen=True)
class Hypergraph:
    """r-uniform hypergraph; edges are stored sorted and deduplicated."""

    vertex_count: int
    uniformity: int
    edges: tuple[frozenset, ...]

    def __post_init__(self):
        r = self.uniformity
        if r < 1:
            raise InputError("uniformity must be >= 1")
        seen = set()
        norm = []
        for e in self.edges:
            fs = frozenset(e)
            if len(fs) != r:
                raise InputError(f"edge {sorted(e)} is not {r}-uniform")
            for v in fs:
                if not 0 <= v < self.vertex_count:
                    raise InputError(f"vertex {v} out of range in edge {sorted(e)}")
            if fs in seen:
                continue
            seen.add(fs)
            norm.append(fs)
        norm.sort(key=sorted)
        object.__setattr__(self, "edges", tuple(norm))


def subdivide_k(h: Multigraph | Graph, k: int) -> Graph:
    """Replace every edge by an internally disjoint path of length k + 1.

    Vertex layout: original vertices keep indices 0..v(h)-1; the k inner
    vertices of edge number e (in edge-list order) occupy
    v(h) + e*k .. v(h) + e*k + k - 1, walking from the lower endpoint.
    k = 0 returns the underlying simple graph and rejects parallel edges,
    which would otherwise collapse into a multigraph.
    """
    if isinstance(h, Graph):
        h = Multigraph.from_graph(h)
    if k < 0:
        raise InputError("k must be nonnegative")
    if k == 0:
        if h.has_parallel_edges():
            raise InputError("k = 0 with parallel edges would produce a multigraph")
        return Graph(h.vertex_count, h.edges)
    n = h.vertex_count + k * len(h.edges)
    edges = []
    for idx, (u, v) in enumerate(h.edges):
        inner = [h.vertex_count + idx * k + i for i in range(k)]
        path = [u, *inner, v]
        edges.extend(zip(path, path[1:]))
    return Graph(n, edges)


def incidence_subdivision(h: Hypergraph) -> BipartiteGraph:
    """Vertex-edge incidence bipartite graph: A = V(H), B = E(H)."""
    edges = []
    for j, e in enumerate(h.edges):
        for v in sorted(e):
            edges.append((v, j))
    return BipartiteGraph(h.vertex_count, len(h.edges), edges)


def complete_graph(t: int) -> Graph:
    if t < 1:
        raise InputError("t must be >= 1")
    return Graph(t, [(i, j) for i in range(t) for j in range(i + 1, t)])


def complete_bipartite_graph(s: int, t: int) -> Graph:
    if s < 1 or t < 1:
        raise InputError("sides must be >= 1")
    return Graph(s + t, [(i, s + j) for i in range(s) for j in range(t)])


def complete_uniform_hypergraph(t: int, r: int) -> Hypergraph:
    """K_t^(r): all r-subsets of t vertices."""
    if r < 1 or t < r:
        raise InputError("need t >= r >= 1")
    from itertools import combinations

    return Hypergraph(t, r, tuple(frozenset(c) for c in combinations(range(t), r)))


def complete_r_partite_hypergraph(t: int, r: int) -> Hypergraph:
    """r-partite r-uniform K_{t,...,t}: classes of size t, edges are transversals."""
    if t < 1 or r < 1:
        raise InputError("need t >= 1 and r >= 1")
    classes = [range(i * t, (i + 1) * t) for i in range(r)]
    edges = tuple(frozenset(tr) for tr in product(*classes))
    return Hypergraph(r * t, r, edges)


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise InputError("cycles need length >= 3")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def cube_graph() -> Graph:
    """The 3-cube Q3 (vertices are 3-bit strings, edges flip one bit)."""
    edges = []
    for v in range(8):
        for bit in range(3):
            w = v ^ (1 << bit)
            if v < w:
                edges.append((v, w))
    return Graph(8, edges)


def fano_plane() -> Hypergraph:
    """The 7-point projective plane via the difference set {0, 1, 3} mod 7."""
    lines = tuple(frozenset({i, (i + 1) % 7, (i + 3) % 7}) for i in range(7))
    return Hypergraph(7, 3, lines)


def heawood_graph() -> BipartiteGraph:
    """Point-line incidence graph of the Fano plane: 3-regular, girth 6."""
    return incidence_subdivision(fano_plane())


def complete_bipartite_minus_matching(m: int) -> BipartiteGraph:
    """K_{m,m} with the perfect matching {(i, i)} removed."""
    if m < 1:
        raise InputError("m must be >= 1")
    return BipartiteGraph(
        m, m, [(i, j) for i in range(m) for j in range(m) if i != j]
    )


def pattern_h_t(t: int) -> Pattern:
    """The subdivision of K_t as a bipartite pattern.

    Side 0 holds the t branch vertices, side 1 the C(t, 2) subdividing
    vertices (one per original edge).
    """
    if t < 3:
        raise InputError("need t >= 3")
    g = subdivide_k(complete_graph(t), 1)
    side = tuple(0 if v < t else 1 for v in range(g.vertex_count))
    return Pattern(g, side, name=f"H_{t}")


def pattern_h_st(s: int, t: int) -> Pattern:
    """The subdivision of K_{s,t}; side 0 holds the branch vertices."""
    g = subdivide_k(complete_bipartite_graph(s, t), 1)
    side = tuple(0 if v < s + t else 1 for v in range(g.vertex_count))
    return Pattern(g, side, name=f"H_{s},{t}")


def cycle_pattern(k: int) -> Pattern:
    """An even cycle as a bipartite pattern with alternating sides."""
    if k % 2 != 0:
        raise InputError("only even cycles are bipartite")
    g = cycle_graph(k)
    side = tuple(v % 2 for v in range(k))
    return Pattern(g, side, name=f"C{k}")


def parse_pattern_name(name: str) -> Graph | Hypergraph:
    """Pattern grammar used by the CLI.

    Graphs: ``Kt:3``, ``Kst:2,4``, ``cycle:6`` (alias ``C6``), ``cube``,
    ``heawood`` (as a plain graph), ``edge``.
    Hypergraphs: ``KtU:4,3`` (complete uniform), ``Krt:2,3`` (complete
    r-partite r-uniform, arguments t,r).
    """
    raw = name.strip()
    low = raw.lower()
    head, _, arg = low.partition(":")
    try:
        if head == "kt":
            return complete_graph(int(arg))
        if head == "kst":
            s, t = (int(x) for x in arg.split(","))
            return complete_bipartite_graph(s, t)
        if head == "cycle":
            return cycle_graph(int(arg))
        if head == "ktu":
            t, r = (int(x) for x in arg.split(","))
            return complete_uniform_hypergraph(t, r)
        if head == "krt":
            t, r = (int(x) for x in arg.split(","))
            return complete_r_partite_hypergraph(t, r)
        if low == "cube":
            return cube_graph()
        if low == "heawood":
            return heawood_graph().as_graph()
        if low == "edge":
            return Graph(2, [(0, 1)])
        if low.startswith("c") and low[1:].isdigit():
            return cycle_graph(int(low[1:]))
    except (ValueError, IndexError) as exc:
        raise InputError(f"cannot parse pattern name {name!r}") from exc
    raise InputError(f"unknown pattern name {name!r}")


# ---------------------------------------------------------------------------
# Canonical forms, isomorphism, automorphisms
# ---------------------------------------------------------------------------


def _refine_colours(g: Graph, colours: list[int]) -> list[int]:
    """1-dimensional colour refinement to a stable partition."""
    n = g.vertex_count
    while True:
        sigs = [
            (colours[v], tuple(sorted(colours[w] for w in g.adj[v])))
            for v in range(n)
        ]
        remap: dict[tuple, int] = {}
        for sig in sorted(set(sigs)):
            remap[sig] = len(remap)
        new = [remap[sigs[v]] for v in range(n)]
        if new == colours:
            return colours
        colours = new


def canonical_form(g: Graph) -> tuple:
    """A complete isomorphism invariant: the lexicographically smallest
    adjacency encoding over all vertex orderings compatible with the refined
    colouring.  Exponential in the worst case but fast on the small graphs
    this package enumerates, because refinement usually leaves tiny cells."""
    n = g.vertex_count
    if n > ISO_VERTEX_LIMIT:
        raise ResourceError(f"canonical form limited to {ISO_VERTEX_LIMIT} vertices")
    if n == 0:
        return (0,)
    colours = _refine_colours(g, [0] * n)
    by_colour: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        by_colour.setdefault(c, []).append(v)
    cells = [sorted(by_colour[c]) for c in sorted(by_colour)]

    order: list[int] = []
    codes: list[int] = []
    pos = [-1] * n
    best: tuple | None = None

    def _prefix_beaten() -> bool:
        # True when the current code prefix is already lexicographically
        # larger than the best complete encoding, so the branch is hopeless.
        if best is None:
            return False
        for i, c in enumerate(codes):
            if c < best[i]:
                return False
            if c > best[i]:
                return True
        return False

    def search(cells_left: list[list[int]]):
        nonlocal best
        if not cells_left:
            enc = tuple(codes)
            if best is None or enc < best:
                best = enc
            return
        cell = cells_left[0]
        k = len(order)
        for v in cell:
            order.append(v)
            pos[v] = k
            codes.append(_row_code(g, order, pos, v))
            if not _prefix_beaten():
                rest = [w for w in cell if w != v]
                search(([rest] if rest else []) + cells_left[1:])
            codes.pop()
            order.pop()
            pos[v] = -1

    search(cells)
    assert best is not None
    return (n,) + best


def _row_code(g: Graph, order: list[int], pos: list[int], v: int) -> int:
    """Adjacency of v to the already-ordered vertices, as a bitmask."""
    code = 0
    for w in g.adj[v]:
        p = pos[w]
        if p >= 0:
            code |= 1 << p
    return code


def iso_check(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test via canonical forms (<= 64 vertices each)."""
    if g1.vertex_count > ISO_VERTEX_LIMIT or g2.vertex_count > ISO_VERTEX_LIMIT:
        raise ResourceError(f"iso_check limited to {ISO_VERTEX_LIMIT} vertices")
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return canonical_form(g1) == canonical_form(g2)


def automorphism_count(g: Graph) -> int:
    """Number of adjacency-preserving permutations, by refined backtracking."""
    n = g.vertex_count
    if n > ISO_VERTEX_LIMIT:
        raise ResourceError(f"automorphism_count limited to {ISO_VERTEX_LIMIT} vertices")
    if n == 0:
        return 1
    colours = _refine_colours(g, [0] * n)
    image = [-1] * n
    used = [False] * n
    count = 0

    def rec(v: int):
        nonlocal count
        if v == n:
            count += 1
            return
        for w in range(n):
            if used[w] or colours[w] != colours[v]:
                continue
            ok = True
            for u in range(v):
                if g.has_edge(u, v) != g.has_edge(image[u], w):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
                image[v] = -1

    rec(0)
    return count
