"""Homomorphism and labelled-copy counting.

Conventions (stated per function and cross-checked in tests):

* "Hom" counts are ordered vertex maps; every pattern edge must land on a
  host edge and nothing else is constrained.
* "Labelled copy" counts are injective ordered maps.
* Oriented counts on bipartite hosts fix which pattern class lands on which
  side; the diagonal convention d(u, u) = deg(u) applies inside ordered
  pair sums only.

All accumulation is in Python's arbitrary-precision integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InputError, ResourceError
from .graphs import BipartiteGraph, Graph

__all__ = [
    "Pattern",
    "MAX_PATTERN_VERTICES",
    "hom_c4_oriented",
    "hom_star_oriented",
    "hom_generic",
    "contains_injective",
    "iter_injective_maps",
    "count_kst_labelled",
    "norming_check",
    "NormingCheck",
    "is_valid_embedding",
]

MAX_PATTERN_VERTICES = 16

NORMING_LOG_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Pattern:
    """A small pattern graph, optionally with a fixed proper bipartition.

    ``side_of[v]`` is 0 or 1.  By convention side 0 is the "anchor" side
    (e.g. the branch vertices of a subdivision) and side 1 the other.
    """

    graph: Graph
    side_of: tuple[int, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        g = self.graph
        if self.side_of is not None:
            if len(self.side_of) != g.vertex_count:
                raise InputError("side labelling length does not match vertex count")
            if any(s not in (0, 1) for s in self.side_of):
                raise InputError("side labels must be 0 or 1")
            for u, v in g.edges():
                if self.side_of[u] == self.side_of[v]:
                    raise InputError(f"side labelling not proper on edge ({u}, {v})")

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def side(self, label: int) -> tuple[int, ...]:
        if self.side_of is None:
            raise InputError("pattern has no bipartition labelling")
        return tuple(v for v in range(self.vertex_count) if self.side_of[v] == label)

    @classmethod
    def from_graph(cls, g: Graph, name: str | None = None) -> "Pattern":
        """Attach a 2-colouring if one exists; otherwise leave sides unset."""
        side = _two_colour(g)
        return cls(g, side, name)


def _two_colour(g: Graph) -> tuple[int, ...] | None:
    colour = [-1] * g.vertex_count
    for start in range(g.vertex_count):
        if colour[start] != -1:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if colour[v] == -1:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return None
    return tuple(colour)


def _as_pattern_graph(pattern: Pattern | Graph) -> Graph:
    return pattern.graph if isinstance(pattern, Pattern) else pattern


def hom_c4_oriented(g: BipartiteGraph) -> int:
    """Homomorphisms of the 4-cycle with one colour class fixed in A.

    Equals sum over a in A of sum over ordered pairs (u, v) in N(a)^2 of
    d*(u, v), with d*(u, u) = deg(u).  Regrouping by the B-side pair gives
    the closed form actually computed here:

        sum_{u != v in B} codeg(u, v)^2  +  sum_{u in B} deg(u)^2.
    """
    total = 0
    masks = g.b_masks
    nb = g.side_b_count
    for u in range(nb):
        mu = masks[u]
        total += mu.bit_count() ** 2
        for v in range(u + 1, nb):
            total += 2 * (mu & masks[v]).bit_count() ** 2
    return total


def hom_star_oriented(g: BipartiteGraph, centre_side: str, leaves: int) -> int:
    """Star homomorphisms with the centre on a fixed side: sum of deg^k.

    ``centre_side="B", leaves=2`` is the pair-in-A star count and
    ``centre_side="A", leaves=2`` the pair-in-B one.
    """
    if leaves < 1:
        raise InputError("leaves must be >= 1")
    if centre_side == "A":
        return sum(len(ns) ** leaves for ns in g.adj_a)
    if centre_side == "B":
        return sum(len(ns) ** leaves for ns in g.adj_b)
    raise InputError(f"centre_side must be 'A' or 'B', got {centre_side!r}")


def _search_order(pg: Graph) -> tuple[list[int], list[list[int]]]:
    """Vertex order for backtracking plus, per position, the earlier
    positions adjacent to it.  Greedy: start at a max-degree vertex, then
    always take the unplaced vertex with the most placed neighbours."""
    n = pg.vertex_count
    order: list[int] = []
    placed = [False] * n
    placed_deg = [0] * n
    for _ in range(n):
        best = -1
        for v in range(n):
            if placed[v]:
                continue
            if best == -1 or (placed_deg[v], pg.degree(v), -v) > (
                placed_deg[best],
                pg.degree(best),
                -best,
            ):
                best = v
        order.append(best)
        placed[best] = True
        for w in pg.adj[best]:
            placed_deg[w] += 1
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in pg.adj[v] if pos[w] < i] for i, v in enumerate(order)]
    return order, back


def hom_generic(pattern: Pattern | Graph, g: Graph, injective: bool = False) -> int:
    """Exact homomorphism count by backtracking with bitmask pruning.

    With ``injective=True`` counts labelled copies (injective maps) instead.
    The final pattern vertex is closed by a popcount rather than iterated.
    """
    pg = _as_pattern_graph(pattern)
    if pg.vertex_count > MAX_PATTERN_VERTICES:
        raise ResourceError(
            f"pattern has {pg.vertex_count} vertices; limit is {MAX_PATTERN_VERTICES}"
        )
    if pg.vertex_count == 0:
        return 1
    if g.vertex_count == 0:
        return 0
    if injective and pg.vertex_count > g.vertex_count:
        return 0
    order, back = _search_order(pg)
    k_last = len(order) - 1
    full = (1 << g.vertex_count) - 1
    masks = g.masks
    image = [0] * len(order)

    def rec(k: int, used: int) -> int:
        cands = full
        for e in back[k]:
            cands &= masks[image[e]]
        if injective:
            cands &= ~used
        if k == k_last:
            return cands.bit_count()
        total = 0
        m = cands
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            image[k] = v
            total += rec(k + 1, used | low)
        return total

    return rec(0, 0)


def contains_injective(pattern: Pattern | Graph, g: Graph) -> bool:
    """Does the host contain an injective copy of the pattern?  Early exit."""
    for _ in iter_injective_maps(pattern, g):
        return True
    return False


def iter_injective_maps(pattern: Pattern | Graph, g: Graph):
    """Yield every injective homomorphism as a tuple indexed by pattern vertex."""
    pg = _as_pattern_graph(pattern)
    if pg.vertex_count > MAX_PATTERN_VERTICES:
        raise ResourceError(
            f"pattern has {pg.vertex_count} vertices; limit is {MAX_PATTERN_VERTICES}"
        )
    if pg.vertex_count == 0 or pg.vertex_count > g.vertex_count:
        return
    order, back = _search_order(pg)
    full = (1 << g.vertex_count) - 1
    masks = g.masks
    n_pat = len(order)
    image = [0] * n_pat

    def rec(k: int, used: int):
        cands = full
        for e in back[k]:
            cands &= masks[image[e]]
        cands &= ~used
        m = cands
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            image[k] = v
            if k == n_pat - 1:
                out = [0] * n_pat
                for pos, pv in enumerate(order):
                    out[pv] = image[pos]
                yield tuple(out)
            else:
                yield from rec(k + 1, used | low)

    yield from rec(0, 0)


def count_kst_labelled(g: Graph, s: int, t: int) -> int:
    """Labelled complete-bipartite K_{s,t} copies with the two sides
    distinguished: sum over ordered s-tuples S of distinct vertices of
    t! * C(|N(S)|, t), where N(S) is the common neighbourhood.

    Equivalent to the injective ordered-map count; only vertices of positive
    degree can appear in S (zero contribution otherwise), so the enumeration
    skips isolated vertices.
    """
    if not 1 <= s <= t:
        raise InputError("need 1 <= s <= t")
    if s + t > g.vertex_count:
        raise InputError("pattern larger than host")
    alive = [v for v in range(g.vertex_count) if g.degree(v) >= 1]
    t_fact = math.factorial(t)
    s_fact = math.factorial(s)
    total = 0
    for combo in combinations(alive, s):
        mask = g.masks[combo[0]]
        for v in combo[1:]:
            mask &= g.masks[v]
            if not mask:
                break
        if not mask:
            continue
        total += t_fact * math.comb(mask.bit_count(), t)
    return s_fact * total


@dataclass(frozen=True)
class NormingCheck:
    """Both sides of the root-normalized homomorphism-density inequality."""

    lhs: float
    rhs: float
    holds: bool
    hom_l: int
    hom_kst: int


def _complete_bipartite_pattern(s: int, t: int) -> Graph:
    return Graph(s + t, [(i, s + j) for i in range(s) for j in range(t)])


def norming_check(g: Graph, s: int, t: int, l: Pattern | Graph) -> NormingCheck:
    """Check the weakly-norming inequality for K_{s,t} against a subgraph L:

        (Hom(L, G) / |G|^{|L|})^{1/e(L)} <= (Hom(K_{s,t}, G) / |G|^{s+t})^{1/st}

    The comparison is done on logarithms with absolute tolerance 1e-9,
    since the raw counts overflow fixed-width arithmetic quickly and the
    inequality is scale-free.
    """
    lg = _as_pattern_graph(l)
    if lg.edge_count == 0:
        raise InputError("L must have at least one edge")
    kst = _complete_bipartite_pattern(s, t)
    if not contains_injective(lg, kst):
        raise InputError(f"L is not a subgraph of K_{{{s},{t}}}")
    hom_l = hom_generic(lg, g)
    hom_kst = hom_generic(kst, g)
    n = g.vertex_count
    if hom_l == 0:
        lhs = 0.0
        rhs = 0.0 if hom_kst == 0 else (hom_kst / n ** (s + t)) ** (1 / (s * t))
        return NormingCheck(lhs, rhs, True, hom_l, hom_kst)
    # hom_l > 0 forces an edge in G, hence hom_kst >= 2 > 0.
    log_lhs = (math.log(hom_l) - lg.vertex_count * math.log(n)) / lg.edge_count
    log_rhs = (math.log(hom_kst) - (s + t) * math.log(n)) / (s * t)
    holds = log_lhs <= log_rhs + NORMING_LOG_TOLERANCE
    return NormingCheck(math.exp(log_lhs), math.exp(log_rhs), holds, hom_l, hom_kst)


def is_valid_embedding(
    pattern: Pattern | Graph,
    host: Graph,
    mapping: dict[int, int],
    require_injective: bool = True,
) -> tuple[bool, str]:
    """Independent embedding checker: totality, range, edges, injectivity.

    Knows nothing of how the mapping was produced; used to certify every
    success of the embedding pipelines.
    """
    pg = _as_pattern_graph(pattern)
    for v in range(pg.vertex_count):
        if v not in mapping:
            return False, f"pattern vertex {v} unmapped"
        if not 0 <= mapping[v] < host.vertex_count:
            return False, f"image {mapping[v]} of {v} out of range"
    if require_injective and len(set(mapping.values())) != pg.vertex_count:
        return False, "mapping not injective"
    for u, v in pg.edges():
        if not host.has_edge(mapping[u], mapping[v]):
            return False, f"pattern edge ({u}, {v}) not preserved"
    return True, "ok"
