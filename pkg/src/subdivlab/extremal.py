"""Desk-scale extremal verification lab.

Exact extremal numbers by isomorphism-free enumeration, probabilistic
deletion-method lower-bound constructions with full verification, log-log
exponent fitting, and the branch/subdivider homomorphism census used to
separate degenerate from non-degenerate subdivision copies.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, ResourceError
from .graphs import BipartiteGraph, Graph
from .homcount import Pattern, contains_injective, iter_injective_maps
from .patterns import canonical_form
from .randgraphs import random_graph

__all__ = [
    "ExtremalReport",
    "extremal_exact",
    "DeletionResult",
    "deletion_gamma",
    "deletion_lower_bound",
    "FitResult",
    "scaling_fit",
    "ClassifyResult",
    "classify_subdivision_homs",
]

EXACT_VERTEX_GATE_LARGE_PATTERN = 10
EXACT_VERTEX_GATE = 12
DEFAULT_EMBEDDING_BUDGET = 2_000_000.0
DEFAULT_CLASSIFY_BUDGET = 5_000_000


def _pattern_graph(pattern: Pattern | Graph) -> Graph:
    return pattern.graph if isinstance(pattern, Pattern) else pattern


@dataclass(frozen=True)
class ExtremalReport:
    """Exact result: the witness is re-verified pattern-free on return."""

    n: int
    pattern_id: str
    max_edges: int
    witness: Graph
    graphs_examined: int
    elapsed: float


def extremal_exact(n: int, pattern: Pattern | Graph, pattern_id: str | None = None) -> ExtremalReport:
    """Largest edge count of an n-vertex graph with no injective copy of the
    pattern, by levelwise generation of pattern-free isomorphism classes.

    Each level extends every class by one new vertex over all
    neighbourhoods, discards graphs containing the pattern (containment is
    monotone under edge addition), deduplicates by canonical form, and
    prunes classes that cannot beat the clique-on-(p-1)-vertices baseline.
    """
    pg = _pattern_graph(pattern)
    if pg.edge_count == 0:
        raise InputError("pattern needs at least one edge")
    if n < 0:
        raise InputError("n must be nonnegative")
    gate = EXACT_VERTEX_GATE_LARGE_PATTERN if pg.vertex_count >= 6 else EXACT_VERTEX_GATE
    if n > gate:
        raise ResourceError(
            f"exhaustive search gated at n = {gate} for this pattern size; "
            "use deletion_lower_bound for a sampled lower bound instead"
        )
    if pattern_id is None:
        pattern_id = pattern.name if isinstance(pattern, Pattern) and pattern.name else "pattern"
    start = time.perf_counter()
    baseline = math.comb(min(n, pg.vertex_count - 1), 2)
    level: list[Graph] = [Graph(0)]
    examined = 0
    for k in range(1, n + 1):
        nxt: dict[tuple, Graph] = {}
        slack = math.comb(n, 2) - math.comb(k, 2)
        for parent in level:
            base_edges = list(parent.edges())
            for mask in range(1 << (k - 1)):
                examined += 1
                new_edges = base_edges + [
                    (i, k - 1) for i in range(k - 1) if mask >> i & 1
                ]
                cand = Graph(k, new_edges)
                if cand.edge_count + slack < baseline:
                    continue
                if contains_injective(pg, cand):
                    continue
                key = canonical_form(cand)
                if key not in nxt:
                    nxt[key] = cand
        level = list(nxt.values())
    if not level:
        # only possible for n = 0 against a nonempty pattern
        witness = Graph(0)
        best_edges = 0
    else:
        witness = max(level, key=lambda h: h.edge_count)
        best_edges = witness.edge_count
    assert not contains_injective(pg, witness), "witness contains the pattern"
    return ExtremalReport(
        n=n,
        pattern_id=pattern_id,
        max_edges=best_edges,
        witness=witness,
        graphs_examined=examined,
        elapsed=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class DeletionResult:
    """A verified pattern-free graph sampled and pruned at the deletion rate."""

    n: int
    p: float
    gamma: float
    edges_before: int
    copies_found: int
    edges_after: int
    output: Graph
    seed: int


def deletion_gamma(pattern: Pattern | Graph) -> float:
    """Edge exponent of the deletion construction for a fixed pattern.

    First-moment optimization: with v vertices and e >= 2 edges, sampling at
    p = n^((2 - v)/(e - 1)) makes the expected number of copies a constant
    fraction of the expected edge count, so deleting one edge per copy keeps
    Theta(p n^2) = Theta(n^gamma) edges with

        gamma = (2e - v) / (e - 1).

    For the subdivision of K_t (v = t + C(t, 2), e = 2 C(t, 2)) this
    simplifies to 3/2 - (t - 3/2)/(t^2 - t - 1).
    """
    pg = _pattern_graph(pattern)
    v, e = pg.vertex_count, pg.edge_count
    if e < 2:
        raise InputError("pattern needs at least two edges")
    return (2 * e - v) / (e - 1)


def _copy_edge_sets(pg: Graph, host: Graph) -> set[frozenset]:
    copies: set[frozenset] = set()
    pat_edges = list(pg.edges())
    for image in iter_injective_maps(pg, host):
        edges = frozenset(
            (image[u], image[v]) if image[u] < image[v] else (image[v], image[u])
            for u, v in pat_edges
        )
        copies.add(edges)
    return copies


def deletion_lower_bound(
    n: int,
    pattern: Pattern | Graph,
    exponent_override: float | None = None,
    seed: int = 0,
    embedding_budget: float = DEFAULT_EMBEDDING_BUDGET,
) -> DeletionResult:
    """Sample G(n, p) at the deletion-optimal rate, delete one edge per copy
    of the pattern, and verify the result is pattern-free.

    Distinct copies are distinct edge sets (so the automorphism group of the
    pattern never multiple-counts); each copy loses its lexicographically
    smallest edge.  Raises ResourceError when the first-moment estimate of
    the number of embeddings exceeds the budget.
    """
    pg = _pattern_graph(pattern)
    if pg.edge_count < 2:
        raise InputError("pattern needs at least two edges")
    if n < 1:
        raise InputError("n must be positive")
    gamma = exponent_override if exponent_override is not None else deletion_gamma(pg)
    p = min(1.0, float(n) ** (gamma - 2.0))
    v, e = pg.vertex_count, pg.edge_count
    if v <= n:
        log_est = sum(math.log(n - i) for i in range(v)) + e * math.log(p) if p > 0 else -math.inf
        estimate = math.exp(log_est)
    else:
        estimate = 0.0
    if estimate > embedding_budget:
        raise ResourceError(
            f"estimated {estimate:.3g} embeddings exceeds budget {embedding_budget:g}"
        )
    g = random_graph(n, p, seed)
    copies = _copy_edge_sets(pg, g)
    doomed = {min(copy) for copy in copies}
    remaining = [edge for edge in g.edges() if edge not in doomed]
    output = Graph(n, remaining)
    assert not contains_injective(pg, output), "deletion left a pattern copy"
    return DeletionResult(
        n=n,
        p=p,
        gamma=gamma,
        edges_before=g.edge_count,
        copies_found=len(copies),
        edges_after=output.edge_count,
        output=output,
        seed=seed,
    )


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


def scaling_fit(points: list[tuple[int, int]]) -> FitResult:
    """Least-squares slope of log(edges) against log(n).

    Repeated n values are fine (sweeps run several seeds per size); at
    least two distinct sizes and three points are required, and every
    point needs positive coordinates for the logs to exist.
    """
    if len(points) < 3:
        raise InputError("need at least 3 data points")
    if len({n for n, _ in points}) < 2:
        raise InputError("degenerate regression: all points share one n")
    for n, edges in points:
        if n <= 0 or edges <= 0:
            raise InputError(f"point ({n}, {edges}) has a nonpositive coordinate")
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(edges) for _, edges in points]
    k = len(points)
    mean_x = sum(xs) / k
    mean_y = sum(ys) / k
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return FitResult(slope=slope, intercept=intercept, r_squared=r_squared)


@dataclass(frozen=True)
class ClassifyResult:
    total: int
    nondegenerate: int
    degenerate: int


def classify_subdivision_homs(
    g: BipartiteGraph, t: int, budget: int = DEFAULT_CLASSIFY_BUDGET
) -> ClassifyResult:
    """Census of K_t-subdivision maps with the t branch vertices distinct in
    A and every subdivider on a common B-neighbour of its pair.

    ``total`` counts all such maps (subdividers may collide); a map is
    non-degenerate when the C(t, 2) subdividers are pairwise distinct, which
    is counted per branch tuple as the number of systems of distinct
    representatives of the pair neighbourhoods.
    """
    if t < 2:
        raise InputError("need t >= 2")
    na = g.side_a_count
    if na < t:
        return ClassifyResult(0, 0, 0)
    pairs = list(combinations(range(t), 2))
    nodes = 0

    def distinct_count(masks: list[int]) -> int:
        nonlocal nodes
        order = sorted(range(len(masks)), key=lambda i: masks[i].bit_count())

        def rec(i: int, used: int) -> int:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise ResourceError(f"classification exceeded budget {budget}")
            if i == len(order):
                return 1
            total = 0
            m = masks[order[i]] & ~used
            while m:
                low = m & -m
                m ^= low
                total += rec(i + 1, used | low)
            return total

        return rec(0, 0)

    total = 0
    nondeg = 0
    branch = [0] * t

    def rec_branch(pos: int, used: int, prod: int):
        nonlocal total, nondeg, nodes
        nodes += 1
        if nodes > budget:
            raise ResourceError(f"classification exceeded budget {budget}")
        if pos == t:
            total += prod
            masks = [
                g.a_masks[branch[i]] & g.a_masks[branch[j]] for i, j in pairs
            ]
            nondeg += distinct_count(masks)
            return
        for a in range(na):
            if used >> a & 1:
                continue
            p = prod
            ok = True
            for q in range(pos):
                d = (g.a_masks[a] & g.a_masks[branch[q]]).bit_count()
                if d == 0:
                    ok = False
                    break
                p *= d
            if not ok:
                continue
            branch[pos] = a
            rec_branch(pos + 1, used | (1 << a), p)

    rec_branch(0, 0, 1)
    return ClassifyResult(total=total, nondegenerate=nondeg, degenerate=total - nondeg)
