"""Almost-regular and balanced bipartite subgraph extraction.

The guarantees that are asymptotic (size and edge-count targets of the
extraction) are reported as met/unmet flags on the certificate rather than
enforced, since no finite threshold is available.  Everything checkable is
checked deterministically: the randomized bipartition retries until an
attempt passes all four verification gates, so a returned certificate never
rests on a probabilistic argument.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, RetriesExhausted
from .graphs import BipartiteGraph, Graph

__all__ = [
    "RegularizationCert",
    "verify_almost_regular",
    "almost_regular_target_k",
    "almost_regular_subgraph",
    "balanced_bipartition",
    "DEFAULT_MAX_RETRIES",
]

DEFAULT_MAX_RETRIES = 64


@dataclass(frozen=True)
class RegularizationCert:
    """Certificate for an extracted subgraph.

    ``parent_map`` sends subgraph vertex indices to input indices; for a
    bipartite subgraph the indices follow the as_graph layout (A block,
    then B block).  ``k_achieved`` is the exact max/min degree ratio.
    ``size_target_met`` / ``edge_target_met`` report whether the
    asymptotic extraction targets happen to hold at this size; they are
    informational, not correctness gates.
    """

    subgraph: Graph | BipartiteGraph
    parent_map: tuple[int, ...]
    m: int
    k_achieved: Fraction
    edge_bound_target: float | None = None
    alpha: float | None = None
    c_input: float | None = None
    size_target: float | None = None
    size_target_met: bool | None = None
    edge_target_met: bool | None = None
    attempts: int | None = None
    seed: int | None = None


def _degree_extremes(g: Graph | BipartiteGraph) -> tuple[int, int]:
    if isinstance(g, BipartiteGraph):
        degs = [len(ns) for ns in g.adj_a] + [len(ns) for ns in g.adj_b]
    else:
        degs = [len(ns) for ns in g.adj]
    if not degs:
        raise InputError("graph has no vertices")
    return min(degs), max(degs)


def verify_almost_regular(g: Graph | BipartiteGraph, k) -> bool:
    """True iff max degree <= k * min degree.

    An isolated vertex makes the graph fail for every finite k: the ratio
    is taken over all vertices and a zero minimum degree is never allowed.
    """
    dmin, dmax = _degree_extremes(g)
    if dmin == 0:
        return False
    return Fraction(dmax) <= Fraction(k) * dmin


def almost_regular_target_k(alpha: float) -> float:
    """The ratio bound the extraction promises: 20 * 2^(1 + 1/alpha^2)."""
    if not 0 < alpha < 1:
        raise InputError("alpha must lie in (0, 1)")
    return 20.0 * 2.0 ** (1.0 + 1.0 / alpha**2)


def _ratio(g: Graph) -> Fraction:
    dmin, dmax = _degree_extremes(g)
    if dmin == 0:
        raise InputError("ratio undefined with isolated vertices")
    return Fraction(dmax, dmin)


def _peel_low_degree(g: Graph, parent: tuple[int, ...]) -> tuple[Graph, tuple[int, ...]]:
    """Repeatedly drop vertices of degree below edges/vertices (half the
    average degree) until stable.  Never empties a graph with edges: if every
    vertex were below the threshold the degree sum would be < edges."""
    cur, cur_parent = g, parent
    while cur.vertex_count > 0 and cur.edge_count > 0:
        thr = Fraction(cur.edge_count, cur.vertex_count)
        keep = [v for v in range(cur.vertex_count) if cur.degree(v) >= thr]
        if len(keep) == cur.vertex_count:
            break
        sub, idx = cur.induced(keep)
        cur_parent = tuple(cur_parent[i] for i in idx)
        cur = sub
    return cur, cur_parent


def _densest_bucket(g: Graph, parent: tuple[int, ...]) -> tuple[Graph, tuple[int, ...]]:
    """Induce on the dyadic degree bucket [2^i, 2^(i+1)) that retains the
    most edges."""
    buckets: dict[int, list[int]] = {}
    for v in range(g.vertex_count):
        d = g.degree(v)
        if d == 0:
            continue
        buckets.setdefault(d.bit_length() - 1, []).append(v)
    best_sub: Graph | None = None
    best_idx: tuple[int, ...] = ()
    best_edges = -1
    for i in sorted(buckets):
        sub, idx = g.induced(buckets[i])
        if sub.edge_count > best_edges:
            best_sub, best_idx, best_edges = sub, idx, sub.edge_count
    assert best_sub is not None
    return best_sub, tuple(parent[i] for i in best_idx)


def _single_edge_fallback(g: Graph, parent: tuple[int, ...]) -> tuple[Graph, tuple[int, ...]]:
    u, v = next(g.edges())
    sub, idx = g.induced([u, v])
    return sub, tuple(parent[i] for i in idx)


def _extract(g: Graph, parent: tuple[int, ...], k_target: float) -> tuple[Graph, tuple[int, ...]]:
    """Dyadic bucket, peel, and recurse until the ratio bound holds.

    Terminates: a violated bound forces degrees spanning more than a factor
    of 2, hence at least two nonempty buckets, hence a strictly smaller
    subproblem.  A bucket whose induced subgraph has no edges falls back to
    a single edge of the original graph (ratio 1)."""
    work, work_parent = _peel_low_degree(g, parent)
    while True:
        if work.edge_count == 0:
            return _single_edge_fallback(g, parent)
        if verify_almost_regular(work, k_target):
            return work, work_parent
        bucket, bucket_parent = _densest_bucket(work, work_parent)
        if bucket.edge_count == 0 or bucket.vertex_count == work.vertex_count:
            return _single_edge_fallback(g, parent)
        work, work_parent = _peel_low_degree(bucket, bucket_parent)


def almost_regular_subgraph(
    g: Graph, alpha: float, require_dense: bool = True
) -> RegularizationCert:
    """Extract a subgraph whose degree ratio is at most 20 * 2^(1 + 1/a^2).

    Requires e(g) >= n^(1+alpha) (the normalization making C >= 1) unless
    ``require_dense=False``, which runs the same extraction on sparser
    inputs; the certificate then simply records c_input < 1.  The size and
    edge targets m >= n^(alpha(1-alpha)/(2(1+alpha))) and
    e' >= (2C/5) m^(1+alpha) are evaluated and flagged, never enforced.
    """
    if not 0 < alpha < 1:
        raise InputError("alpha must lie in (0, 1)")
    n = g.vertex_count
    if n == 0 or g.edge_count == 0:
        raise InputError("extraction needs at least one edge")
    c_input = g.edge_count / n ** (1 + alpha)
    if require_dense and c_input < 1:
        raise InputError(
            f"input too sparse: C = e/n^(1+alpha) = {c_input:.6g} < 1"
        )
    k_target = almost_regular_target_k(alpha)
    sub, parent = _extract(g, tuple(range(n)), k_target)
    assert verify_almost_regular(sub, k_target)
    m = sub.vertex_count
    size_target = n ** (alpha * (1 - alpha) / (2 * (1 + alpha)))
    edge_target = (2 * c_input / 5) * m ** (1 + alpha)
    return RegularizationCert(
        subgraph=sub,
        parent_map=parent,
        m=m,
        k_achieved=_ratio(sub),
        edge_bound_target=edge_target,
        alpha=alpha,
        c_input=c_input,
        size_target=size_target,
        size_target_met=m >= size_target,
        edge_target_met=sub.edge_count >= edge_target,
    )


def _retention_ok(old_deg: int, new_deg: int) -> bool:
    # integer window [d/4, 3d/4]; for d = 1 the window contains no integer,
    # so the lone edge must survive (an isolated vertex would be fatal to
    # the almost-regularity of the output anyway)
    if old_deg == 1:
        return new_deg == 1
    return old_deg <= 4 * new_deg <= 3 * old_deg


def balanced_bipartition(
    g: Graph,
    k_in,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> RegularizationCert:
    """Split an almost-regular graph into a verified balanced bipartite part.

    Each attempt assigns vertices to side A by independent fair coin flips,
    keeps only the crossing edges, and is accepted iff all four checks hold:

    1. balance: |A| within [m/3, 2m/3];
    2. degree retention: every vertex keeps between 1/4 and 3/4 of its
       former degree (integer window; degree-1 vertices keep their edge);
    3. edge survival: at least a quarter of the edges cross;
    4. the result is 3*k_in-almost-regular.

    The checks are verified deterministically per attempt, never trusted to
    the concentration bounds that motivate them.  Raises RetriesExhausted
    with the best attempt's diagnostics if no attempt passes.
    """
    if g.vertex_count < 2:
        raise InputError("need at least two vertices to bipartition")
    if not verify_almost_regular(g, k_in):
        raise InputError(f"input is not {k_in}-almost-regular with positive degrees")
    if max_retries < 1:
        raise InputError("max_retries must be >= 1")

    m = g.vertex_count
    rng = random.Random(seed)
    best: dict | None = None
    for attempt in range(1, max_retries + 1):
        side_a = [v for v in range(m) if rng.getrandbits(1)]
        a_mask = 0
        for v in side_a:
            a_mask |= 1 << v
        checks_failed: list[str] = []
        if not (3 * len(side_a) >= m and 3 * len(side_a) <= 2 * m):
            checks_failed.append("balance")
        kept_deg = [
            (g.masks[v] & (a_mask if not (a_mask >> v & 1) else ~a_mask)).bit_count()
            for v in range(m)
        ]
        if not all(_retention_ok(g.degree(v), kept_deg[v]) for v in range(m)):
            checks_failed.append("degree-retention")
        kept_edges = sum(
            1 for u, v in g.edges() if (a_mask >> u & 1) != (a_mask >> v & 1)
        )
        if 4 * kept_edges < g.edge_count:
            checks_failed.append("edge-survival")
        if not checks_failed:
            a_list = sorted(side_a)
            b_list = [v for v in range(m) if not (a_mask >> v & 1)]
            a_pos = {v: i for i, v in enumerate(a_list)}
            b_pos = {v: i for i, v in enumerate(b_list)}
            edges = []
            for u, v in g.edges():
                if (a_mask >> u & 1) and not (a_mask >> v & 1):
                    edges.append((a_pos[u], b_pos[v]))
                elif (a_mask >> v & 1) and not (a_mask >> u & 1):
                    edges.append((a_pos[v], b_pos[u]))
            sub = BipartiteGraph(len(a_list), len(b_list), edges)
            if not verify_almost_regular(sub, 3 * Fraction(k_in)):
                checks_failed.append("almost-regularity")
            else:
                dmin, dmax = _degree_extremes(sub)
                return RegularizationCert(
                    subgraph=sub,
                    parent_map=tuple(a_list + b_list),
                    m=m,
                    k_achieved=Fraction(dmax, dmin),
                    attempts=attempt,
                    seed=seed,
                )
        if best is None or len(checks_failed) < len(best["checks_failed"]):
            best = {
                "attempt": attempt,
                "checks_failed": checks_failed,
                "side_a_size": len(side_a),
                "kept_edges": kept_edges,
            }
    assert best is not None
    raise RetriesExhausted(
        f"no attempt passed after {max_retries} tries; "
        f"best attempt failed checks: {', '.join(best['checks_failed'])}",
        best_attempt=best,
    )
