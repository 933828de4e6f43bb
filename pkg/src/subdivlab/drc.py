"""Dependent-random-choice embedding pipeline.

Staged as: pivot selection -> dyadic degree bucketing -> witness selection ->
non-bad clique search -> degeneracy-avoiding assignment.  The random choices
of the underlying argument are derandomized: the pivot maximizes its surplus
exactly, and the witness is the exact minimizer of the bad-pair fraction over
its bucket, which is at most the average the probabilistic argument uses.

Two desk-scale fallbacks keep the pipeline runnable on hosts far below the
regime where the averaging guarantees bite, both logged in the stage log:
if no pivot has nonnegative surplus the best-scoring vertex is used anyway,
and if no clique drawn from the witness neighbourhood admits a valid
assignment the candidate pool widens (witness neighbourhood, then the pivot
neighbourhood, then the whole side).  Success is always certified by an
independent checker, so the fallbacks can never produce a false positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError
from .graphs import BipartiteGraph
from .homcount import (
    Pattern,
    hom_c4_oriented,
    hom_star_oriented,
    is_valid_embedding,
)

__all__ = [
    "DrcParams",
    "PivotChoice",
    "DyadicSelection",
    "WitnessChoice",
    "Embedding",
    "FailureReport",
    "StageFailure",
    "auto_tune_m",
    "select_pivot",
    "dyadic_select",
    "select_witness",
    "clique_nonbad",
    "iter_nonbad_cliques",
    "embed_h",
    "drc_threshold_check",
    "ThresholdCheck",
]

CLIQUE_TRY_LIMIT = 256


@dataclass(frozen=True)
class DrcParams:
    """Tuning knobs for the pipeline.

    ``m`` is the surplus multiplier (the C log n slot); left unset it is
    auto-tuned from the host's homomorphism counts.  ``h`` defaults to the
    pattern order and feeds the default bad-pair threshold.
    ``witness_trials`` is kept for interface parity: the witness stage
    scans its whole bucket deterministically, which dominates any sampled
    variant, so the field is ignored.
    """

    m: int | None = None
    h: int | None = None
    bad_threshold: int | None = None
    witness_trials: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.m is not None and self.m < 1:
            raise InputError("m must be >= 1")
        if self.h is not None and self.h < 1:
            raise InputError("h must be >= 1")
        if self.bad_threshold is not None and self.bad_threshold < 1:
            raise InputError("bad_threshold must be >= 1")


@dataclass(frozen=True)
class PivotChoice:
    vertex: int
    surplus: int


@dataclass(frozen=True)
class DyadicSelection:
    buckets: tuple[tuple[int, ...], ...]
    j: int
    a_j: frozenset


@dataclass(frozen=True)
class WitnessChoice:
    vertex: int
    bad_fraction: Fraction
    neighbourhood_size: int


@dataclass
class Embedding:
    """A verified pattern copy.

    ``mapping`` sends pattern vertices to host indices in the as_graph
    layout (A keeps its indices, B is shifted by |A|).  ``stage_log`` is the
    ordered list of (stage name, quantities) the pipeline went through.
    """

    mapping: dict[int, int]
    injective: bool
    stage_log: list = field(default_factory=list)


@dataclass
class FailureReport:
    stage: str
    reason: str
    quantities: dict = field(default_factory=dict)
    stage_log: list = field(default_factory=list)


class StageFailure(Exception):
    """Internal: a pipeline stage cannot continue."""

    def __init__(self, stage: str, reason: str, quantities: dict | None = None):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason
        self.quantities = quantities or {}


def auto_tune_m(g: BipartiteGraph) -> int:
    """floor(Hom(C4) / (Hom*(K_{2,1}) + Hom*(K_{1,2}))), 0 on edgeless hosts."""
    denom = hom_star_oriented(g, "B", 2) + hom_star_oriented(g, "A", 2)
    if denom == 0:
        return 0
    return hom_c4_oriented(g) // denom


def _pivot_scores(g: BipartiteGraph, m: int) -> list[int]:
    """score(x) = sum over ordered pairs in N(x)^2 of d*(u, v)
    minus m * (sum of deg over N(x)) minus m * deg(x)^2.

    The pair sum is computed by regrouping over A: it equals
    sum over a in A of |N(a) cap N(x)|^2.
    """
    na, nb = g.side_a_count, g.side_b_count
    if na == 0:
        return []
    # int64 stays exact as long as na * nb^2 (the largest pair sum) fits
    if na * nb > 4096 and na * nb * nb < 2**62:
        mat = np.zeros((na, nb), dtype=np.int64)
        for a in range(na):
            for b in g.adj_a[a]:
                mat[a, b] = 1
        caps = mat @ mat.T
        pair_sums = (caps * caps).sum(axis=1)
        deg_b = mat.sum(axis=0)
        star_cost = mat @ deg_b
        deg_a = mat.sum(axis=1)
        scores = pair_sums - m * (star_cost + deg_a * deg_a)
        return [int(s) for s in scores]
    scores = []
    for x in range(na):
        mx = g.a_masks[x]
        pair_sum = 0
        for a in range(na):
            pair_sum += (g.a_masks[a] & mx).bit_count() ** 2
        star_cost = sum(g.degree_b(b) for b in g.adj_a[x])
        scores.append(pair_sum - m * (star_cost + g.degree_a(x) ** 2))
    return scores


def select_pivot(g: BipartiteGraph, m: int) -> PivotChoice | None:
    """The vertex maximizing the pair-sum surplus, if any surplus is
    nonnegative.  Only vertices with a nonempty neighbourhood are eligible;
    ties break to the smaller index.

    Averaging guarantee: if Hom(C4) >= m * (Hom*(K_{2,1}) + Hom*(K_{1,2}))
    then the scores sum to a nonnegative value and some vertex qualifies.
    """
    if m < 1:
        raise InputError("m must be >= 1")
    scores = _pivot_scores(g, m)
    best = None
    for x, s in enumerate(scores):
        if g.degree_a(x) == 0:
            continue
        if best is None or s > scores[best]:
            best = x
    if best is None or scores[best] < 0:
        return None
    return PivotChoice(vertex=best, surplus=scores[best])


def dyadic_select(g: BipartiteGraph, b_prime: Iterable[int]) -> DyadicSelection:
    """Partition N(B') by degree into B' along dyadic windows [2^(i-1), 2^i)
    and pick the window maximizing the squared-degree sum.

    The chosen window always carries at least a 1/L fraction of the total
    squared-degree mass, L = floor(log2 |B'|) + 1; this is asserted.
    """
    b_set = sorted(set(b_prime))
    if not b_set:
        raise StageFailure("dyadic", "empty B'")
    for b in b_set:
        if not 0 <= b < g.side_b_count:
            raise InputError(f"{b} is not a B-index")
    b_mask = 0
    for b in b_set:
        b_mask |= 1 << b
    levels = len(b_set).bit_length()  # L = floor(log2 |B'|) + 1
    buckets: list[list[int]] = [[] for _ in range(levels)]
    sums = [0] * levels
    total = 0
    for a in range(g.side_a_count):
        d = (g.a_masks[a] & b_mask).bit_count()
        if d == 0:
            continue
        i = d.bit_length() - 1  # window [2^i, 2^(i+1)), paper index i+1
        buckets[i].append(a)
        sums[i] += d * d
        total += d * d
    if total == 0:
        raise StageFailure("dyadic", "empty A'")
    j = max(range(levels), key=lambda i: (sums[i], -i))
    assert levels * sums[j] >= total, "dyadic averaging bound violated"
    return DyadicSelection(
        buckets=tuple(tuple(b) for b in buckets),
        j=j,
        a_j=frozenset(buckets[j]),
    )


def select_witness(
    g: BipartiteGraph,
    a_j: Iterable[int],
    b_prime: Iterable[int],
    bad_threshold: int,
) -> WitnessChoice:
    """Scan every candidate witness and keep the exact minimizer of the
    ordered bad-pair fraction inside its B'-neighbourhood.

    A pair of B-vertices is bad when its codegree in the whole host falls
    below the threshold.  Ties prefer the larger neighbourhood, then the
    smaller index.  The returned fraction is at most the average over all
    eligible candidates (min <= mean), which is asserted.
    """
    b_set = sorted(set(b_prime))
    b_mask = 0
    for b in b_set:
        b_mask |= 1 << b
    fractions: list[tuple[Fraction, int, int]] = []
    for z in sorted(set(a_j)):
        nz = [b for b in g.adj_a[z] if b_mask >> b & 1]
        k = len(nz)
        if k <= 1:
            continue
        bad = 0
        for i, u in enumerate(nz):
            mu = g.b_masks[u]
            for v in nz[i + 1 :]:
                if (mu & g.b_masks[v]).bit_count() < bad_threshold:
                    bad += 2
        fractions.append((Fraction(bad, k * (k - 1)), k, z))
    if not fractions:
        raise StageFailure(
            "witness",
            "witness neighbourhoods too small",
            {"candidates": len(set(a_j))},
        )
    best = min(fractions, key=lambda t: (t[0], -t[1], t[2]))
    mean = sum(t[0] for t in fractions) / len(fractions)
    assert best[0] <= mean, "witness dominance violated"
    return WitnessChoice(vertex=best[2], bad_fraction=best[0], neighbourhood_size=best[1])


def iter_nonbad_cliques(
    g: BipartiteGraph,
    candidates: Iterable[int],
    h: int,
    bad_threshold: int,
    limit: int | None = None,
) -> Iterator[frozenset]:
    """Yield h-subsets of B-candidates whose pairwise codegrees all reach the
    threshold, by exact branch-and-bound in greedy (auxiliary-degree) order."""
    cand = sorted(set(candidates))
    for b in cand:
        if not 0 <= b < g.side_b_count:
            raise InputError(f"{b} is not a B-index")
    k = len(cand)
    if h > k:
        return
    aux = [0] * k  # adjacency masks of the "non-bad" auxiliary graph
    for i in range(k):
        mi = g.b_masks[cand[i]]
        for j in range(i + 1, k):
            if (mi & g.b_masks[cand[j]]).bit_count() >= bad_threshold:
                aux[i] |= 1 << j
                aux[j] |= 1 << i
    order = sorted(range(k), key=lambda i: (-aux[i].bit_count(), i))
    rank = {v: r for r, v in enumerate(order)}
    # remap auxiliary adjacency into the greedy order
    aux_o = [0] * k
    for i in range(k):
        m = aux[i]
        while m:
            low = m & -m
            m ^= low
            aux_o[rank[i]] |= 1 << rank[low.bit_length() - 1]
    emitted = 0

    def rec(start_mask: int, chosen: list[int]) -> Iterator[frozenset]:
        nonlocal emitted
        if len(chosen) == h:
            emitted += 1
            yield frozenset(cand[order[i]] for i in chosen)
            return
        m = start_mask
        while m:
            if limit is not None and emitted >= limit:
                return
            if len(chosen) + m.bit_count() < h:
                return
            low = m & -m
            m ^= low
            i = low.bit_length() - 1
            yield from rec(m & aux_o[i], chosen + [i])

    full = (1 << k) - 1
    yield from rec(full, [])


def clique_nonbad(
    g: BipartiteGraph,
    candidates: Iterable[int],
    h: int,
    bad_threshold: int,
) -> frozenset | None:
    """First h-subset with all pairwise codegrees >= threshold, or None.

    The search is exact, so None means no such subset exists.
    """
    if h < 2:
        raise InputError("h must be >= 2")
    for clique in iter_nonbad_cliques(g, candidates, h, bad_threshold):
        return clique
    return None


def _pattern_sides_for_embedding(pattern: Pattern) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split pattern vertices into (high side, low side).

    The low side must have all degrees <= 2; it maps to A-vertices (the
    subdividers), while the high side maps onto the clique found in B.  When
    both sides qualify the larger side plays low; exact ties take side 1.
    """
    if pattern.side_of is None:
        pattern = Pattern.from_graph(pattern.graph, pattern.name)
        if pattern.side_of is None:
            raise InputError("pattern is not bipartite")
    side0 = pattern.side(0)
    side1 = pattern.side(1)
    g = pattern.graph
    ok0 = all(g.degree(v) <= 2 for v in side0)
    ok1 = all(g.degree(v) <= 2 for v in side1)
    if not ok0 and not ok1:
        raise InputError("pattern needs one side with all degrees <= 2")
    if ok0 and not ok1:
        return side1, side0
    if ok1 and not ok0:
        return side0, side1
    if len(side0) > len(side1):
        return side1, side0
    return side0, side1


def _validate_low_side(pattern: Pattern, low: tuple[int, ...]):
    g = pattern.graph
    seen: dict[frozenset, int] = {}
    for v in low:
        if g.degree(v) == 2:
            key = frozenset(g.adj[v])
            if key in seen:
                raise InputError(
                    f"pattern contains a 4-cycle: vertices {seen[key]} and {v} "
                    "share both neighbours"
                )
            seen[key] = v


def _assign_low_side(
    g: BipartiteGraph,
    pattern: Pattern,
    low: tuple[int, ...],
    high_image: dict[int, int],
    candidate_cap: int,
) -> dict[int, int] | None:
    """Backtracking assignment of the degree-<=2 side into A.

    Candidates for a degree-2 vertex are the common neighbours of its two
    images; for degree 1 the image's neighbourhood; most-constrained
    vertices are placed first, each scanning at most ``candidate_cap``
    candidates in index order.
    """
    pg = pattern.graph
    full_a = (1 << g.side_a_count) - 1
    cand_masks: dict[int, int] = {}
    for w in low:
        nbrs = [high_image[u] for u in pg.adj[w]]
        mask = full_a
        for b in nbrs:
            mask &= g.b_masks[b]
        cand_masks[w] = mask
        if mask == 0:
            return None
    order = sorted(low, key=lambda w: (cand_masks[w].bit_count(), w))
    assignment: dict[int, int] = {}
    used = 0

    def rec(i: int) -> bool:
        nonlocal used
        if i == len(order):
            return True
        w = order[i]
        m = cand_masks[w] & ~used
        tried = 0
        while m and tried < candidate_cap:
            low_bit = m & -m
            m ^= low_bit
            a = low_bit.bit_length() - 1
            tried += 1
            assignment[w] = a
            used |= low_bit
            if rec(i + 1):
                return True
            used ^= low_bit
            del assignment[w]
        return False

    return assignment if rec(0) else None


def embed_h(
    g: BipartiteGraph,
    h_pattern: Pattern,
    params: DrcParams | None = None,
) -> Embedding | FailureReport:
    """Find a verified injective copy of a bipartite pattern whose low side
    has maximum degree 2 and which contains no 4-cycle.

    High-side vertices land on a pairwise-non-bad clique of B-vertices and
    the low side on common neighbourhoods in A.  Every success is certified
    by the independent embedding checker before being returned; a failure
    names the first stage that could not continue.
    """
    params = params or DrcParams()
    high, low = _pattern_sides_for_embedding(h_pattern)
    _validate_low_side(h_pattern, low)
    h_total = h_pattern.vertex_count
    bad_thr = params.bad_threshold or params.h or h_total
    log: list = []

    auto = auto_tune_m(g)
    m_used = params.m if params.m is not None else max(1, auto)
    log.append(("m_selection", {"auto": auto, "used": m_used, "supplied": params.m}))

    pivot = select_pivot(g, m_used)
    fallback = False
    if pivot is None:
        scores = _pivot_scores(g, m_used)
        eligible = [x for x in range(g.side_a_count) if g.degree_a(x) >= 1]
        if not eligible:
            return FailureReport(
                "pivot", "no vertex with positive degree", {"m": m_used}, log
            )
        best = max(eligible, key=lambda x: (scores[x], -x))
        pivot = PivotChoice(vertex=best, surplus=scores[best])
        fallback = True
    log.append(
        ("pivot", {"x": pivot.vertex, "surplus": pivot.surplus, "fallback": fallback})
    )

    b_prime = list(g.adj_a[pivot.vertex])
    try:
        dyadic = dyadic_select(g, b_prime)
    except StageFailure as sf:
        return FailureReport(sf.stage, sf.reason, sf.quantities, log)
    log.append(
        (
            "dyadic",
            {
                "b_prime_size": len(b_prime),
                "j": dyadic.j,
                "bucket_size": len(dyadic.a_j),
            },
        )
    )

    try:
        witness = select_witness(g, dyadic.a_j, b_prime, bad_thr)
    except StageFailure as sf:
        return FailureReport(sf.stage, sf.reason, sf.quantities, log)
    log.append(
        (
            "witness",
            {
                "z": witness.vertex,
                "bad_fraction": str(witness.bad_fraction),
                "neighbourhood_size": witness.neighbourhood_size,
            },
        )
    )

    b_prime_set = set(b_prime)
    witness_nbhd = [b for b in g.adj_a[witness.vertex] if b in b_prime_set]
    pools = [("witness-neighbourhood", witness_nbhd), ("pivot-neighbourhood", b_prime)]
    pools.append(("whole-side", list(range(g.side_b_count))))
    t_high = len(high)
    cap = max(bad_thr, h_total)
    any_clique = False
    seen_pools: set[tuple[int, ...]] = set()
    for pool_name, pool in pools:
        key = tuple(sorted(set(pool)))
        if key in seen_pools or len(key) < t_high:
            continue
        seen_pools.add(key)
        if t_high >= 2:
            cliques = iter_nonbad_cliques(g, pool, t_high, bad_thr, limit=CLIQUE_TRY_LIMIT)
        else:
            cliques = (frozenset({b}) for b in key)
        for clique in cliques:
            any_clique = True
            members = sorted(clique)
            high_image = {v: members[i] for i, v in enumerate(sorted(high))}
            assignment = _assign_low_side(g, h_pattern, low, high_image, cap)
            if assignment is None:
                continue
            na = g.side_a_count
            mapping = {v: na + b for v, b in high_image.items()}
            mapping.update(assignment)
            ok, why = is_valid_embedding(h_pattern, g.as_graph(), mapping)
            assert ok, f"pipeline produced an invalid embedding: {why}"
            log.append(
                (
                    "assignment",
                    {
                        "pool": pool_name,
                        "clique": members,
                        "subdividers": sorted(assignment.values()),
                    },
                )
            )
            return Embedding(mapping=mapping, injective=True, stage_log=log)
    if not any_clique:
        return FailureReport(
            "clique",
            f"no {t_high}-set with pairwise codegree >= {bad_thr}",
            {"bad_threshold": bad_thr},
            log,
        )
    return FailureReport(
        "assignment",
        "subdivider assignment exhausted over every candidate clique",
        {"bad_threshold": bad_thr},
        log,
    )


@dataclass(frozen=True)
class ThresholdCheck:
    lhs: int
    rhs: float
    exceeds: bool


def drc_threshold_check(g: BipartiteGraph, c, eps) -> ThresholdCheck:
    """Compare Hom(C4) against n^(2 - 2c + eps) for n the total order.

    Pure diagnostic for deciding whether the host is in the many-4-cycles
    regime; the comparison is exact (integer powers of the rational
    exponent), the float rhs is only for display.  The host must be
    balanced: side sizes within a factor of 2.
    """
    na, nb = g.side_a_count, g.side_b_count
    if na > 2 * nb or nb > 2 * na:
        raise InputError("host is not balanced (side sizes differ by more than 2x)")
    lhs = hom_c4_oriented(g)
    q = Fraction(2) - 2 * Fraction(c) + Fraction(eps)
    n = na + nb
    if n == 0:
        return ThresholdCheck(lhs=lhs, rhs=0.0, exceeds=False)
    num, den = q.numerator, q.denominator
    if num >= 0:
        exceeds = lhs**den >= n**num
    else:
        exceeds = lhs**den * n ** (-num) >= 1
    return ThresholdCheck(lhs=lhs, rhs=float(n) ** float(q), exceeds=exceeds)
