"""Weighted-graph density toolkit.

Density checking, the codegree lower bound, ordered/unordered pair-sum
comparison, heavy-edge filtering, and large-support extraction.  The
quantities that certify an inequality are compared exactly (integers and
Fractions); no floating point enters a verdict.

Diagonal convention: d(u, u) means deg(u) inside ordered pair sums only;
every unordered sum runs over genuine pairs and excludes the diagonal.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InputError, ResourceError
from .graphs import BipartiteGraph, WeightedGraph

__all__ = [
    "DensityParams",
    "DensityVerdict",
    "check_rho_d_dense",
    "CodegreeBound",
    "local_codegree_bound",
    "PairSumBounds",
    "pair_sum_bounds",
    "FilterResult",
    "heavy_edge_filter",
    "SupportSet",
    "large_support_set",
    "EXHAUSTIVE_VERTEX_LIMIT",
]

EXHAUSTIVE_VERTEX_LIMIT = 24


@dataclass(frozen=True)
class DensityParams:
    """(rho, d): every subset of density >= rho must average pair weight >= d."""

    rho: Fraction
    d: Fraction

    def __post_init__(self):
        rho = Fraction(self.rho)
        d = Fraction(self.d)
        if not 0 < rho <= 1:
            raise InputError("rho must lie in (0, 1]")
        if d < 0:
            raise InputError("d must be nonnegative")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "d", d)


@dataclass(frozen=True)
class DensityVerdict:
    dense: bool
    counterexample: frozenset | None
    mode: str
    subsets_checked: int


def _pair_sum(w: WeightedGraph, vertices: Iterable[int]) -> int:
    vs = sorted(set(vertices))
    total = 0
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            total += w.weight(u, v)
    return total


def check_rho_d_dense(
    w: WeightedGraph,
    params: DensityParams,
    mode: str = "exhaustive",
    seed: int = 0,
    trials: int = 1000,
) -> DensityVerdict:
    """Decide (rho, d)-density.

    Exhaustive mode (vertex limit 24) examines every subset of size at
    least rho * |V|, scanning sizes upward; a returned counterexample is a
    minimum-weight subset of the smallest violating size.  Sampled mode
    checks seeded random qualifying subsets and is one-sided: a ``dense``
    verdict only means no counterexample was found.
    """
    n = w.vertex_count
    if n >= 1 and params.rho * n < 1:
        raise InputError("rho * |V| must be at least 1")
    kmin = max(int(math.ceil(params.rho * n)), 0)
    if mode == "sampled":
        rng = random.Random(seed)
        checked = 0
        for _ in range(trials):
            if kmin > n:
                break
            k = rng.randint(kmin, n)
            u = rng.sample(range(n), k)
            checked += 1
            if _pair_sum(w, u) < params.d * math.comb(k, 2):
                return DensityVerdict(False, frozenset(u), "sampled", checked)
        return DensityVerdict(True, None, "sampled", checked)
    if mode != "exhaustive":
        raise InputError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    if n > EXHAUSTIVE_VERTEX_LIMIT:
        raise ResourceError(
            f"exhaustive density check limited to {EXHAUSTIVE_VERTEX_LIMIT} vertices"
        )
    minima = _min_pair_sum_by_size(w)
    checked = sum(1 for k in minima if k >= kmin)
    # sizes 0 and 1 have no pairs and can never violate
    for k in range(max(kmin, 2), n + 1):
        if k not in minima:
            continue
        value, subset = minima[k]
        if value < params.d * math.comb(k, 2):
            return DensityVerdict(False, frozenset(subset), "exhaustive", checked)
    return DensityVerdict(True, None, "exhaustive", checked)


def _min_pair_sum_by_size(w: WeightedGraph) -> dict[int, tuple[int, tuple[int, ...]]]:
    """For each subset size, the minimum internal pair weight and a witness.

    Meet in the middle: split the ground set in two halves, tabulate the
    internal sums of each half and the cross sums by DP over bitmasks, then
    combine with vectorized minima grouped by popcount.
    """
    n = w.vertex_count
    if n == 0:
        return {0: (0, ())}
    n_lo = n // 2
    n_hi = n - n_lo
    wm = [[0] * n for _ in range(n)]
    for (u, v), wt in w.pairs():
        wm[u][v] = wt
        wm[v][u] = wt

    def internal_sums(offset: int, size: int) -> list[int]:
        f = [0] * (1 << size)
        for s in range(1, 1 << size):
            low = s & -s
            v = low.bit_length() - 1
            rest = s ^ low
            extra = 0
            r = rest
            while r:
                rl = r & -r
                r ^= rl
                extra += wm[offset + v][offset + rl.bit_length() - 1]
            f[s] = f[rest] + extra
        return f

    f_lo = internal_sums(0, n_lo)
    f_hi = np.array(internal_sums(n_lo, n_hi), dtype=np.int64)
    cross = np.zeros((max(n_lo, 1), 1 << n_hi), dtype=np.int64)
    for u in range(n_lo):
        row = cross[u]
        for t in range(1, 1 << n_hi):
            low = t & -t
            row[t] = row[t ^ low] + wm[u][n_lo + low.bit_length() - 1]
    pop_hi = np.array([t.bit_count() for t in range(1 << n_hi)], dtype=np.int64)
    cols_by_size = [np.nonzero(pop_hi == s)[0] for s in range(n_hi + 1)]

    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    lo_vertices = list(range(n_lo))
    hi_vertices = list(range(n_lo, n))
    for s_lo in range(1 << n_lo):
        row = f_hi.copy()
        m = s_lo
        while m:
            low = m & -m
            m ^= low
            row += cross[low.bit_length() - 1]
        row += f_lo[s_lo]
        k_lo = s_lo.bit_count()
        for s_hi_size in range(n_hi + 1):
            cols = cols_by_size[s_hi_size]
            if cols.size == 0:
                continue
            idx = int(cols[int(np.argmin(row[cols]))])
            value = int(row[idx])
            k = k_lo + s_hi_size
            if k not in best or value < best[k][0]:
                subset = tuple(
                    [lo_vertices[i] for i in range(n_lo) if s_lo >> i & 1]
                    + [hi_vertices[i] for i in range(n_hi) if idx >> i & 1]
                )
                best[k] = (value, subset)
    return best


@dataclass(frozen=True)
class CodegreeBound:
    """Both sides of the minimum-degree codegree lower bound on a subset."""

    lhs: int
    rhs: Fraction
    holds: bool
    hypothesis_met: bool
    delta: int
    n_other: int


def _check_subset_of_a(g: BipartiteGraph, u: Iterable[int]) -> list[int]:
    us = sorted(set(u))
    for v in us:
        if not 0 <= v < g.side_a_count:
            raise InputError(f"vertex {v} is not an A-index")
    return us


def local_codegree_bound(g: BipartiteGraph, u: Iterable[int]) -> CodegreeBound:
    """Compare sum of pairwise codegrees over U against (delta^2 / 2n) C(|U|, 2),
    where delta is the minimum A-degree and n = |B|.

    The bound is guaranteed whenever delta * |U| >= 2n; a violated
    hypothesis is reported, not rejected.
    """
    us = _check_subset_of_a(g, u)
    n_other = g.side_b_count
    delta = min((g.degree_a(a) for a in range(g.side_a_count)), default=0)
    lhs = 0
    for i, x in enumerate(us):
        for y in us[i + 1 :]:
            lhs += g.codegree_a(x, y)
    if n_other == 0:
        rhs = Fraction(0)
    else:
        rhs = Fraction(delta * delta * math.comb(len(us), 2), 2 * n_other)
    return CodegreeBound(
        lhs=lhs,
        rhs=rhs,
        holds=lhs >= rhs,
        hypothesis_met=delta * len(us) >= 2 * n_other,
        delta=delta,
        n_other=n_other,
    )


@dataclass(frozen=True)
class PairSumBounds:
    """Unordered vs ordered codegree sums over a subset of A.

    ordered_sum runs over all of U x U with the diagonal counted as
    deg(u); unordered_sum runs over genuine pairs.  Under the hypothesis
    delta * |U| >= 2n the unordered sum is at least a quarter of the
    ordered one.
    """

    unordered_sum: int
    ordered_sum: int
    edge_count: int
    holds: bool
    hypothesis_met: bool


def pair_sum_bounds(g: BipartiteGraph, u: Iterable[int]) -> PairSumBounds:
    us = _check_subset_of_a(g, u)
    unordered = 0
    for i, x in enumerate(us):
        for y in us[i + 1 :]:
            unordered += g.codegree_a(x, y)
    diag = sum(g.degree_a(x) for x in us)
    ordered = 2 * unordered + diag
    edge_count = diag  # edges of G[U, B]: every U-incident edge survives
    delta = min((g.degree_a(a) for a in range(g.side_a_count)), default=0)
    return PairSumBounds(
        unordered_sum=unordered,
        ordered_sum=ordered,
        edge_count=edge_count,
        holds=4 * unordered >= ordered,
        hypothesis_met=delta * len(us) >= 2 * g.side_b_count,
    )


@dataclass(frozen=True)
class FilterResult:
    """Partition of a weighted graph's support at a weight threshold."""

    kept_pairs: frozenset
    removed_pairs: frozenset
    removed_weight: int
    threshold: int


def heavy_edge_filter(w: WeightedGraph, m: int) -> FilterResult:
    """Split the support into light (< m) and heavy (>= m) pairs.

    The removed weight always satisfies removed <= (sum of squared
    weights) / m, which is re-checked on every call.
    """
    if m < 1:
        raise InputError("threshold must be a positive integer")
    kept = []
    removed = []
    removed_weight = 0
    square_sum = 0
    for pair, wt in w.pairs():
        square_sum += wt * wt
        if wt >= m:
            removed.append(pair)
            removed_weight += wt
        else:
            kept.append(pair)
    assert removed_weight * m <= square_sum, "heavy-weight bound violated"
    return FilterResult(
        kept_pairs=frozenset(kept),
        removed_pairs=frozenset(removed),
        removed_weight=removed_weight,
        threshold=m,
    )


@dataclass(frozen=True)
class SupportSet:
    """Vertices carrying much light weight, with the density they certify."""

    members: frozenset
    d: Fraction
    threshold: int


def large_support_set(w: WeightedGraph, m: int) -> SupportSet:
    """Vertices whose truncated (below-threshold) weighted degree is large.

    With d taken as the actual light weight divided by |A|^2 (the tight
    instantiation of the hypothesis), the construction guarantees both
    |U| >= d |A| / m and that every member has at least d |A| / m light
    neighbours; both are re-verified before returning.
    """
    if m < 1:
        raise InputError("threshold must be a positive integer")
    n = w.vertex_count
    light_weight = 0
    light_deg = [0] * n
    light_count = [0] * n
    for (u, v), wt in w.pairs():
        if wt < m:
            light_weight += wt
            light_deg[u] += wt
            light_deg[v] += wt
            light_count[u] += 1
            light_count[v] += 1
    if light_weight == 0:
        raise InputError("no light edges: every positive weight meets the threshold")
    d = Fraction(light_weight, n * n)
    members = frozenset(u for u in range(n) if light_deg[u] >= d * n)
    floor_bound = d * n / m
    assert len(members) >= floor_bound, "support-size guarantee violated"
    assert all(light_count[u] >= floor_bound for u in members), (
        "light-neighbour guarantee violated"
    )
    return SupportSet(members=members, d=d, threshold=m)
