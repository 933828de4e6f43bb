"""Good-tuple machinery and the clique-subdivision embedding built on it.

A good j-tuple is an ordered tuple of A-vertices whose pairwise codegrees
sit in prescribed windows [1, T_i) (the window of the smaller index applies)
and whose joint eta-intersection, the extension set, stays large.  Tuples
iterate via the heavy-filter / large-support step, and a good (t-1)-tuple
plus one extending vertex yields the branch vertices of a K_t subdivision,
whose subdividers are then assigned by bipartite matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .density import heavy_edge_filter, large_support_set
from .drc import Embedding, FailureReport
from .errors import InputError
from .graphs import BipartiteGraph, neighbourhood_graph
from .homcount import hom_c4_oriented, hom_star_oriented, is_valid_embedding
from .patterns import pattern_h_t

__all__ = [
    "LBoundedness",
    "check_l_bounded",
    "eta_set",
    "GoodTupleCertificate",
    "GoodTupleEnumeration",
    "enumerate_good_tuples",
    "ExtensionStep",
    "extend_step",
    "embed_via_good_tuples",
    "ThresholdSchedule",
    "threshold_schedule",
    "DichotomyReport",
    "dichotomy_report",
]


@dataclass(frozen=True)
class LBoundedness:
    c4_count: int
    k21_count: int
    bounded: bool


def check_l_bounded(g: BipartiteGraph, a_prime: Iterable[int], l) -> LBoundedness:
    """Is Hom(C4) on the induced subgraph G[A', B] at most L times the
    pair-in-A' star count?  Monotone in L by construction."""
    a_list = sorted(set(a_prime))
    for a in a_list:
        if not 0 <= a < g.side_a_count:
            raise InputError(f"{a} is not an A-index")
    sub, _, _ = g.induced(a_keep=a_list)
    c4 = hom_c4_oriented(sub)
    k21 = hom_star_oriented(sub, "B", 2)
    return LBoundedness(c4_count=c4, k21_count=k21, bounded=c4 <= Fraction(l) * k21)


def eta_set(g: BipartiteGraph, u: int, t: int) -> frozenset:
    """Vertices of A (other than u) whose codegree with u lies in [1, t).

    t <= 1 gives the empty set because the upper bound is strict.
    """
    if not 0 <= u < g.side_a_count:
        raise InputError(f"{u} is not an A-index")
    mu = g.a_masks[u]
    out = []
    for a in range(g.side_a_count):
        if a == u:
            continue
        if 1 <= (mu & g.a_masks[a]).bit_count() < t:
            out.append(a)
    return frozenset(out)


@dataclass(frozen=True)
class GoodTupleCertificate:
    """An ordered tuple of A-vertices with codegree windows and a large
    joint eta-intersection.

    For positions i < i' the codegree d(a_i, a_i') lies in [1, T_i): the
    window of the *smaller* index applies.  ``extension_set`` is the
    intersection of the eta-sets of all members and every element counts as
    an extension of the tuple.
    """

    members: tuple[int, ...]
    thresholds: tuple[int, ...]
    min_extension: int
    extension_set: frozenset

    def verify(self, g: BipartiteGraph) -> bool:
        j = len(self.members)
        if len(self.thresholds) != j:
            return False
        for i in range(j):
            for k in range(i + 1, j):
                d = g.codegree_a(self.members[i], self.members[k])
                if not 1 <= d < self.thresholds[i]:
                    return False
        inter: frozenset | None = None
        for i in range(j):
            eta = eta_set(g, self.members[i], self.thresholds[i])
            inter = eta if inter is None else inter & eta
        if inter is None:
            inter = frozenset()
        return inter == self.extension_set and len(inter) >= self.min_extension


@dataclass(frozen=True)
class GoodTupleEnumeration:
    certificates: tuple[GoodTupleCertificate, ...]
    truncated: bool


def _validate_thresholds(thresholds: Iterable[int]) -> tuple[int, ...]:
    ts = tuple(int(t) for t in thresholds)
    if not ts:
        raise InputError("need at least one threshold")
    if any(t < 1 for t in ts):
        raise InputError("thresholds must be positive")
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise InputError("thresholds must be non-decreasing")
    return ts


def enumerate_good_tuples(
    g: BipartiteGraph,
    thresholds: Iterable[int],
    min_extension: int,
    cap: int = 10000,
) -> GoodTupleEnumeration:
    """Depth-first enumeration of good j-tuples, j = len(thresholds).

    Partial tuples extend through the running eta-intersection, pruning as
    soon as it drops below ``min_extension`` (it only shrinks).  Every
    emitted certificate re-verifies its own invariants.  Hitting ``cap``
    sets the truncated flag instead of erroring.
    """
    ts = _validate_thresholds(thresholds)
    if min_extension < 0:
        raise InputError("min_extension must be nonnegative")
    if cap < 1:
        raise InputError("cap must be >= 1")
    j = len(ts)
    certs: list[GoodTupleCertificate] = []
    truncated = False
    eta_cache: dict[tuple[int, int], frozenset] = {}

    def eta(u: int, t: int) -> frozenset:
        key = (u, t)
        if key not in eta_cache:
            eta_cache[key] = eta_set(g, u, t)
        return eta_cache[key]

    def rec(prefix: list[int], inter: frozenset | None):
        nonlocal truncated
        if truncated:
            return
        depth = len(prefix)
        if depth == j:
            cert = GoodTupleCertificate(
                members=tuple(prefix),
                thresholds=ts,
                min_extension=min_extension,
                extension_set=inter if inter is not None else frozenset(),
            )
            assert cert.verify(g), "emitted certificate failed self-verification"
            if len(certs) < cap:
                certs.append(cert)
            else:
                truncated = True
            return
        candidates = range(g.side_a_count) if inter is None else sorted(inter)
        for a in candidates:
            new_inter = eta(a, ts[depth]) if inter is None else inter & eta(a, ts[depth])
            if len(new_inter) < min_extension:
                continue
            prefix.append(a)
            rec(prefix, new_inter)
            prefix.pop()
            if truncated:
                return

    rec([], None)
    return GoodTupleEnumeration(certificates=tuple(certs), truncated=truncated)


@dataclass(frozen=True)
class ExtensionStep:
    """One induction step: vertices of the extension set carrying much light
    codegree weight, each with its light neighbourhood (which is exactly the
    extension set of the lengthened tuple)."""

    members: frozenset
    d: Fraction
    threshold: int
    removed_weight: int
    light_neighbourhoods: dict[int, frozenset]


def extend_step(
    g: BipartiteGraph, cert: GoodTupleCertificate, next_threshold: int
) -> ExtensionStep:
    """Restrict the codegree graph to the tuple's extension set, drop heavy
    pairs at the new threshold, and extract the large light-support set.

    Every returned vertex u yields a candidate (j+1)-tuple; its light
    neighbourhood inside the extension set is the new extension set.
    Propagates the "no light edges" error when everything is heavy.
    """
    if next_threshold < cert.thresholds[-1]:
        raise InputError("next_threshold must not decrease")
    base = sorted(cert.extension_set)
    if not base:
        raise InputError("certificate has an empty extension set")
    w_full = neighbourhood_graph(g, "A")
    w_sub, idx = w_full.restrict(base)
    filt = heavy_edge_filter(w_sub, next_threshold)
    support = large_support_set(w_sub, next_threshold)
    members = frozenset(idx[i] for i in support.members)
    light: dict[int, frozenset] = {}
    for i in support.members:
        nb = [
            idx[v]
            for v in range(w_sub.vertex_count)
            if v != i and 0 < w_sub.weight(i, v) < next_threshold
        ]
        light[idx[i]] = frozenset(nb)
    return ExtensionStep(
        members=members,
        d=support.d,
        threshold=next_threshold,
        removed_weight=filt.removed_weight,
        light_neighbourhoods=light,
    )


def _kuhn_matching(candidates: list[list[int]]) -> list[int] | None:
    """Perfect matching of every left slot into distinct right vertices."""
    match_right: dict[int, int] = {}

    def try_slot(i: int, visited: set[int]) -> bool:
        for b in candidates[i]:
            if b in visited:
                continue
            visited.add(b)
            if b not in match_right or try_slot(match_right[b], visited):
                match_right[b] = i
                return True
        return False

    for i in range(len(candidates)):
        if not try_slot(i, set()):
            return None
    out = [-1] * len(candidates)
    for b, i in match_right.items():
        out[i] = b
    return out


def embed_via_good_tuples(
    g: BipartiteGraph,
    t: int,
    thresholds: Iterable[int],
    min_extension: int,
    tuple_cap: int = 2000,
) -> Embedding | FailureReport:
    """Embed the subdivision of K_t: a good (t-1)-tuple plus an extending
    vertex supplies the branch vertices in A, and the C(t, 2) subdividers
    are matched to distinct common neighbours in B.

    Distinctness of subdividers is exactly a bipartite matching problem
    (pattern pairs against B-vertices), so matching replaces blind
    backtracking.  Every success is certified by the independent checker.
    """
    if t < 3:
        raise InputError("need t >= 3")
    ts = _validate_thresholds(thresholds)
    if len(ts) != t - 1:
        raise InputError(f"need exactly {t - 1} thresholds for t = {t}")
    log: list = []
    enum = enumerate_good_tuples(g, ts, min_extension, cap=tuple_cap)
    log.append(
        ("good-tuples", {"count": len(enum.certificates), "truncated": enum.truncated})
    )
    if not enum.certificates:
        return FailureReport("good-tuple", "no good tuple", {}, log)
    pattern = pattern_h_t(t)
    pairs = list(combinations(range(t), 2))
    na = g.side_a_count
    any_extension = False
    for cert in enum.certificates:
        for u in sorted(cert.extension_set):
            any_extension = True
            branch = cert.members + (u,)
            candidates = []
            feasible = True
            for i, k in pairs:
                mask = g.a_masks[branch[i]] & g.a_masks[branch[k]]
                cand = []
                while mask:
                    low = mask & -mask
                    mask ^= low
                    cand.append(low.bit_length() - 1)
                if not cand:
                    feasible = False
                    break
                candidates.append(cand)
            if not feasible:
                continue
            match = _kuhn_matching(candidates)
            if match is None:
                continue
            mapping = {i: branch[i] for i in range(t)}
            for e_idx, b in enumerate(match):
                mapping[t + e_idx] = na + b
            ok, why = is_valid_embedding(pattern, g.as_graph(), mapping)
            assert ok, f"good-tuple pipeline produced an invalid embedding: {why}"
            log.append(
                (
                    "embedding",
                    {
                        "tuple": list(cert.members),
                        "extension": u,
                        "subdividers": sorted(match),
                    },
                )
            )
            return Embedding(mapping=mapping, injective=True, stage_log=log)
    if not any_extension:
        return FailureReport("extension", "no extension", {}, log)
    return FailureReport(
        "assignment", "subdivider assignment exhausted", {}, log
    )


@dataclass(frozen=True)
class ThresholdSchedule:
    """The proof-schedule parameters for given (n, t, delta); astronomically
    conservative at desk scale and provided for reference runs only."""

    c: float
    xi: tuple[float, ...]
    delta_schedule: tuple[float, ...]
    thresholds: tuple[int, ...]


def threshold_schedule(n: int, t: int, delta: float) -> ThresholdSchedule:
    """delta_j = delta / 6^(t-j), c = xi_1 = delta / 6^t, xi_j = 2 delta_(j-1)
    for j >= 2; thresholds realize n^(xi_j) as ceil."""
    if n < 1 or t < 1:
        raise InputError("need n >= 1 and t >= 1")
    if not 0 < delta < 0.25:
        raise InputError("delta must lie in (0, 1/4)")
    import math

    deltas = tuple(delta / 6 ** (t - j) for j in range(1, t + 1))
    xi = [delta / 6**t]
    for j in range(2, t + 1):
        xi.append(2 * deltas[j - 2])
    thresholds = tuple(int(math.ceil(n**x)) for x in xi)
    return ThresholdSchedule(
        c=delta / 6**t,
        xi=tuple(xi),
        delta_schedule=deltas,
        thresholds=thresholds,
    )


@dataclass(frozen=True)
class DichotomyReport:
    """Concrete quantities behind the boundedness dichotomy on G[A', B].

    ``k21_convexity_ok`` is the convexity link (k21 * |B| >= e'^2) and
    ``k12_degree_cap_ok`` the degree cap (k12 <= |A'| * maxdeg^2); both are
    theorems and should hold on every instance.
    """

    c4_count: int
    k12_count: int
    k21_count: int
    edge_count: int
    bounded: bool
    k21_convexity_ok: bool
    k12_degree_cap_ok: bool


def dichotomy_report(g: BipartiteGraph, a_prime: Iterable[int], l) -> DichotomyReport:
    a_list = sorted(set(a_prime))
    sub, _, _ = g.induced(a_keep=a_list)
    c4 = hom_c4_oriented(sub)
    k12 = hom_star_oriented(sub, "A", 2)
    k21 = hom_star_oriented(sub, "B", 2)
    e = sub.edge_count
    maxdeg = max((g.degree_a(a) for a in range(g.side_a_count)), default=0)
    return DichotomyReport(
        c4_count=c4,
        k12_count=k12,
        k21_count=k21,
        edge_count=e,
        bounded=c4 <= Fraction(l) * k21,
        k21_convexity_ok=k21 * g.side_b_count >= e * e,
        k12_degree_cap_ok=k12 <= len(a_list) * maxdeg * maxdeg,
    )
