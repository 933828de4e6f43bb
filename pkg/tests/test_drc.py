from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from conftest import bipartite_corpus, small_bipartite
from subdivlab._seeds import derive_seed
from subdivlab.drc import (
    DrcParams,
    Embedding,
    FailureReport,
    StageFailure,
    auto_tune_m,
    clique_nonbad,
    drc_threshold_check,
    dyadic_select,
    embed_h,
    iter_nonbad_cliques,
    select_pivot,
    select_witness,
)
from subdivlab.errors import InputError
from subdivlab.graphs import build_bipartite
from subdivlab.homcount import Pattern, hom_c4_oriented, hom_star_oriented, is_valid_embedding
from subdivlab.patterns import (
    complete_bipartite_graph,
    cycle_pattern,
    heawood_graph,
    pattern_h_t,
)
from subdivlab.randgraphs import random_bipartite


def complete_bip(n):
    return build_bipartite(n, n, [(a, b) for a in range(n) for b in range(n)])


def matching_bip(n):
    return build_bipartite(n, n, [(i, i) for i in range(n)])


def test_select_pivot_k33():
    res = select_pivot(complete_bip(3), 1)
    assert res is not None
    assert res.surplus == 27 - 18
    assert res.vertex == 0


def test_select_pivot_matching_returns_none():
    assert select_pivot(matching_bip(3), 1) is None


def test_select_pivot_edgeless_returns_none():
    assert select_pivot(build_bipartite(3, 3, []), 1) is None


def test_select_pivot_rejects_m_zero(k33):
    with pytest.raises(InputError):
        select_pivot(k33, 0)


@given(small_bipartite())
@settings(max_examples=40)
def test_pivot_averaging_guarantee(g):
    m = 1
    threshold = hom_star_oriented(g, "B", 2) + hom_star_oriented(g, "A", 2)
    if hom_c4_oriented(g) >= m * threshold and g.edge_count > 0:
        assert select_pivot(g, m) is not None


def test_dyadic_windows():
    # degrees into B' of 1, 2, 3, 5 must split as {1}, {2,3}, {5}
    g = build_bipartite(
        4,
        5,
        [(0, 0)]
        + [(1, j) for j in range(2)]
        + [(2, j) for j in range(2, 5)]
        + [(3, j) for j in range(5)],
    )
    sel = dyadic_select(g, range(5))
    assert sel.buckets == ((0,), (1, 2), (3,))
    assert sel.j == 2 and sel.a_j == frozenset({3})


def test_dyadic_k33_single_bucket(k33):
    sel = dyadic_select(k33, range(3))
    assert sel.a_j == frozenset({0, 1, 2})
    assert sel.buckets[sel.j] == (0, 1, 2)


def test_dyadic_single_b_vertex(k33):
    sel = dyadic_select(k33, [1])
    assert sel.buckets == ((0, 1, 2),)


def test_dyadic_empty_aprime():
    g = build_bipartite(2, 2, [(0, 0)])
    with pytest.raises(StageFailure):
        dyadic_select(g, [1])


@given(small_bipartite())
@settings(max_examples=40)
def test_dyadic_averaging_bound(g):
    if g.edge_count == 0:
        return
    b_prime = [b for b in range(g.side_b_count) if g.degree_b(b) > 0]
    if not b_prime:
        return
    sel = dyadic_select(g, b_prime)
    levels = len(b_prime).bit_length()

    def mass(bucket):
        b_set = set(b_prime)
        return sum(len([b for b in g.adj_a[a] if b in b_set]) ** 2 for a in bucket)

    total = sum(mass(bucket) for bucket in sel.buckets)
    assert levels * mass(sel.buckets[sel.j]) >= total


def test_witness_complete_host_no_bad_pairs():
    h = 3
    g = complete_bip(h + 1)
    res = select_witness(g, range(h + 1), range(h + 1), h)
    assert res.bad_fraction == 0


def test_witness_c6_all_bad(c6_bip):
    res = select_witness(c6_bip, range(3), range(3), 2)
    assert res.bad_fraction == 1


def test_witness_heawood_all_bad():
    hw = heawood_graph()
    res = select_witness(hw, range(7), range(7), 2)
    assert res.bad_fraction == 1  # two lines of a projective plane share one point


def test_witness_small_neighbourhoods_fail():
    g = matching_bip(4)
    with pytest.raises(StageFailure, match="too small"):
        select_witness(g, range(4), range(4), 2)


@given(small_bipartite())
@settings(max_examples=30)
def test_witness_dominates_average(g):
    eligible = [
        z
        for z in range(g.side_a_count)
        if g.degree_a(z) >= 2
    ]
    if not eligible:
        return
    res = select_witness(g, range(g.side_a_count), range(g.side_b_count), 2)
    fracs = []
    for z in eligible:
        nz = g.adj_a[z]
        bad = sum(
            2
            for i, u in enumerate(nz)
            for v in nz[i + 1 :]
            if g.codegree_b(u, v) < 2
        )
        fracs.append(Fraction(bad, len(nz) * (len(nz) - 1)))
    assert res.bad_fraction == min(fracs)
    assert res.bad_fraction <= sum(fracs) / len(fracs)


def test_clique_nonbad_complete(k33):
    assert clique_nonbad(k33, range(3), 3, 3) == frozenset({0, 1, 2})


def test_clique_nonbad_c6_none(c6_bip):
    assert clique_nonbad(c6_bip, range(3), 3, 2) is None


def test_clique_nonbad_k33_minus_edge():
    g = build_bipartite(
        3, 3, [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    )
    res = clique_nonbad(g, range(3), 3, 2)
    assert res == frozenset({0, 1, 2})


def test_clique_nonbad_requires_h2(k33):
    with pytest.raises(InputError):
        clique_nonbad(k33, range(3), 1, 2)


def test_clique_matches_exhaustive_on_corpus():
    for g in bipartite_corpus(40, 6, master_seed=17):
        if g.side_b_count < 3:
            continue
        cands = list(range(g.side_b_count))
        for threshold in (1, 2):
            found = clique_nonbad(g, cands, 3, threshold)
            brute = [
                set(sub)
                for sub in combinations(cands, 3)
                if all(
                    g.codegree_b(u, v) >= threshold
                    for u, v in combinations(sub, 2)
                )
            ]
            if found is None:
                assert not brute
            else:
                assert set(found) in brute


def test_embed_c6_in_complete_host():
    g = complete_bip(36)
    res = embed_h(g, pattern_h_t(3))
    assert isinstance(res, Embedding)
    ok, _ = is_valid_embedding(pattern_h_t(3), g.as_graph(), res.mapping)
    assert ok


def test_embed_h4_in_complete_host():
    g = complete_bip(36)
    res = embed_h(g, pattern_h_t(4))
    assert isinstance(res, Embedding)


def test_embed_heawood_c6_with_low_threshold():
    hw = heawood_graph()
    res = embed_h(hw, pattern_h_t(3), DrcParams(bad_threshold=1))
    assert isinstance(res, Embedding)
    ok, _ = is_valid_embedding(pattern_h_t(3), hw.as_graph(), res.mapping)
    assert ok
    # subdividing vertices distinct by injectivity
    assert len(set(res.mapping.values())) == 6


def test_embed_c8_fails(c8_bip):
    res = embed_h(c8_bip, pattern_h_t(3))
    assert isinstance(res, FailureReport)
    res1 = embed_h(c8_bip, pattern_h_t(3), DrcParams(bad_threshold=1))
    assert isinstance(res1, FailureReport)


def test_embed_rejects_bad_patterns(k33):
    with pytest.raises(InputError):
        embed_h(k33, Pattern(complete_bipartite_graph(3, 3)))  # degrees 3 on both sides
    with pytest.raises(InputError):
        embed_h(k33, cycle_pattern(4))  # the pattern is itself a C4


def test_embed_soundness_over_corpus():
    patterns = [pattern_h_t(3), pattern_h_t(4), cycle_pattern(6)]
    successes = 0
    for i, g in enumerate(bipartite_corpus(60, 10, master_seed=23)):
        for p in patterns:
            res = embed_h(g, p, DrcParams(bad_threshold=2, seed=i))
            if isinstance(res, Embedding):
                successes += 1
                ok, why = is_valid_embedding(p, g.as_graph(), res.mapping)
                assert ok, why
    assert successes > 0  # the corpus contains embeddable hosts


def test_embed_success_rate_on_dense_hosts():
    # dense seeded hosts at moderate size: the pipeline must never miss
    for i in range(10):
        g = random_bipartite(24, 24, 0.7, derive_seed(31, i))
        res = embed_h(g, pattern_h_t(3))
        assert isinstance(res, Embedding)


def test_auto_tune_examples(c6_bip):
    assert auto_tune_m(build_bipartite(2, 2, [])) == 0
    assert auto_tune_m(c6_bip) == 0  # 18 // (12 + 12)
    assert auto_tune_m(complete_bip(4)) == 4**4 // (2 * 4**3)


def test_threshold_check_examples(c6_bip):
    res = drc_threshold_check(build_bipartite(2, 2, []), Fraction(1, 4), Fraction(1, 10))
    assert res.lhs == 0 and not res.exceeds

    res = drc_threshold_check(c6_bip, 0, 0)
    assert res.lhs == 18 and res.rhs == 36.0 and not res.exceeds

    k16 = complete_bip(16)
    res = drc_threshold_check(k16, Fraction(1, 4), Fraction(1, 10))
    # per pivot row: m diagonal terms of m plus m(m-1) codegrees of m = m^3
    lhs = 16**4
    assert res.lhs == lhs
    # exact: lhs vs 32^(2 - 1/2 + 1/10) = 32^(8/5)
    assert res.exceeds == (lhs**5 >= 32**8)


def test_threshold_check_rejects_unbalanced():
    g = build_bipartite(1, 3, [(0, 0)])
    with pytest.raises(InputError):
        drc_threshold_check(g, 0, 0)


def test_stage_log_records_pipeline(c8_bip):
    res = embed_h(c8_bip, pattern_h_t(3))
    stages = [name for name, _ in res.stage_log]
    assert stages[0] == "m_selection"
    assert "pivot" in stages


def test_drc_params_validation():
    with pytest.raises(InputError):
        DrcParams(m=0)
    with pytest.raises(InputError):
        DrcParams(bad_threshold=0)
