from fractions import Fraction

import pytest

from conftest import bipartite_corpus
from subdivlab.drc import Embedding, FailureReport
from subdivlab.errors import InputError
from subdivlab.graphs import build_bipartite
from subdivlab.homcount import contains_injective, is_valid_embedding
from subdivlab.patterns import pattern_h_t, subdivide_k, complete_graph
from subdivlab.structure import (
    GoodTupleCertificate,
    check_l_bounded,
    dichotomy_report,
    embed_via_good_tuples,
    enumerate_good_tuples,
    eta_set,
    extend_step,
    threshold_schedule,
)


def complete_bip(m):
    return build_bipartite(m, m, [(a, b) for a in range(m) for b in range(m)])


def test_check_l_bounded_examples(k22):
    res = check_l_bounded(k22, [], 5)
    assert res.c4_count == 0 and res.bounded

    res2 = check_l_bounded(k22, range(2), 2)
    assert res2.c4_count == 16 and res2.k21_count == 8 and res2.bounded

    res1 = check_l_bounded(k22, range(2), 1)
    assert not res1.bounded


def test_check_l_bounded_monotone(k33):
    for a_prime in ([0], [0, 1], [0, 1, 2]):
        results = [check_l_bounded(k33, a_prime, l).bounded for l in (1, 2, 4, 8)]
        # once bounded, stays bounded as L grows
        assert results == sorted(results)


def test_eta_set_examples(c6_bip):
    assert eta_set(c6_bip, 0, 2) == frozenset({1, 2})
    k44 = complete_bip(4)
    assert eta_set(k44, 0, 4) == frozenset()
    assert eta_set(k44, 0, 5) == frozenset({1, 2, 3})
    assert eta_set(k44, 0, 1) == frozenset()


def test_enumerate_good_tuples_complete():
    m = 4
    enum = enumerate_good_tuples(complete_bip(m), (m + 1, m + 1), 1)
    assert len(enum.certificates) == m * (m - 1)
    assert not enum.truncated
    for cert in enum.certificates:
        assert len(cert.extension_set) == m - 2
        assert cert.verify(complete_bip(m))


def test_enumerate_good_tuples_c6(c6_bip):
    enum = enumerate_good_tuples(c6_bip, (2, 2), 1)
    members = {c.members for c in enum.certificates}
    assert members == {(a, b) for a in range(3) for b in range(3) if a != b}
    for cert in enum.certificates:
        third = ({0, 1, 2} - set(cert.members)).pop()
        assert cert.extension_set == frozenset({third})


def test_enumerate_good_tuples_edgeless():
    enum = enumerate_good_tuples(build_bipartite(4, 4, []), (3, 3), 1)
    assert enum.certificates == ()


def test_enumerate_cap_truncates():
    enum = enumerate_good_tuples(complete_bip(5), (6, 6), 1, cap=3)
    assert len(enum.certificates) == 3
    assert enum.truncated


def test_good_tuple_asymmetric_thresholds():
    # threshold of the smaller index applies: with T = (2, 5) on K_{4,4}
    # no pair qualifies because d(a_1, a_2) = 4 >= 2 = T_1
    enum = enumerate_good_tuples(complete_bip(4), (2, 5), 0)
    assert not enum.certificates
    # with T = (5, 5) every ordered pair qualifies
    enum2 = enumerate_good_tuples(complete_bip(4), (5, 5), 0)
    assert len(enum2.certificates) == 12


def test_certificate_verify_rejects_tampering(c6_bip):
    enum = enumerate_good_tuples(c6_bip, (2, 2), 1)
    cert = enum.certificates[0]
    bad = GoodTupleCertificate(
        members=cert.members,
        thresholds=cert.thresholds,
        min_extension=cert.min_extension,
        extension_set=cert.extension_set | {cert.members[0]},
    )
    assert not bad.verify(c6_bip)


def test_extend_step_complete():
    m = 5
    g = complete_bip(m)
    enum = enumerate_good_tuples(g, (m + 1,), 1)
    cert = next(c for c in enum.certificates if c.members == (0,))
    step = extend_step(g, cert, m + 1)
    assert step.members == cert.extension_set
    # every u extends to a good 2-tuple found by the enumerator
    enum2 = enumerate_good_tuples(g, (m + 1, m + 1), 1)
    pairs = {c.members for c in enum2.certificates}
    for u in step.members:
        assert (0, u) in pairs
        assert step.light_neighbourhoods[u] == frozenset(
            v for v in range(m) if v not in (0, u)
        )


def test_extend_step_c6(c6_bip):
    enum = enumerate_good_tuples(c6_bip, (2,), 1)
    cert = next(c for c in enum.certificates if c.members == (0,))
    step = extend_step(c6_bip, cert, 2)
    assert step.members <= frozenset({1, 2})
    for u in step.members:
        assert len(step.light_neighbourhoods[u]) == 1


def test_extend_step_all_heavy_propagates():
    # a0 has codegree 1 to a1 and a2, but a1 and a2 share 6 neighbours, so
    # inside the extension set of (a0,) every pair is heavy at threshold 2
    edges = (
        [(0, 0), (0, 1), (1, 0), (2, 1)]
        + [(1, j) for j in range(2, 8)]
        + [(2, j) for j in range(2, 8)]
    )
    g = build_bipartite(3, 8, edges)
    enum = enumerate_good_tuples(g, (2,), 2)
    cert = next(c for c in enum.certificates if c.members == (0,))
    assert cert.extension_set == frozenset({1, 2})
    with pytest.raises(InputError, match="no light"):
        extend_step(g, cert, 2)


def test_extend_step_threshold_may_not_decrease(c6_bip):
    enum = enumerate_good_tuples(c6_bip, (3,), 1)
    with pytest.raises(InputError):
        extend_step(c6_bip, enum.certificates[0], 2)


def test_embed_k33_yields_c6(k33):
    res = embed_via_good_tuples(k33, 3, (4, 4), 1)
    assert isinstance(res, Embedding)
    ok, why = is_valid_embedding(pattern_h_t(3), k33.as_graph(), res.mapping)
    assert ok, why
    branches = {res.mapping[v] for v in range(3)}
    assert branches <= {0, 1, 2}


def test_embed_c8_fails(c8_bip):
    res = embed_via_good_tuples(c8_bip, 3, (2, 2), 1)
    assert isinstance(res, FailureReport)


def test_embed_k66_h4():
    res = embed_via_good_tuples(complete_bip(6), 4, (7, 7, 7), 1)
    assert isinstance(res, Embedding)
    subdividers = [res.mapping[v] for v in range(4, 10)]
    assert len(set(subdividers)) == 6


def test_embed_validates_arguments(k33):
    with pytest.raises(InputError):
        embed_via_good_tuples(k33, 2, (4,), 1)
    with pytest.raises(InputError):
        embed_via_good_tuples(k33, 3, (4, 4, 4), 1)


def test_embed_one_sided_vs_oracle_corpus():
    """The pipeline never succeeds where the subgraph-isomorphism oracle
    fails; both outcomes are tallied."""
    h3 = subdivide_k(complete_graph(3), 1)
    outcomes = {"both": 0, "oracle-only": 0, "neither": 0}
    for g in bipartite_corpus(120, 7, master_seed=41):
        nb = g.side_b_count
        res = embed_via_good_tuples(g, 3, (nb + 1, nb + 1), 1)
        oracle = contains_injective(h3, g.as_graph())
        if isinstance(res, Embedding):
            assert oracle, "pipeline found a copy the oracle denies"
            outcomes["both"] += 1
        elif oracle:
            outcomes["oracle-only"] += 1
        else:
            outcomes["neither"] += 1
    assert outcomes["both"] > 0
    assert outcomes["neither"] > 0


def test_threshold_schedule_matches_recurrence():
    n, t, delta = 10**6, 4, 0.1
    sched = threshold_schedule(n, t, delta)
    assert sched.c == delta / 6**t
    assert sched.delta_schedule[-1] == delta
    for j in range(2, t + 1):
        assert sched.xi[j - 1] == 2 * sched.delta_schedule[j - 2]
        # 3 xi_j = delta / 6^(t-j) for the recurrence steps
        assert abs(3 * sched.xi[j - 1] - delta / 6 ** (t - j)) < 1e-15
    assert all(th >= 1 for th in sched.thresholds)
    # desk-scale reality: the schedule is hopelessly conservative
    assert sched.thresholds[0] <= 2


def test_dichotomy_chain_holds_on_corpus():
    checked = 0
    for g in bipartite_corpus(150, 8, master_seed=43):
        if g.side_a_count == 0 or g.edge_count == 0:
            continue
        half = list(range(0, g.side_a_count, 2))
        for a_prime in (list(range(g.side_a_count)), half):
            if not a_prime:
                continue
            rep = dichotomy_report(g, a_prime, 2)
            # the convexity and degree-cap links of the case split are theorems
            assert rep.k21_convexity_ok
            assert rep.k12_degree_cap_ok
            # the case split is exhaustive: an unbounded instance must
            # violate the corresponding branch inequality with L on the
            # other star count
            if not rep.bounded and rep.k12_count <= rep.k21_count:
                assert rep.c4_count > 2 * rep.k12_count
            checked += 1
    assert checked >= 150
