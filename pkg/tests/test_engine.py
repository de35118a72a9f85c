import pytest

import oracle_suite
from clrp import catalog
from clrp.constraints import ConstraintSet, constraints_from_network, rate_targets
from clrp.engine import (INCONCLUSIVE, NO, YES, SearchConfig, clrp_enumerate, clrp_exists, display_code,
                         prove_rate, prove_region, prove_rep, prove_ss, rate_class, rep_class, validate_witness,
                         witness_rank)
from clrp.generation import ClassTuple, enumerate_class
from clrp.polymatroid import RankVector

U24_VECTOR = RankVector(4, [1, 1, 2, 1, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 2])


def test_empty_constraints_reproduce_the_class():
    c = ClassTuple(3, (2, 2), (0, 1), (0, 3))
    complete, per_r, _, _ = clrp_enumerate(ConstraintSet(3), 2, c)
    plain = enumerate_class(c, 2, 2)
    assert complete
    assert len(per_r[2]) == sum(len(v) for v in plain.values())


def test_threshold_scheme_needs_four_points_on_a_line():
    acc = oracle_suite.threshold_2_of_3()
    assert prove_ss(acc, [1, 1, 1, 1], 3).verdict == YES
    assert prove_ss(acc, [1, 1, 1, 1], 2).verdict == NO


def test_benaloh_is_not_ideal():
    assert prove_ss(catalog.benaloh(), [1] * 5, 2).verdict == NO


def test_uniform_matroid_needs_three_elements_in_the_field():
    assert prove_rep(U24_VECTOR, 2).verdict == NO
    res = prove_rep(U24_VECTOR, 3)
    assert res.verdict == YES
    P, cert = res.witness
    h = witness_rank(P, cert)
    assert all(h(m) == U24_VECTOR.value(m) for m in range(1, 16))


def test_rep_class():
    assert rep_class(U24_VECTOR) == ClassTuple(4, (2, 2), (1,), (4, 4))
    # two parallel elements and a loop
    h = RankVector(3, [1, 1, 1, 0, 1, 1, 1])
    assert rep_class(h) == ClassTuple(3, (1, 1), (0, 1), (1, 1))


def test_relay_region():
    relay = oracle_suite.relay()
    res = prove_region(relay, 2, 1, 2)
    assert res.complete and res.vectors == [(1, 1)]


def test_level_evaluations_add_up():
    res = prove_rate(catalog.fano(), [1] * 7, 2)
    assert sum(s.evaluations for s in res.levels) == res.evaluations
    res = prove_rate(catalog.fano(), [1] * 7, 3)
    assert sum(s.evaluations for s in res.levels) == res.evaluations


def test_fano_dichotomy_and_witness():
    yes = prove_rate(catalog.fano(), [1] * 7, 2)
    assert yes.verdict == YES
    I = constraints_from_network(catalog.fano()).with_targets(rate_targets([1] * 7))
    assert validate_witness(*yes.witness, I, rate_class(catalog.fano(), [1] * 7)) == []
    assert prove_rate(catalog.fano(), [1] * 7, 3).verdict == NO
    blocks = display_code(*yes.witness).split("=" * 29 + "\n")
    assert len([b for b in blocks if b.strip()]) == 7


def test_nonfano_dichotomy():
    assert prove_rate(catalog.nonfano(), [1] * 7, 2).verdict == NO
    assert prove_rate(catalog.nonfano(), [1] * 7, 3).verdict == YES


def test_validate_witness_reports_problems():
    yes = prove_rate(catalog.fano(), [1] * 7, 2)
    P, cert = yes.witness
    I = constraints_from_network(catalog.fano()).with_targets(rate_targets([2] * 7))
    assert validate_witness(P, cert, I)
    c = ClassTuple(7, (4, 4), (1,), (7, 7))
    assert any("ambient" in b for b in validate_witness(P, cert, constraints_from_network(catalog.fano()), c))


def test_deterministic_runs():
    a = prove_rate(catalog.u24(), [1] * 4, 3)
    b = prove_rate(catalog.u24(), [1] * 4, 3)
    assert a.verdict == b.verdict == YES
    assert display_code(*a.witness) == display_code(*b.witness)
    assert [(s.r, s.size, s.simple, s.tested, s.kept, s.evaluations) for s in a.levels] == \
        [(s.r, s.size, s.simple, s.tested, s.kept, s.evaluations) for s in b.levels]


def test_rate_class_ambient_modes():
    c = rate_class(catalog.fano(), [1, 1, 2, 1, 1, 1, 1])
    assert c.r_range == (4, 4) and c.K == (1, 2)
    lit = rate_class(catalog.fano(), [1, 1, 2, 1, 1, 1, 1], literal=True)
    assert lit.r_range == (8, 8)
    # a zero-rate source does not count towards the simple part
    assert rate_class(catalog.fano(), [0, 1, 1, 1, 1, 1, 1]).s_range == (2, 7)


def test_bad_rate_vectors():
    with pytest.raises(ValueError):
        prove_rate(catalog.fano(), [1] * 6, 2)
    with pytest.raises(ValueError):
        prove_rate(catalog.fano(), [1, 1, 1, 1, 1, 1, -1], 2)
    with pytest.raises(ValueError):
        prove_ss(catalog.benaloh(), [1, 1, 1, 1, 0], 2)
    with pytest.raises(ValueError):
        prove_region(catalog.fano(), 2, 0, 3)


def test_budget_gives_inconclusive():
    res = prove_rate(catalog.vamos(), [1] * 8, 2, SearchConfig(max_reps=1))
    assert res.verdict == INCONCLUSIVE and res.note.startswith("budget")
    res = prove_rate(catalog.vamos(), [1] * 8, 2, SearchConfig(timeout=0.0))
    assert res.verdict == INCONCLUSIVE


def test_exists_scans_ambient_dimensions_upwards():
    I = constraints_from_network(catalog.u24()).with_targets(rate_targets([1] * 4))
    res = clrp_exists(I, 3, ClassTuple(4, (1, 3), (1,), (1, 4)))
    assert res.verdict == YES and res.witness[0].r == 2


def test_mdcs_rates():
    assert prove_rate(catalog.mdcs(), [1] * 7, 2).verdict == NO
    assert prove_rate(catalog.mdcs(), [1, 1, 1, 2, 2, 1, 1], 2).verdict == YES
