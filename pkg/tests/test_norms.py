"""Finite quotients of SL2, conjugation closures, BFS word norms, experiments."""

import math
import random

import pytest

from sl2units.errors import (
    DegenerateQuotient,
    GeneratorsNotClosed,
    MixedRings,
    QuotientTooLarge,
    VerificationFailed,
)
from sl2units.lemma import find_unit
from sl2units.norms import (
    FiniteGroupTable,
    NormTable,
    bfs_norm,
    check_norm_axioms,
    conjugation_closure,
    lemma_bound_experiment,
)
from sl2units.rings import PrincipalIdeal, integers, localized, parse_element, quadratic, quotient
from sl2units.sl2 import elem12, elem21, identity, parse_matrix
from tests.conftest import random_sl2

Z = integers()
Zh = localized(2)
R2 = quadratic(2)


def _table(ring, gen_text, cap=10**6):
    return FiniteGroupTable(quotient(PrincipalIdeal(parse_element(ring, gen_text))), cap)


# ---------------------------------------------------------------------------
# group tables


@pytest.mark.parametrize("p,order", [(2, 6), (3, 24), (5, 120), (7, 336), (11, 1320)])
def test_group_order_prime(p, order):
    assert p * (p * p - 1) == order  # the order formula itself
    assert len(_table(Z, str(p))) == order


def test_group_order_composite_and_extensions():
    assert len(_table(Z, "6")) == 144  # SL2(Z/6) = SL2(Z/2) x SL2(Z/3)
    assert len(_table(Zh, "3")) == 24
    assert len(_table(R2, "3")) == 720  # SL2(F9) = 9 * 80
    assert len(_table(R2, "sqrt(2)")) == 6  # residue field F2


def test_table_cap():
    with pytest.raises(QuotientTooLarge):
        _table(Z, "101", cap=10**6)  # 101^3 > 10^6
    _table(Z, "97", cap=10**6)  # 97^3 fits


def test_table_group_laws(rng):
    table = _table(Z, "3")
    elems = list(table)
    for _ in range(50):
        g = rng.choice(elems)
        h = rng.choice(elems)
        assert table.mul(g, table.inv(g)) == table.identity
        assert table.mul(g, h) in table
        assert table.conj(g, h) == table.mul(table.mul(g, h), table.inv(g))


def test_from_matrix_respects_reduction(rng):
    table = _table(Zh, "9")
    for _ in range(20):
        a = random_sl2(Zh, rng)
        b = random_sl2(Zh, rng)
        assert table.from_matrix(a * b) == table.mul(table.from_matrix(a), table.from_matrix(b))


def test_transvection_images():
    table = _table(Z, "5")
    g = table.transvection("12", Z.from_int(7))
    assert g == table.from_matrix(elem12(Z.from_int(7)))
    assert table.transvection("12", Z.from_int(5)) == table.identity
    with pytest.raises(ValueError):
        table.transvection("13", Z.one())


# ---------------------------------------------------------------------------
# conjugation closure


def test_closure_sizes():
    t2 = _table(Z, "2")
    gens2 = conjugation_closure(t2, [t2.from_matrix(elem12(Z.one()))])
    assert len(gens2) == 3  # the three transvections of SL2(F2)

    t5 = _table(Z, "5")
    gens5 = conjugation_closure(t5, [t5.from_matrix(elem12(Z.one()))])
    assert len(gens5) == 12


def test_closure_invariant_under_full_conjugation():
    table = _table(Z, "3")
    gens = conjugation_closure(table, [table.from_matrix(elem12(Z.one()))])
    for g in table:
        for a in gens:
            assert table.conj(g, a) in gens
    assert all(table.inv(a) in gens for a in gens)


def test_closure_of_central_element_is_tiny():
    table = _table(Z, "5")
    minus_i = table.from_matrix(parse_matrix(Z, "[[-1,0],[0,-1]]"))
    # -I is central: its closure is itself (it is its own inverse)
    assert conjugation_closure(table, [minus_i]) == frozenset({minus_i})


# ---------------------------------------------------------------------------
# BFS norms and the axiom report


def test_bfs_norm_oracles():
    table = _table(Z, "5")
    e12 = table.from_matrix(elem12(Z.one()))
    gens = conjugation_closure(table, [e12, table.inv(e12)])
    minus_i = table.from_matrix(parse_matrix(Z, "[[-1,0],[0,-1]]"))
    assert bfs_norm(table, gens, table.identity) == 0
    assert bfs_norm(table, gens, e12) == 1
    assert bfs_norm(table, gens, minus_i) == 3


def test_bfs_norm_requires_closed_generators():
    table = _table(Z, "5")
    e12 = table.from_matrix(elem12(Z.one()))
    with pytest.raises(GeneratorsNotClosed):
        bfs_norm(table, {e12}, table.identity)


def test_norm_table_matches_bfs():
    table = _table(Z, "3")
    e12 = table.from_matrix(elem12(Z.one()))
    gens = conjugation_closure(table, [e12])
    norms = NormTable(table, gens)
    for g in list(table)[::5]:
        assert norms.length(g) == bfs_norm(table, gens, g)


def test_norm_table_unreachable_is_inf():
    table = _table(Z, "5")
    minus_i = table.from_matrix(parse_matrix(Z, "[[-1,0],[0,-1]]"))
    norms = NormTable(table, conjugation_closure(table, [minus_i]))
    assert norms.length(minus_i) == 1
    assert norms.length(table.from_matrix(elem12(Z.one()))) == math.inf
    # the axioms hold even with unreachable elements (inf arithmetic)
    report = check_norm_axioms(norms)
    assert report.all_passed


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_axioms_pass_on_primes(p):
    table = _table(Z, str(p))
    e12 = table.from_matrix(elem12(Z.one()))
    gens = conjugation_closure(table, [e12, table.inv(e12)])
    report = check_norm_axioms(NormTable(table, gens))
    assert report.all_passed
    assert [c.passed for c in report.checks] == [True] * 4


def test_axioms_fail_with_counterexample():
    table = _table(Z, "2")
    fake = {g: 0 for g in table}  # constant zero breaks separation
    report = check_norm_axioms(table, lengths=fake)
    assert not report.all_passed
    assert not report.separation.passed
    assert report.separation.counterexample is not None
    assert report.symmetry.passed  # constant functions stay symmetric


def test_scalar_norm_is_conjugation_invariant():
    table = _table(Z, "5")
    e12 = table.from_matrix(elem12(Z.one()))
    gens = conjugation_closure(table, [e12, table.inv(e12)])
    norms = NormTable(table, gens)
    minus_i = table.from_matrix(parse_matrix(Z, "[[-1,0],[0,-1]]"))
    n = norms.length(minus_i)
    assert all(norms.length(table.conj(g, minus_i)) == n for g in table)


# ---------------------------------------------------------------------------
# the 4-ball experiment


def _experiment(modulus, samples=50, seed=7, **kw):
    A = elem21(Zh.from_int(3))
    cert = find_unit(Zh.from_int(3))
    return lemma_bound_experiment(
        A, cert, PrincipalIdeal(Zh.from_int(modulus)), samples, rng=random.Random(seed), **kw
    )


def test_experiment_bound_holds_mod_11():
    report = _experiment(11)
    assert report.nontrivial_count == 50
    assert report.all_within_bound
    assert report.max_norm <= 4
    assert sum(report.histogram.values()) == 50
    assert len(report.samples) == 50
    assert report.group_order == 1320


def test_experiment_degenerate_strict():
    # 64^8 - 1 = 2^48 - 1 is divisible by 5, so the scaled ideal dies mod 5
    with pytest.raises(DegenerateQuotient):
        _experiment(5)


def test_experiment_degenerate_vacuous():
    report = _experiment(5, samples=30, require_nontrivial=False)
    assert report.trivial_count == 30
    assert report.nontrivial_count == 0
    assert report.all_within_bound
    assert report.samples == ()


def test_experiment_unit_corner():
    A = elem21(Zh.from_int(1))
    cert = find_unit(Zh.from_int(1))
    report = lemma_bound_experiment(
        A, cert, PrincipalIdeal(Zh.from_int(7)), 25, rng=random.Random(3)
    )
    assert report.all_within_bound and report.nontrivial_count == 25


def test_experiment_rejects_mismatched_certificate():
    cert = find_unit(Zh.from_int(3))
    with pytest.raises(VerificationFailed):
        lemma_bound_experiment(
            elem21(Zh.from_int(1)), cert, PrincipalIdeal(Zh.from_int(11)), 5
        )


def test_experiment_rejects_mixed_rings():
    cert = find_unit(Zh.from_int(3))
    with pytest.raises(MixedRings):
        lemma_bound_experiment(
            elem21(Zh.from_int(3)), cert, PrincipalIdeal(Z.from_int(11)), 5
        )


def test_experiment_respects_table_cap():
    with pytest.raises(QuotientTooLarge):
        _experiment(11, table_cap=100)
