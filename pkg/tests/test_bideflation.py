from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from burnside_fusion.bideflation import (
    IncompatibleClass,
    bidef_augmentation_check,
    bidef_composition_check,
    bidef_m_check,
    bideflate,
    find_composition_failure,
    is_compatible,
    oracle_bideflate_class,
    quotient_data,
    quotient_idempotent_check,
)
from burnside_fusion.burnside import BurnsideElement, augmentation, compose, identity_element, random_element
from burnside_fusion.catalog import catalog_names, cyclic, fusion_by_name, group_by_name
from burnside_fusion.characteristic import idempotent_of, is_characteristic
from burnside_fusion.fusion import is_strongly_closed, minimal_fusion
from burnside_fusion.pairs import signature


def omega_example(p):
    S = cyclic(p)
    sig = signature(S, S)
    triv = next(c for c in sig.basis() if c.K.order == 1)
    return S, identity_element(S) + (p - 1) * BurnsideElement(sig, {triv: 1})


@pytest.mark.parametrize("p", [2, 3])
def test_bideflate_to_trivial_group(p):
    S, X = omega_example(p)
    Y = bideflate(X, S.whole, oracle=True)
    Q = quotient_data(S.whole).group
    assert Q.order == 1
    assert Y == p * identity_element(Q)
    assert augmentation(Y) == p
    trivial = minimal_fusion(Q, p)
    assert not is_characteristic(Y, trivial, frobenius=False).characteristic


def test_bideflate_by_trivial_subgroup():
    D = group_by_name("D8")
    sig = signature(D, D)
    X = random_element(sig, np.random.default_rng(1), terms=5)
    Y = bideflate(X, D.trivial)
    assert len(Y.sig.basis()) == len(sig.basis())
    assert {tuple(sorted(map(str, Y.terms.values())))} == {tuple(sorted(map(str, X.terms.values())))}


@pytest.mark.parametrize("name", ["C4", "D8", "Q8", "V4", "C3xC3"])
def test_bideflate_matches_oracle_on_compatible_classes(name):
    S = group_by_name(name)
    sig = signature(S, S)
    for T in S.subgroups():
        if not T.is_normal():
            continue
        for cls in sig.basis():
            if is_compatible(cls, T):
                assert bideflate(BurnsideElement(sig, {cls: 1}), T, oracle=True)
            else:
                with pytest.raises(IncompatibleClass):
                    bideflate(BurnsideElement(sig, {cls: 1}), T)
                with pytest.raises(IncompatibleClass):
                    oracle_bideflate_class(cls, T)


def test_quotient_idempotent_s3xc3():
    F = fusion_by_name("F(S3xC3,C3xC3)")
    T = F.S.subgroup([0, 1, 2])
    rep = quotient_idempotent_check(F, T)
    assert rep.equal and rep.part_a
    assert sorted(rep.bideflated.terms.values()) == [Fraction(1, 2), Fraction(1, 2)]
    assert bidef_m_check(idempotent_of(F), T)


@pytest.mark.parametrize("name", catalog_names(saturated_only=True))
def test_quotient_by_whole_group(name):
    F = fusion_by_name(name)
    rep = quotient_idempotent_check(F, F.S.whole)
    Q = quotient_data(F.S.whole).group
    assert rep.equal and rep.bideflated == identity_element(Q)
    assert rep.part_a is not False


def test_augmentation_identity():
    F = fusion_by_name("F(S4,D8)")
    S = F.S
    w = idempotent_of(F)
    for T in S.subgroups():
        if T.is_normal() and is_strongly_closed(F, T):
            rep = bidef_augmentation_check(w, T, F)
            assert rep["classes_ok"]
            if rep["m_hypothesis"]:
                assert rep["quotient_characteristic"]


def test_augmentation_unchanged_when_t_inside():
    S, X = omega_example(3)
    rep = bidef_augmentation_check(identity_element(S), S.whole)
    assert rep["classes_ok"]
    assert augmentation(bideflate(identity_element(S), S.whole)) == augmentation(identity_element(S))
    rep = bidef_augmentation_check(X, S.whole)
    assert rep["classes_ok"]


@given(st.sampled_from(["F(S4,D8)", "F(D8)", "F(Q8)", "F(S3xC3,C3xC3)"]), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25)
def test_random_generated_elements(name, seed):
    F = fusion_by_name(name)
    w = idempotent_of(F)
    rng = np.random.default_rng(seed)
    pool = [c for c in w.sig.basis() if c.injective and F.contains(c.phi)]
    X = random_element(w.sig, rng, terms=3, pool=pool)
    for T in F.S.subgroups():
        if T.is_normal() and is_strongly_closed(F, T):
            assert bidef_augmentation_check(X, T)["classes_ok"]
            assert bidef_m_check(X, T)


def test_composition_under_hypothesis(rng):
    S = group_by_name("D8")
    sig = signature(S, S)
    for T in S.subgroups():
        if not T.is_normal():
            continue
        pool = [c for c in sig.basis() if is_compatible(c, T) and T <= c.K]
        for _ in range(10):
            a = pool[rng.integers(len(pool))]
            b = pool[rng.integers(len(pool))]
            hyp, equal = bidef_composition_check(a, b, T)
            assert hyp and equal
    ident = sig.basis()[-1]
    assert bidef_composition_check(ident, ident, S.whole) == (True, True)


def test_composition_failure_search():
    S = group_by_name("D8")
    Z = next(T for T in S.subgroups() if T.order == 2 and T.is_normal())
    a, b = find_composition_failure(S, Z)
    hyp, equal = bidef_composition_check(a, b, Z)
    assert not hyp and not equal
    lhs = bideflate(compose(BurnsideElement(a.sig, {a: 1}), BurnsideElement(b.sig, {b: 1})), Z)
    rhs = compose(bideflate(BurnsideElement(a.sig, {a: 1}), Z), bideflate(BurnsideElement(b.sig, {b: 1}), Z))
    assert augmentation(lhs) != augmentation(rhs)
