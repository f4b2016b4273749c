from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burnside_fusion.burnside import BurnsideElement, compose, identity_element, mark_at, opposite, random_element
from burnside_fusion.catalog import catalog_names, fusion_by_name, group_by_name
from burnside_fusion.characteristic import characteristic_idempotent
from burnside_fusion.fusion import is_saturated, minimal_fusion, validate
from burnside_fusion.groups import GroupHom, homomorphisms
from burnside_fusion.induced import (
    fix_fusion,
    full_stabilizer,
    is_F_generated,
    is_fully_F_stable,
    is_left_F_stable,
    is_right_F_stable,
    left_stabilizer,
    orb_fusion,
    pre_fix,
    pre_orb,
    right_stabilizer,
    universal_stable_check,
)
from burnside_fusion.pairs import signature

SATURATED = catalog_names(saturated_only=True)


def c3_elements():
    S = group_by_name("C3")
    sig = signature(S, S)
    return sig, *(BurnsideElement(sig, {c: 1}) for c in sig.basis())


def test_stability_examples():
    F = fusion_by_name("F(S3,C3)")
    sig, triv, Striv, ident, inv = c3_elements()
    w = Fraction(1, 2) * (ident + inv)
    assert is_fully_F_stable(w, F)
    assert not is_right_F_stable(ident, F)
    assert not is_left_F_stable(ident, F)
    minimal = fusion_by_name("F(C3)")
    for X in (triv, Striv, ident, inv, w):
        assert is_fully_F_stable(X, minimal)


def test_generation_examples():
    F = fusion_by_name("F(S3,C3)")
    minimal = fusion_by_name("F(C3)")
    sig, triv, Striv, ident, inv = c3_elements()
    assert is_F_generated(ident, F) and is_F_generated(ident, minimal)
    assert not is_F_generated(inv, minimal)
    assert is_F_generated(ident + inv, F)


def test_stabilizer_examples():
    sig, triv, Striv, ident, inv = c3_elements()
    S = sig.G
    assert right_stabilizer(ident, 3) == minimal_fusion(S, 3)
    w = Fraction(1, 2) * (ident + inv)
    F = fusion_by_name("F(S3,C3)")
    assert right_stabilizer(w, 3) == F
    assert left_stabilizer(w, 3, cross_check=True) == F
    assert full_stabilizer(w, 3) == F


def test_fix_and_orb_examples():
    sig, triv, Striv, ident, inv = c3_elements()
    orb = pre_orb(ident, 3)
    S = sig.G
    assert orb.homs[S.whole] == frozenset({(0, 1, 2)})
    assert all(not imgs for P, imgs in orb.homs.items() if P != S.whole)
    F = fusion_by_name("F(S3,C3)")
    w = characteristic_idempotent(F).element
    assert pre_fix(w, 3) == F and fix_fusion(w, 3) == F and orb_fusion(w, 3) == F


@pytest.mark.parametrize("name", ["V4", "S3", "D8", "Q8", "C4"])
def test_orb_equals_fix_random(name, rng):
    G = group_by_name(name)
    sig = signature(G, G)
    p = 3 if name == "S3" else 2
    for _ in range(20):
        X = random_element(sig, rng, terms=3, bifree=True)
        assert orb_fusion(X, p) == fix_fusion(X, p)
        assert fix_fusion(X, p) == fix_fusion(opposite(X), p)


@given(st.sampled_from(["S3", "D8", "V4", "Q8"]), st.integers(0, 2 ** 32 - 1))
def test_stabilizers_are_fusion_systems(name, seed):
    G = group_by_name(name)
    sig = signature(G, G)
    X = random_element(sig, np.random.default_rng(seed), terms=3)
    for F in (right_stabilizer(X), left_stabilizer(X), full_stabilizer(X)):
        assert validate(F) == []


@given(st.sampled_from(["S3", "D8", "V4"]), st.integers(0, 2 ** 32 - 1))
def test_symmetric_stabilizers_agree(name, seed):
    G = group_by_name(name)
    sig = signature(G, G)
    X = random_element(sig, np.random.default_rng(seed), terms=3, bifree=True)
    sym = X + opposite(X)
    assert right_stabilizer(sym) == left_stabilizer(sym) == full_stabilizer(sym)


@given(st.sampled_from(["D8", "V4", "S3"]), st.integers(0, 2 ** 32 - 1))
def test_marks_constant_on_stabilizer(name, seed):
    G = group_by_name(name)
    sig = signature(G, G)
    rng = np.random.default_rng(seed)
    X = random_element(sig, rng, terms=3)
    X = X + compose(X, identity_element(G))
    F = right_stabilizer(X)
    for P in G.subgroups():
        for img in F.homs[P]:
            phi = GroupHom(P, G, img)
            inv = phi.inverse()
            for psi in homomorphisms(P, G):
                assert mark_at(X, P, psi) == mark_at(X, inv.source, psi.compose(inv))


@pytest.mark.parametrize("name", ["F(S3,C3)", "F(A4,V4)", "F(D8)", "F(S4,D8)"])
def test_both_routes_on_random(name, rng):
    F = fusion_by_name(name)
    sig = signature(F.S, F.S)
    w = characteristic_idempotent(F).element
    for _ in range(5):
        y = random_element(sig, rng, terms=3)
        assert is_right_F_stable(compose(y, w), F, route="both")
        assert is_left_F_stable(compose(w, y), F, route="both")
        is_right_F_stable(y, F, route="both")


@pytest.mark.parametrize("name", SATURATED)
def test_universal_stable_element(name, rng):
    F = fusion_by_name(name)
    sig = signature(F.S, F.S)
    w = characteristic_idempotent(F).element
    assert universal_stable_check(w, w, F)
    assert universal_stable_check(identity_element(F.S), w, F)
    if w != identity_element(F.S):
        assert not is_right_F_stable(identity_element(F.S), F)
    for _ in range(5):
        y = random_element(sig, rng, terms=3)
        assert universal_stable_check(y, w, F, "right")
        assert universal_stable_check(y, w, F, "left")
        assert compose(compose(y, w), w) == compose(y, w)


def test_stabilizer_of_characteristic_is_saturated():
    for name in SATURATED:
        F = fusion_by_name(name)
        w = characteristic_idempotent(F).element
        assert is_saturated(full_stabilizer(w, F.p))
