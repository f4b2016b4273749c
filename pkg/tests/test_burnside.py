from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burnside_fusion.bisets import ExplicitBiset
from burnside_fusion.burnside import (
    BurnsideElement,
    NotInImage,
    OppositeUndefined,
    augmentation,
    cartesian,
    compose,
    from_marks,
    general_fixed_points,
    identity_element,
    is_bifree,
    is_dominant,
    is_p_local,
    marks,
    opposite,
    oracle_compose,
    random_element,
    right_augmentation,
)
from burnside_fusion.catalog import fusion_by_name, group_by_name
from burnside_fusion.characteristic import characteristic_biset_from_group
from burnside_fusion.groups import center, direct_product
from burnside_fusion.pairs import signature


def c3_basis():
    S = group_by_name("C3")
    sig = signature(S, S)
    return (sig, *(BurnsideElement(sig, {c: 1}) for c in sig.basis()))


def elements_strategy(names, bifree=False, terms=4):
    @st.composite
    def build(draw):
        G = group_by_name(draw(st.sampled_from(names)))
        sig = signature(G, G)
        seed = draw(st.integers(0, 2 ** 32 - 1))
        return random_element(sig, np.random.default_rng(seed), terms=terms, bifree=bifree)
    return build()


def test_compose_examples():
    sig, triv, Striv, ident, inv = c3_basis()
    assert compose(ident, inv) == inv
    assert compose(inv, inv) == ident
    assert compose(triv, triv) == 3 * triv
    assert compose(ident + inv, ident + inv) == 2 * (ident + inv)


def test_group_biset_anchor():
    F = fusion_by_name("F(S3,C3)")
    G, emb = F.ambient
    X = characteristic_biset_from_group(G, G.subgroup(emb))
    sig, triv, Striv, ident, inv = c3_basis()
    assert X == ident + inv
    assert augmentation(X) == 2
    assert from_marks(sig, marks(X)) == X
    assert oracle_compose(X, X) == 2 * X


@pytest.mark.parametrize("name", ["C3", "V4", "C4"])
def test_compose_matches_oracle_all_basis_pairs(name):
    G = group_by_name(name)
    sig = signature(G, G)
    elems = [BurnsideElement(sig, {c: 1}) for c in sig.basis()]
    for a in elems:
        for b in elems:
            assert compose(a, b) == oracle_compose(a, b)


def test_compose_matches_oracle_mixed_signature():
    C2, C3, S3 = (group_by_name(n) for n in ("C2", "C3", "S3"))
    left = signature(S3, C3)
    right = signature(C2, S3)
    for a in left.basis():
        for b in right.basis():
            A, B = BurnsideElement(left, {a: 1}), BurnsideElement(right, {b: 1})
            assert compose(A, B) == oracle_compose(A, B)


@given(elements_strategy(["D8", "Q8"], terms=2), st.integers(0, 2 ** 32 - 1))
def test_compose_matches_oracle_random(X, seed):
    Y = random_element(X.sig, np.random.default_rng(seed), terms=2)
    assert compose(X, Y) == oracle_compose(X, Y)


@given(elements_strategy(["S3", "D8", "V4"], terms=3), st.integers(0, 2 ** 32 - 1))
def test_associativity_and_unit(X, seed):
    rng = np.random.default_rng(seed)
    Y = random_element(X.sig, rng, terms=3)
    Z = random_element(X.sig, rng, terms=3)
    assert compose(compose(X, Y), Z) == compose(X, compose(Y, Z))
    one = identity_element(X.sig.G)
    assert compose(one, X) == X == compose(X, one)


@given(elements_strategy(["C3", "V4", "S3", "D8", "Q8", "C3xC3"], terms=5))
def test_marks_round_trip(X):
    assert from_marks(X.sig, marks(X)) == X


def test_from_marks_edges():
    sig, triv, Striv, ident, inv = c3_basis()
    assert from_marks(sig, [0] * 4) == BurnsideElement.zero(sig)
    with pytest.raises(NotInImage):
        from_marks(sig, [1, 2, 3])
    with pytest.raises(NotInImage):
        from_marks(sig, marks(ident * Fraction(1, 3)), p=3)
    with pytest.raises(NotInImage):
        from_marks(sig, marks(ident * Fraction(1, 2)), integral=True)


def test_augmentation_examples():
    sig, triv, Striv, ident, inv = c3_basis()
    assert (augmentation(triv), right_augmentation(triv)) == (3, 3)
    assert (augmentation(Striv), right_augmentation(Striv)) == (1, 3)


@given(elements_strategy(["V4", "S3", "D8"], bifree=True))
def test_bifree_augmentations_and_opposite(X):
    assert augmentation(X) == right_augmentation(X)
    assert right_augmentation(opposite(X)) == augmentation(X)
    assert opposite(opposite(X)) == X


@given(elements_strategy(["S3", "D8", "Q8"], bifree=True, terms=3), st.integers(0, 2 ** 32 - 1))
def test_opposite_antihomomorphism(X, seed):
    Y = random_element(X.sig, np.random.default_rng(seed), terms=3, bifree=True)
    assert opposite(compose(Y, X)) == compose(opposite(X), opposite(Y))
    sym = compose(opposite(X), X)
    assert opposite(sym) == sym


def test_opposite_examples():
    sig, triv, Striv, ident, inv = c3_basis()
    assert opposite(ident) == ident
    assert opposite(inv) == inv
    with pytest.raises(OppositeUndefined):
        opposite(Striv)


def test_predicates():
    sig, triv, Striv, ident, inv = c3_basis()
    assert not is_bifree(Striv) and not is_dominant(Striv)
    half = Fraction(1, 2) * (ident + inv)
    assert is_p_local(half, 3) and is_dominant(half)
    S2 = group_by_name("C2")
    assert not is_p_local(Fraction(1, 2) * identity_element(S2), 2)
    assert not is_dominant(triv)


def test_cartesian_examples():
    sig, triv, Striv, ident, inv = c3_basis()
    S = sig.G
    SS = direct_product(S, S)
    prod = cartesian(ident, ident, oracle=True)
    assert prod == identity_element(SS)
    mixed = cartesian(triv, ident, oracle=True)
    (cls,) = mixed.support()
    assert cls.K.order == 3 and sorted(x % 3 for x in cls.K.members) == [0, 1, 2]


@given(elements_strategy(["C2", "C3", "V4"], terms=2), elements_strategy(["C2", "C3"], terms=2))
def test_cartesian_oracle_and_augmentation(X, Y):
    Z = cartesian(X, Y, oracle=True)
    assert augmentation(Z) == augmentation(X) * augmentation(Y)


def test_general_fixed_points():
    sig, triv, Striv, ident, inv = c3_basis()
    X = ident + 2 * triv
    assert general_fixed_points(X, []) == 3 + 2 * 9
    for cls in sig.basis():
        pairs = [(int(v), int(k)) for k, v in zip(cls.K.members, cls.phi.images)]
        assert general_fixed_points(X, pairs) == marks(X)[sig.index(cls)]
    D = group_by_name("D8")
    one = identity_element(D)
    z = [int(g) for g in center(D).members if g]
    assert general_fixed_points(one, [(0, g) for g in z]) == 0
    # a central element acting on both sides of [S, id] fixes every point
    assert general_fixed_points(one, [(g, g) for g in z]) == D.order


def test_explicit_biset_tensor_matches_compose():
    D = group_by_name("D8")
    sig = signature(D, D)
    rng = np.random.default_rng(3)
    for _ in range(5):
        X = random_element(sig, rng, terms=2, low=1, high=2)
        Y = random_element(sig, rng, terms=2, low=1, high=2)
        bx = ExplicitBiset.from_counts(sig, {c: int(v) for c, v in X.terms.items()})
        by = ExplicitBiset.from_counts(sig, {c: int(v) for c, v in Y.terms.items()})
        got = BurnsideElement(sig, dict(bx.tensor(by).decompose(sig)))
        assert got == compose(X, Y)
