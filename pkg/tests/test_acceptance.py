"""Acceptance criteria 1-10; each prints one PASS/FAIL line in the terminal summary."""
import time
from fractions import Fraction

import numpy as np
import pytest
from sympy.polys.matrices import DomainMatrix
from sympy import QQ

from burnside_fusion.bideflation import bideflate, quotient_data, quotient_idempotent_check
from burnside_fusion.burnside import (
    BurnsideElement,
    augmentation,
    compose,
    from_marks,
    identity_element,
    is_bifree,
    marks,
    opposite,
    oracle_compose,
    random_element,
)
from burnside_fusion.catalog import ROUND_TRIP, catalog_names, cyclic, fusion_by_name, group_by_name
from burnside_fusion.characteristic import (
    characteristic_biset_from_group,
    characteristic_idempotent,
    congruence_suite,
    frobenius_check_composite,
    frobenius_check_marks,
    saturated_from_element,
)
from burnside_fusion.fusion import is_saturated, validate
from burnside_fusion.induced import (
    fix_fusion,
    full_stabilizer,
    is_right_F_stable,
    left_stabilizer,
    orb_fusion,
    right_stabilizer,
    universal_stable_check,
)
from burnside_fusion.pairs import mark, signature
from oracles import subconjugate

RESULTS: dict[int, tuple[bool, str]] = {}
CATALOG_GROUPS = ["C2", "C3", "V4", "C4", "D8", "Q8", "C3xC3"]


def record(n, ok, note):
    RESULTS[n] = (bool(ok), note)
    assert ok, note


def rng_for(n):
    return np.random.default_rng(1000 + n)


def ambient_biset(F):
    G, emb = F.ambient
    return characteristic_biset_from_group(G, G.subgroup(emb))


def stable_projector(F):
    """omega_F, or a p-integral multiple of the stable solution when F is not saturated."""
    solved = characteristic_idempotent(F)
    if solved.status == "ok":
        return solved.element
    return int(np.lcm.reduce(solved.denominators)) * solved.element


def test_criterion_1_round_trip():
    start = time.perf_counter()
    bad = []
    for name in ROUND_TRIP:
        F = fusion_by_name(name)
        solved = characteristic_idempotent(F)
        w = solved.element
        ok = (
            solved.status == "ok"
            and is_bifree(w)
            and augmentation(w) == 1
            and compose(w, w) == w
            and opposite(w) == w
            and frobenius_check_marks(w)
            and frobenius_check_composite(w)
            and full_stabilizer(w, F.p) == F
        )
        if not ok:
            bad.append(name)
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 120, f"{len(ROUND_TRIP)} systems, failures {bad}, {elapsed:.1f}s")


def test_criterion_2_unsaturated():
    F = fusion_by_name("swap-V4-unsaturated")
    verdict = is_saturated(F)
    solved = characteristic_idempotent(F)
    ok = not verdict.saturated and verdict.reason == "I_S fails" and solved.status == "infeasible-at-p"
    record(2, ok, f"verdict {verdict.reason!r}, solver {solved.status!r}")


def test_criterion_3_saturation_from_element():
    F = fusion_by_name("F(S3,C3)")
    res = saturated_from_element(characteristic_idempotent(F).element, 3)
    ok = res.verdict == "saturated" and res.fusion == F
    notes = [f"omega -> {res.verdict}"]
    for name, p in (("C3", 3), ("C2", 2), ("V4", 2), ("D8", 2)):
        S = group_by_name(name)
        sig = signature(S, S)
        striv = next(c for c in sig.basis() if c.K == S.whole and c.phi.image.order == 1)
        X = BurnsideElement(sig, {striv: 1})
        rej = saturated_from_element(X, p)
        frob = frobenius_check_marks(X) and frobenius_check_composite(X)
        ok = ok and frob and rej.verdict == "rejected" and {"not bifree", "not dominant"} <= set(rej.reasons)
        notes.append(f"[{name},triv] -> {rej.reasons}")
    record(3, ok, "; ".join(notes))


def test_criterion_4_numeric_anchors():
    F = fusion_by_name("F(S3,C3)")
    S = F.S
    sig = signature(S, S)
    _, _, ident, inv = (BurnsideElement(sig, {c: 1}) for c in sig.basis())
    X = ambient_biset(F)
    ok = X == ident + inv and augmentation(X) == 2
    ok = ok and characteristic_idempotent(F).element == Fraction(1, 2) * (ident + inv)
    for p in (2, 3):
        C = cyclic(p)
        csig = signature(C, C)
        triv = next(c for c in csig.basis() if c.K.order == 1)
        omega = identity_element(C) + (p - 1) * BurnsideElement(csig, {triv: 1})
        Y = bideflate(omega, C.whole, oracle=True)
        Q = quotient_data(C.whole).group
        ok = ok and Y == p * identity_element(Q) and augmentation(Y) == p
    record(4, ok, "[G]=[S,id]+[S,inv], omega=1/2(...), bidef = p[1,id] for p=2,3")


def test_criterion_5_oracle_equivalence():
    checked = 0
    ok = True
    for name in ("C3", "V4", "C4"):
        G = group_by_name(name)
        sig = signature(G, G)
        elems = [BurnsideElement(sig, {c: 1}) for c in sig.basis()]
        for a in elems:
            for b in elems:
                ok = ok and compose(a, b) == oracle_compose(a, b)
                checked += 1
    rng = rng_for(5)
    for name in ("D8", "Q8"):
        G = group_by_name(name)
        sig = signature(G, G)
        for _ in range(50):
            a = random_element(sig, rng, terms=2)
            b = random_element(sig, rng, terms=2)
            ok = ok and compose(a, b) == oracle_compose(a, b)
            checked += 1
    record(5, ok, f"{checked} products compared")


def test_criterion_6_mark_integrity():
    ok = True
    sizes = {}
    for name in CATALOG_GROUPS:
        G = group_by_name(name)
        M = signature(G, G).mark_matrix()
        dm = DomainMatrix([[QQ(int(v)) for v in row] for row in M.tolist()], M.shape, QQ)
        sizes[name] = M.shape[0]
        ok = ok and dm.rank() == M.shape[0]
    rng = rng_for(6)
    for i in range(100):
        G = group_by_name(CATALOG_GROUPS[i % len(CATALOG_GROUPS)])
        sig = signature(G, G)
        X = random_element(sig, rng, terms=4) * Fraction(1, 1 + i % 4)
        v = marks(X)
        ok = ok and from_marks(sig, v) == X and marks(from_marks(sig, v)) == v
    vanish = 0
    for name in ("C3", "V4"):
        G = group_by_name(name)
        sig = signature(G, G)
        for a in sig.basis():
            for b in sig.basis():
                if not subconjugate(sig, (a.K, a.phi), (b.K, b.phi)):
                    ok = ok and mark(a, b) == 0
                    vanish += 1
    record(6, ok, f"full rank {sizes}; 100 round trips; {vanish} vanishing marks")


def test_criterion_7_congruences():
    rng = rng_for(7)
    bad = []
    total = 0
    for name in catalog_names():
        F = fusion_by_name(name)
        bisets = [ambient_biset(F)] if F.ambient is not None else [identity_element(F.S)]
        w = stable_projector(F)
        for i in range(100):
            y = random_element(w.sig, rng, terms=3, bifree=i % 2 == 0)
            x = compose(compose(w, y), w)
            bisets.append(x)
        for X in bisets:
            total += 1
            rep = congruence_suite(X, F.p)
            if not rep.ok:
                bad.append((name, [c.name for c in rep.failures()]))
    record(7, not bad, f"{total} elements, failures {bad[:3]}")


def test_criterion_8_quotient():
    F = fusion_by_name("F(S3xC3,C3xC3)")
    rep = quotient_idempotent_check(F, F.S.subgroup([0, 1, 2]), with_powers=False)
    ok = rep.equal
    for name in catalog_names(saturated_only=True):
        G = fusion_by_name(name)
        ok = ok and quotient_idempotent_check(G, G.S.whole, with_powers=False).equal
    record(8, ok, "1xC3 in S3xC3 and T = S for every saturated catalog system")


def test_criterion_9_universal_stable():
    rng = rng_for(9)
    counter = 0
    stable_random = 0
    for name in catalog_names(saturated_only=True):
        F = fusion_by_name(name)
        w = characteristic_idempotent(F).element
        for _ in range(100):
            x = random_element(w.sig, rng, terms=3)
            stable_random += is_right_F_stable(x, F, route="marks")
            if not universal_stable_check(x, w, F, "right"):
                counter += 1
        for _ in range(20):
            x = compose(random_element(w.sig, rng, terms=3), w)
            if not (is_right_F_stable(x, F) and compose(x, w) == x and universal_stable_check(x, w, F, "right")):
                counter += 1
    record(9, counter == 0, f"{counter} counterexamples; {stable_random} random x happened to be stable")


def test_criterion_10_structural():
    rng = rng_for(10)
    failures = 0
    for name in CATALOG_GROUPS:
        G = group_by_name(name)
        sig = signature(G, G)
        p = 3 if G.order % 3 == 0 else 2
        for _ in range(100):
            X = random_element(sig, rng, terms=3, bifree=True)
            Y = random_element(sig, rng, terms=3, bifree=True)
            failures += orb_fusion(X, p) != fix_fusion(X, p)
            failures += opposite(opposite(X)) != X
            failures += opposite(compose(X, Y)) != compose(opposite(Y), opposite(X))
        for _ in range(10):
            X = random_element(sig, rng, terms=3)
            for F in (right_stabilizer(X, p), left_stabilizer(X, p), full_stabilizer(X, p)):
                failures += bool(validate(F))
    record(10, failures == 0, f"{failures} failures over {len(CATALOG_GROUPS)} groups")


@pytest.fixture(scope="module", autouse=True)
def _summary(request):
    yield
    request.config._acceptance_results = dict(RESULTS)
