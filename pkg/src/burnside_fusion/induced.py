"""Fusion systems induced by an element X of A(S, S), and F-stability tests.

Stability is decided twice: once by composing in A(P, S) or A(S, P), and
once through marks.  The two must agree.
"""
from __future__ import annotations

import numpy as np

from .burnside import BurnsideElement, compose, is_bifree, mark_at, opposite
from .fusion import FusionSystem, PreFusionSystem, closure, validate
from .groups import FiniteGroup, GroupHom, Subgroup, embedding, group_from_subgroup, homomorphisms
from .pairs import canonicalize, signature


class RouteDisagreement(RuntimeError):
    pass


class NotBifree(ValueError):
    pass


def infer_prime(S: FiniteGroup, default: int = 2) -> int:
    n = S.order
    for q in range(2, n + 1):
        if n % q == 0:
            return q
    return default


def _square(X: BurnsideElement) -> FiniteGroup:
    if X.sig.G is not X.sig.H:
        raise ValueError("element must lie in A(S, S)")
    return X.sig.G


def _sub_as_group(P: Subgroup) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """P as its own group, its embedding into S, and the partial inverse."""
    Pg = group_from_subgroup(P)
    emb = embedding(Pg, P.group)
    back = np.full(P.group.order, -1, dtype=np.int64)
    back[emb] = np.arange(Pg.order)
    return Pg, emb, back


# -- mark-coordinate predicates ------------------------------------------------

def right_violation(X: BurnsideElement, F: PreFusionSystem):
    """First (Q, psi, phi) with Phi_<Q,psi>(X) != Phi_<phi(Q), psi phi^-1>(X), or None."""
    S = _square(X)
    for Q in S.subgroups():
        psis = homomorphisms(Q, S)
        for img in sorted(F.homs[Q]):
            phi = GroupHom(Q, S, img)
            inv = phi.inverse()
            R = inv.source
            for psi in psis:
                if mark_at(X, Q, psi) != mark_at(X, R, psi.compose(inv)):
                    return {"Q": list(Q.members), "psi": list(psi.images), "phi": list(img)}
    return None


def left_violation(X: BurnsideElement, F: PreFusionSystem):
    """First (R, chi, phi) with Phi_<R,chi>(X) != Phi_<R, phi chi>(X), or None."""
    S = _square(X)
    for R in S.subgroups():
        for chi in homomorphisms(R, S):
            Q = chi.image
            for img in sorted(F.homs[Q]):
                phi = GroupHom(Q, S, img)
                if mark_at(X, R, chi) != mark_at(X, R, phi.compose(chi)):
                    return {"R": list(R.members), "chi": list(chi.images), "phi": list(img)}
    return None


# -- composition-route predicates ----------------------------------------------

def right_composite_ok(X: BurnsideElement, P: Subgroup, img) -> bool:
    """X o [P, phi] == X o [P, incl] in A(P, S)."""
    S = _square(X)
    Pg, emb, _ = _sub_as_group(P)
    sig = signature(Pg, S)
    arr = np.full(S.order, -1, dtype=np.int64)
    arr[P.arr] = img
    tw = BurnsideElement.basis_element(sig, Pg.whole, arr[emb])
    inc = BurnsideElement.basis_element(sig, Pg.whole, emb)
    return compose(X, tw) == compose(X, inc)


def left_composite_ok(X: BurnsideElement, P: Subgroup, img) -> bool:
    """[phi(P), phi^-1] o X == [P, id] o X in A(S, P)."""
    S = _square(X)
    Pg, emb, back = _sub_as_group(P)
    sig = signature(S, Pg)
    phi = GroupHom(P, S, img)
    inv = phi.inverse()
    tw = BurnsideElement.basis_element(sig, inv.source, back[np.asarray(inv.images)])
    ident = BurnsideElement.basis_element(sig, P, back[P.arr])
    return compose(tw, X) == compose(ident, X)


def _composite_violation(X, F, side):
    S = _square(X)
    test = right_composite_ok if side == "right" else left_composite_ok
    for P in S.subgroups():
        for img in sorted(F.homs[P]):
            if not test(X, P, img):
                return {"P": list(P.members), "phi": list(img)}
    return None


def _both(X, F, side, route):
    marks_v = (right_violation if side == "right" else left_violation)(X, F)
    if route == "marks":
        return marks_v is None
    comp_v = _composite_violation(X, F, side)
    if route == "composite":
        return comp_v is None
    if (marks_v is None) != (comp_v is None):
        raise RouteDisagreement(f"{side} stability: mark and composition routes disagree")
    return marks_v is None


def is_right_F_stable(X: BurnsideElement, F: PreFusionSystem, route: str = "both") -> bool:
    return _both(X, F, "right", route)


def is_left_F_stable(X: BurnsideElement, F: PreFusionSystem, route: str = "both") -> bool:
    return _both(X, F, "left", route)


def is_fully_F_stable(X: BurnsideElement, F: PreFusionSystem, route: str = "both") -> bool:
    return is_right_F_stable(X, F, route) and is_left_F_stable(X, F, route)


def generation_violation(X: BurnsideElement, F: PreFusionSystem):
    for cls in X.terms:
        if cls.phi.images not in F.homs[cls.K]:
            return {"K": list(cls.K.members), "phi": list(cls.phi.images)}
    return None


def is_F_generated(X: BurnsideElement, F: PreFusionSystem, cross_check: bool = True) -> bool:
    """Support inside F; the mark criterion (zero marks off F) is checked alongside."""
    direct = generation_violation(X, F) is None
    if cross_check:
        S = _square(X)
        by_marks = True
        for Q in S.subgroups():
            for psi in homomorphisms(Q, S):
                if psi.images not in F.homs[Q] and mark_at(X, Q, psi) != 0:
                    by_marks = False
                    break
            if not by_marks:
                break
        if by_marks != direct:
            raise RouteDisagreement("F-generation: support and mark criteria disagree")
    return direct


# -- stabilizers ---------------------------------------------------------------

def _stabilizer(X: BurnsideElement, side: str, p: int | None) -> FusionSystem:
    S = _square(X)
    p = p or infer_prime(S)
    subs = S.subgroups()
    homs: dict[Subgroup, set] = {}
    if side == "left":
        onto: dict[Subgroup, list] = {P: [] for P in subs}
        for R in S.subgroup_classes():
            for chi in homomorphisms(R, S):
                onto[chi.image].append(chi)
    for P in subs:
        proper = [Q for Q in subs if Q < P]
        pos = {Q: np.searchsorted(P.arr, Q.arr) for Q in proper}
        keep = set()
        for phi in homomorphisms(P, S, injective_only=True):
            img = np.asarray(phi.images)
            if any(tuple(int(v) for v in img[pos[Q]]) not in homs[Q] for Q in proper):
                continue
            if side == "right":
                inv = phi.inverse()
                ok = all(mark_at(X, P, psi) == mark_at(X, inv.source, psi.compose(inv))
                         for psi in homomorphisms(P, S))
            else:
                ok = all(mark_at(X, chi.source, chi) == mark_at(X, chi.source, phi.compose(chi))
                         for chi in onto[P])
            if ok:
                keep.add(phi.images)
        homs[P] = keep
    F = FusionSystem(S, p, homs)
    problems = validate(F)
    if problems:
        raise AssertionError(f"stabilizer is not a fusion system: {problems[0]}")
    return F


def right_stabilizer(X: BurnsideElement, p: int | None = None) -> FusionSystem:
    return _stabilizer(X, "right", p)


def left_stabilizer(X: BurnsideElement, p: int | None = None, cross_check: bool = False) -> FusionSystem:
    F = _stabilizer(X, "left", p)
    if cross_check and is_bifree(X):
        if right_stabilizer(opposite(X), F.p) != F:
            raise RouteDisagreement("left stabilizer differs from right stabilizer of the opposite")
    return F


def full_stabilizer(X: BurnsideElement, p: int | None = None) -> FusionSystem:
    R = right_stabilizer(X, p)
    L = left_stabilizer(X, R.p)
    F = FusionSystem(R.S, R.p, {P: R.homs[P] & L.homs[P] for P in R.S.subgroups()})
    problems = validate(F)
    if problems:
        raise AssertionError(f"stabilizer is not a fusion system: {problems[0]}")
    return F


# -- fixed-point and orbit systems ------------------------------------------------

def _require_bifree(X: BurnsideElement):
    if not is_bifree(X):
        raise NotBifree("defined on bifree elements only")


def pre_fix(X: BurnsideElement, p: int | None = None) -> PreFusionSystem:
    """Monomorphisms phi with Phi_<P,phi>(X) nonzero."""
    _require_bifree(X)
    S = _square(X)
    homs = {P: {phi.images for phi in homomorphisms(P, S, True) if mark_at(X, P, phi) != 0}
            for P in S.subgroups()}
    return PreFusionSystem(S, p or infer_prime(S), homs)


def pre_orb(X: BurnsideElement, p: int | None = None) -> PreFusionSystem:
    """Monomorphisms phi whose class <P, phi> carries a nonzero coefficient."""
    _require_bifree(X)
    S = _square(X)
    homs = {P: {phi.images for phi in homomorphisms(P, S, True) if canonicalize(X.sig, P, phi) in X.terms}
            for P in S.subgroups()}
    return PreFusionSystem(S, p or infer_prime(S), homs)


def fix_fusion(X: BurnsideElement, p: int | None = None) -> FusionSystem:
    pre = pre_fix(X, p)
    return closure(pre.S, pre.p, pre=pre)


def orb_fusion(X: BurnsideElement, p: int | None = None) -> FusionSystem:
    pre = pre_orb(X, p)
    return closure(pre.S, pre.p, pre=pre)


def universal_stable_check(x: BurnsideElement, omega: BurnsideElement, F: PreFusionSystem, side: str = "right") -> bool:
    """x is F-stable on ``side`` exactly when omega fixes it from that side."""
    if side == "right":
        return is_right_F_stable(x, F, route="marks") == (compose(x, omega) == x)
    if side == "left":
        return is_left_F_stable(x, F, route="marks") == (compose(omega, x) == x)
    raise ValueError("side must be 'right' or 'left'")
