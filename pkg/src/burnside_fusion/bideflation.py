"""Bideflation A(S, S) -> A(S/T, S/T) along a normal subgroup T.

A basis class [P, phi] with phi(P n T) <= T goes to [PT/T, induced map].  The
explicit route forms the double quotient T\\X/T of the biset and decomposes it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _accel
from .bisets import ExplicitBiset, NotLeftFree
from .burnside import BurnsideElement, augmentation, compose, is_p_local, m_value, p_valuation
from .characteristic import (
    characteristic_biset_from_group,
    characteristic_idempotent,
    is_characteristic,
    is_idempotent_mod_p,
)
from .fusion import FusionError, PreFusionSystem, quotient_fusion
from .groups import FiniteGroup, Subgroup, coset_quotient
from .induced import _square
from .pairs import PairClass, canonicalize, signature


class IncompatibleClass(ValueError):
    pass


@dataclass
class QuotientData:
    group: FiniteGroup
    projection: np.ndarray
    lift: np.ndarray


_QUOTIENTS: dict[Subgroup, QuotientData] = {}


def quotient_data(T: Subgroup) -> QuotientData:
    hit = _QUOTIENTS.get(T)
    if hit is None:
        Q, proj = coset_quotient(T.group, T)
        lift = np.full(Q.order, -1, dtype=np.int64)
        for s in range(T.group.order - 1, -1, -1):
            lift[proj[s]] = s
        hit = QuotientData(Q, proj, lift)
        _QUOTIENTS[T] = hit
    return hit


def is_compatible(cls: PairClass, T: Subgroup) -> bool:
    """phi(P n T) <= T."""
    meet = cls.K.meet(T)
    return bool(T.mask[cls.phi.arr[meet.arr]].all())


def bideflate_class(cls: PairClass, T: Subgroup) -> PairClass:
    if not is_compatible(cls, T):
        raise IncompatibleClass(f"class {cls!r} does not map its intersection with T into T")
    data = quotient_data(T)
    Q, proj = data.group, data.projection
    sig = signature(Q, Q)
    images: dict[int, int] = {}
    for k, v in zip(cls.K.members, cls.phi.images):
        images.setdefault(int(proj[k]), int(proj[v]))
    Kbar = Q.subgroup(images)
    return canonicalize(sig, Kbar, [images[x] for x in Kbar.members])


def bideflate(X: BurnsideElement, T: Subgroup, oracle: bool = False) -> BurnsideElement:
    S = _square(X)
    if T.group is not S or not T.is_normal():
        raise ValueError("T must be a normal subgroup of S")
    data = quotient_data(T)
    sig = signature(data.group, data.group)
    acc: dict[PairClass, Fraction] = {}
    for cls, c in X.terms.items():
        img = bideflate_class(cls, T)
        if oracle:
            got = oracle_bideflate_class(cls, T)
            if dict(got) != {img: 1}:
                raise RuntimeError("bideflation disagrees with the double quotient")
        acc[img] = acc.get(img, Fraction(0)) + c
    return BurnsideElement(sig, acc)


def oracle_bideflate_class(cls: PairClass, T: Subgroup):
    """Decompose T\\[P, phi]/T as a (S/T, S/T)-biset."""
    S = cls.sig.G
    data = quotient_data(T)
    Q = data.group
    b = ExplicitBiset.from_pair(S, S, cls.K, cls.phi)
    gens = list(T.gens)
    acts = [b.left[t] for t in gens] + [b.right[t] for t in gens]
    labels = _accel.orbit_labels(np.array(acts, dtype=np.int64)) if acts else np.arange(b.size)
    roots, point = np.unique(labels, return_inverse=True)
    left = point[b.left[data.lift][:, roots]]
    right = point[b.right[data.lift][:, roots]]
    quotient = ExplicitBiset(Q, Q, left, right)
    try:
        return quotient.decompose(signature(Q, Q))
    except NotLeftFree as exc:
        raise IncompatibleClass("double quotient is not left-free") from exc


# -- checks -------------------------------------------------------------------------

def bidef_augmentation_check(X: BurnsideElement, T: Subgroup, F: PreFusionSystem | None = None) -> dict:
    """Per-class augmentation identity; with F, the m-hypothesis and the characteristic conclusion."""
    S = _square(X)
    per_class = []
    for cls in X.support():
        img = bideflate_class(cls, T)
        PT = S.generate(cls.K.members + T.members)
        got = augmentation(BurnsideElement(img.sig, {img: 1}))
        per_class.append({"K": list(cls.K.members), "holds": got == Fraction(S.order, PT.order)})
    out = {"classes_ok": all(c["holds"] for c in per_class), "classes": per_class}
    if F is not None:
        p = F.p
        hyp = all(
            p_valuation(m_value(X, P), p) >= 1
            for P in S.subgroup_classes()
            if P.order < S.order and S.generate(P.members + T.members).order == S.order
        )
        out["m_hypothesis"] = hyp
        out["characteristic_input"] = is_characteristic(X, F, frobenius=False).characteristic
        quot = quotient_fusion(F, T)
        Y = bideflate(X, T)
        out["quotient_characteristic"] = is_characteristic(Y, quot.system, frobenius=False).characteristic
    return out


def bidef_m_check(X: BurnsideElement, T: Subgroup) -> bool:
    """m of the bideflation at each class equals the sum of m over classes with that image."""
    S = _square(X)
    data = quotient_data(T)
    Q = data.group
    Y = bideflate(X, T)
    sums: dict[Subgroup, Fraction] = {}
    for R in S.subgroup_classes():
        Rbar = Q.subgroup(set(data.projection[R.arr].tolist()))
        key = canonicalize(signature(Q, Q), Rbar, Rbar.members).K
        sums[key] = sums.get(key, Fraction(0)) + m_value(X, R)
    return all(m_value(Y, P) == sums.get(P, Fraction(0)) for P in Q.subgroup_classes())


def bidef_composition_hypothesis(a: PairClass, b: PairClass, T: Subgroup) -> bool:
    """T <= P for a = [P, phi], or T <= psi(Q) for b = [Q, psi]."""
    return T <= a.K or T <= b.image


def bidef_composition_check(a: PairClass, b: PairClass, T: Subgroup) -> tuple[bool, bool]:
    """(hypothesis, bidef(a o b) == bidef(a) o bidef(b)) for compatible basis classes."""
    A = BurnsideElement(a.sig, {a: 1})
    B = BurnsideElement(b.sig, {b: 1})
    equal = bideflate(compose(A, B), T) == compose(bideflate(A, T), bideflate(B, T))
    return bidef_composition_hypothesis(a, b, T), equal


def find_composition_failure(S: FiniteGroup, T: Subgroup):
    """A compatible pair outside the hypothesis where bideflation is not multiplicative."""
    sig = signature(S, S)
    pool = [c for c in sig.basis() if is_compatible(c, T)]
    for a in pool:
        for b in pool:
            hyp, equal = bidef_composition_check(a, b, T)
            if not hyp and not equal:
                return a, b
    return None


@dataclass
class QuotientIdempotentReport:
    equal: bool
    bideflated: BurnsideElement
    quotient_idempotent: BurnsideElement | None
    part_a: bool | None = None
    power: int | None = None
    notes: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.equal and self.part_a is not False


def quotient_idempotent_check(F: PreFusionSystem, T: Subgroup, max_power: int = 12,
                              with_powers: bool = True) -> QuotientIdempotentReport:
    """bidef(omega_F) against the idempotent of F/T, and the mod-p version for a power of [G]."""
    quot = quotient_fusion(F, T)
    solved = characteristic_idempotent(F)
    if solved.status != "ok":
        raise FusionError(f"no characteristic idempotent for F: {solved.status}")
    Y = bideflate(solved.element, T)
    target = characteristic_idempotent(quot.system)
    report = QuotientIdempotentReport(target.status == "ok" and Y == target.element, Y, target.element)
    ambient = getattr(F, "ambient", None)
    if with_powers and ambient is not None:
        G, emb = ambient
        Ssub = G.subgroup(emb)
        omega = characteristic_biset_from_group(G, Ssub)
        p = F.p
        power = omega
        for k in range(1, max_power + 1):
            if is_idempotent_mod_p(power, p):
                Z = bideflate(power, T)
                rep = is_characteristic(Z, quot.system, frobenius=False)
                report.part_a = rep.characteristic and is_p_local(Z, p) and is_idempotent_mod_p(Z, p)
                report.power = k
                break
            power = compose(power, omega)
        else:
            report.notes.append("no power up to the bound is idempotent mod p")
    return report
