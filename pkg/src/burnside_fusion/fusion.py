"""Fusion systems on a finite p-group S.

A system stores, for every subgroup P of S, the set of its morphisms P -> S as
image tuples aligned with ``P.members``.  Morphisms into a smaller Q are the
ones whose image lies in Q, so target restriction and extension are free.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    centralizer,
    coset_quotient,
    embedding,
    group_from_subgroup,
    normalizer,
    transporter,
)
from .pairs import n_phi, signature


class FusionError(ValueError):
    pass


def _image(S: FiniteGroup, images: tuple[int, ...]) -> Subgroup:
    return S.subgroup(set(images))


def inner_images(S: FiniteGroup, P: Subgroup) -> set[tuple[int, ...]]:
    return {tuple(int(v) for v in row) for row in S.conj[:, P.arr]}


class PreFusionSystem:
    """Morphism sets P -> S for every subgroup P; all morphisms injective."""

    def __init__(self, S: FiniteGroup, p: int, homs: dict[Subgroup, Iterable[tuple[int, ...]]]):
        self.S = S
        self.p = p
        self.homs: dict[Subgroup, frozenset[tuple[int, ...]]] = {
            P: frozenset(homs.get(P, ())) for P in S.subgroups()
        }
        for P, imgs in self.homs.items():
            for img in imgs:
                if len(set(img)) != P.order:
                    raise FusionError("fusion systems contain injective morphisms only")

    def __eq__(self, other) -> bool:
        return isinstance(other, PreFusionSystem) and other.S is self.S and other.homs == self.homs

    def __hash__(self):
        return hash((id(self.S), frozenset(self.homs.items())))

    def __repr__(self) -> str:
        n = sum(len(v) for v in self.homs.values())
        return f"<{type(self).__name__} on order {self.S.order}, {n} morphisms>"

    def size(self) -> int:
        return sum(len(v) for v in self.homs.values())

    def morphisms(self, P: Subgroup, Q: Subgroup | None = None) -> list[GroupHom]:
        imgs = sorted(self.homs[P])
        if Q is not None:
            imgs = [i for i in imgs if Q.mask[list(i)].all()]
        return [GroupHom(P, self.S, i) for i in imgs]

    def automorphisms(self, P: Subgroup) -> list[GroupHom]:
        return [h for h in self.morphisms(P) if set(h.images) == set(P.members)]

    def contains(self, phi: GroupHom) -> bool:
        return phi.images in self.homs.get(phi.source, ())

    def conjugates(self, P: Subgroup) -> set[Subgroup]:
        return {_image(self.S, img) for img in self.homs[P]} | {P}

    def is_subsystem_of(self, other: "PreFusionSystem") -> bool:
        return other.S is self.S and all(v <= other.homs[P] for P, v in self.homs.items())

    def to_json(self) -> dict:
        morphs = []
        for P in self.S.subgroups():
            for img in sorted(self.homs[P]):
                morphs.append({"source": list(P.members), "graph": [[k, v] for k, v in zip(P.members, img)]})
        return {"group": self.S.descriptor(), "p": self.p, "morphisms": morphs}


class FusionSystem(PreFusionSystem):
    ambient: tuple[FiniteGroup, np.ndarray] | None = None
    name: str | None = None


# -- construction ------------------------------------------------------------

def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def fusion_from_group(G: FiniteGroup, S_sub: Subgroup, p: int) -> FusionSystem:
    """F_S(G): morphisms are conjugations by elements of G."""
    if S_sub.order != _p_part(G.order, p) or not S_sub.group is G:
        raise FusionError("S is not a Sylow p-subgroup of G")
    S = group_from_subgroup(S_sub)
    emb = embedding(S, G)
    back = np.full(G.order, -1, dtype=np.int64)
    back[emb] = np.arange(S.order)
    homs = {}
    for P in S.subgroups():
        PG = G.subgroup(emb[P.arr])
        rows = G.conj[transporter(G, PG, S_sub)][:, emb[P.arr]]
        homs[P] = {tuple(int(v) for v in back[row]) for row in rows}
    F = FusionSystem(S, p, homs)
    F.ambient = (G, emb)
    return F


def minimal_fusion(S: FiniteGroup, p: int) -> FusionSystem:
    return FusionSystem(S, p, {P: inner_images(S, P) for P in S.subgroups()})


def closure(S: FiniteGroup, p: int, generators: Iterable[GroupHom] = (), pre: PreFusionSystem | None = None) -> FusionSystem:
    """Smallest fusion system on S containing the given morphisms."""
    subs = S.subgroups()
    below = {P: [R for R in subs if R <= P] for P in subs}
    homs: dict[Subgroup, set] = {P: set() for P in subs}
    onto: dict[Subgroup, set] = {P: set() for P in subs}
    queue: list[tuple[Subgroup, tuple]] = []

    def add(P, img):
        if img not in homs[P]:
            if len(set(img)) != P.order:
                raise FusionError("fusion systems contain injective morphisms only")
            homs[P].add(img)
            onto[_image(S, img)].add((P, img))
            queue.append((P, img))

    for P in subs:
        for img in sorted(inner_images(S, P)):
            add(P, img)
    for phi in generators:
        if phi.target is not S:
            raise FusionError("morphism target must be S")
        add(phi.source, phi.images)
    if pre is not None:
        for P, imgs in pre.homs.items():
            for img in sorted(imgs):
                add(P, img)

    while queue:
        P, img = queue.pop()
        arr = np.full(S.order, -1, dtype=np.int64)
        arr[P.arr] = img
        Q = _image(S, img)
        back = dict(zip(img, P.members))
        add(Q, tuple(back[q] for q in Q.members))
        for R in below[P]:
            add(R, tuple(int(v) for v in arr[R.arr]))
        # psi o phi for psi on Q, and phi o chi for chi onto P
        for psi in list(homs[Q]):
            parr = np.full(S.order, -1, dtype=np.int64)
            parr[Q.arr] = psi
            add(P, tuple(int(v) for v in parr[np.asarray(img)]))
        for R, chi in list(onto[P]):
            add(R, tuple(int(v) for v in arr[np.asarray(chi)]))
    return FusionSystem(S, p, homs)


def validate(F: PreFusionSystem) -> list[str]:
    """Problems with the fusion system axioms; empty when F is a fusion system."""
    S = F.S
    problems = []
    for P, imgs in F.homs.items():
        if not inner_images(S, P) <= imgs:
            problems.append(f"missing conjugation maps on {P!r}")
        for img in imgs:
            Q = _image(S, img)
            back = dict(zip(img, P.members))
            if tuple(back[q] for q in Q.members) not in F.homs[Q]:
                problems.append(f"missing inverse of {img} on {P!r}")
            arr = np.full(S.order, -1, dtype=np.int64)
            arr[P.arr] = img
            for psi in F.homs[Q]:
                parr = np.full(S.order, -1, dtype=np.int64)
                parr[Q.arr] = psi
                if tuple(int(v) for v in parr[np.asarray(img)]) not in imgs:
                    problems.append(f"not closed under composition at {P!r}")
                    break
    return problems


# -- subgroup properties -----------------------------------------------------

def is_fully_normalized(F: PreFusionSystem, P: Subgroup) -> bool:
    n = normalizer(F.S, P).order
    return all(normalizer(F.S, Q).order <= n for Q in F.conjugates(P))


def is_fully_centralized(F: PreFusionSystem, P: Subgroup) -> bool:
    n = centralizer(F.S, P).order
    return all(centralizer(F.S, Q).order <= n for Q in F.conjugates(P))


def is_centric(F: PreFusionSystem, P: Subgroup) -> bool:
    return all(centralizer(F.S, Q) <= Q for Q in F.conjugates(P))


def inner_automorphism_count(S: FiniteGroup, P: Subgroup) -> int:
    """|Aut_S(P)| = |N_S(P)| / |C_S(P)|."""
    return normalizer(S, P).order // centralizer(S, P).order


# -- saturation --------------------------------------------------------------

@dataclass
class SaturationVerdict:
    saturated: bool
    reason: str
    witness: dict = field(default_factory=dict)
    full_axioms: bool | None = None

    def __bool__(self) -> bool:
        return self.saturated


def n_phi_subgroup(F: PreFusionSystem, P: Subgroup, img: tuple[int, ...]) -> Subgroup:
    sig = signature(F.S, F.S)
    return n_phi(sig, P, GroupHom(P, F.S, img))


def _is_p_power(n: int, p: int) -> bool:
    return _p_part(n, p) == n


def _axiom_two(F: FusionSystem, closed: FusionSystem) -> tuple[bool, dict]:
    S = F.S
    for P in S.subgroups():
        for img in sorted(F.homs[P]):
            Q = _image(S, img)
            if not is_fully_centralized(closed, Q):
                continue
            N = n_phi_subgroup(F, P, img)
            if not (P <= N):
                raise AssertionError("N_phi does not contain P")
            pos = np.searchsorted(N.arr, P.arr)
            found = None
            for ext in sorted(closed.homs[N]):
                e = np.asarray(ext)[pos]
                if tuple(int(v) for v in e) == img:
                    found = ext
                    break
            if found is None:
                return False, {"P": list(P.members), "phi": list(img), "N_phi": list(N.members)}
    return True, {}


def _axiom_one_full(F: FusionSystem) -> tuple[bool, dict]:
    S, p = F.S, F.p
    for P in S.subgroups():
        if not is_fully_normalized(F, P):
            continue
        if not is_fully_centralized(F, P):
            return False, {"P": list(P.members), "failure": "fully normalized but not fully centralized"}
        aut_f = len(F.automorphisms(P))
        aut_s = inner_automorphism_count(S, P)
        if not _is_p_power(aut_s, p) or _p_part(aut_f, p) != aut_s:
            return False, {"P": list(P.members), "failure": "Aut_S(P) not Sylow in Aut_F(P)"}
    return True, {}


def is_saturated(F: PreFusionSystem, cross_check: bool = True) -> SaturationVerdict:
    """Saturation by axioms I_S and II; the full axiom I is evaluated alongside."""
    closed = F if isinstance(F, FusionSystem) and not validate_quick(F) else closure(F.S, F.p, pre=F)
    S, p = F.S, F.p
    aut_f = len(closed.automorphisms(S.whole))
    aut_s = inner_automorphism_count(S, S.whole)
    ok_is = _p_part(aut_f, p) == aut_s
    ok_two, wit_two = _axiom_two(F, closed)
    full = None
    if cross_check:
        ok_one, _ = _axiom_one_full(closed)
        full = ok_one and ok_two
    if not ok_is:
        v = SaturationVerdict(False, "I_S fails", {"Aut_F(S)": aut_f, "Aut_S(S)": aut_s}, full)
    elif not ok_two:
        v = SaturationVerdict(False, "II fails", wit_two, full)
    else:
        v = SaturationVerdict(True, "saturated", {}, full)
    if full is not None and full != v.saturated:
        raise AssertionError("simplified and full saturation axioms disagree")
    return v


def is_levelwise_closed(pre: PreFusionSystem) -> bool:
    """Inner maps present, and isomorphisms closed under inverses and composites."""
    S = pre.S
    for P, imgs in pre.homs.items():
        if not inner_images(S, P) <= imgs:
            return False
        for img in imgs:
            Q = _image(S, img)
            back = dict(zip(img, P.members))
            if tuple(back[q] for q in Q.members) not in pre.homs[Q]:
                return False
            for psi in pre.homs[Q]:
                parr = np.full(S.order, -1, dtype=np.int64)
                parr[Q.arr] = psi
                if tuple(int(v) for v in parr[np.asarray(img)]) not in imgs:
                    return False
    return True


def saturated_at(pre: PreFusionSystem, P: Subgroup) -> SaturationVerdict:
    """Local axioms I_P and II_P for a level-wise closed pre-system.

    Extensions for II_P are looked up in the closure of ``pre``.
    """
    S, p = pre.S, pre.p
    for Q in sorted(pre.conjugates(P), key=Subgroup.sort_key):
        if not is_fully_normalized(pre, Q):
            continue
        if not is_fully_centralized(pre, Q):
            return SaturationVerdict(False, "I_P fails", {"Q": list(Q.members), "failure": "not fully centralized"})
        aut_p = len(pre.automorphisms(Q))
        aut_s = inner_automorphism_count(S, Q)
        if _p_part(aut_p, p) != aut_s:
            return SaturationVerdict(False, "I_P fails", {"Q": list(Q.members), "failure": "Aut_S(Q) not Sylow"})
    closed = closure(S, p, pre=pre)
    for img in sorted(pre.homs[P]):
        if not is_fully_centralized(pre, _image(S, img)):
            continue
        N = n_phi_subgroup(pre, P, img)
        pos = np.searchsorted(N.arr, P.arr)
        if not any(tuple(int(v) for v in np.asarray(ext)[pos]) == img for ext in closed.homs[N]):
            return SaturationVerdict(False, "II_P fails", {"phi": list(img), "N_phi": list(N.members)})
    return SaturationVerdict(True, "saturated")


def validate_quick(F: PreFusionSystem) -> bool:
    """True when some axiom fails (cheap test used to decide whether to close)."""
    return bool(validate(F))


# -- strong closure and quotients --------------------------------------------

def is_strongly_closed(F: PreFusionSystem, T: Subgroup) -> bool:
    for P in F.S.subgroups():
        if not (P <= T):
            continue
        for img in F.homs[P]:
            if not T.mask[list(img)].all():
                return False
    return True


@dataclass
class Quotient:
    system: FusionSystem
    group: FiniteGroup
    projection: np.ndarray
    kernel: Subgroup


def quotient_fusion(F: PreFusionSystem, T: Subgroup) -> Quotient:
    """F/T on S/T, where S/T acts on the left cosets of T."""
    if not is_strongly_closed(F, T):
        raise FusionError("T is not strongly closed")
    S = F.S
    Q, proj = coset_quotient(S, T)
    homs: dict[Subgroup, set] = {R: set() for R in Q.subgroups()}
    for R in S.subgroups():
        if not (T <= R):
            continue
        Rq = Q.subgroup(set(proj[R.arr].tolist()))
        lift = {}
        for r in R.members:
            lift.setdefault(int(proj[r]), r)
        for img in F.homs[R]:
            arr = np.full(S.order, -1, dtype=np.int64)
            arr[R.arr] = img
            homs[Rq].add(tuple(int(proj[arr[lift[x]]]) for x in Rq.members))
    induced = PreFusionSystem(Q, F.p, homs)
    return Quotient(closure(Q, F.p, pre=induced), Q, proj, T)


def projection_hom(quot: Quotient, S: FiniteGroup) -> GroupHom:
    return GroupHom(S.whole, quot.group, quot.projection[S.whole.arr])


# -- maps between systems ----------------------------------------------------

def is_fusion_preserving(beta: GroupHom, E: PreFusionSystem, F2: PreFusionSystem) -> bool:
    """beta o Hom_E(P, Q) is contained in Hom_F2(beta P, beta Q) o beta."""
    S, S2 = E.S, F2.S
    if beta.source.group is not S or beta.target is not S2:
        raise FusionError("map does not go between the underlying groups")
    for P in S.subgroups():
        bP = S2.subgroup(set(beta.arr[P.arr].tolist()))
        for img in E.homs[P]:
            chi: dict[int, int] = {}
            for u, v in zip(P.members, img):
                a, b = int(beta.arr[u]), int(beta.arr[v])
                if chi.setdefault(a, b) != b:
                    return False
            cand = tuple(chi[x] for x in bP.members)
            if cand not in F2.homs[bP]:
                return False
    return True


@dataclass
class NormalityVerdict:
    normal: bool
    reason: str
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.normal


def is_normal_subsystem(E: PreFusionSystem, F: PreFusionSystem, T: Subgroup) -> NormalityVerdict:
    """Criterion: Aut_F(T) preserves E, and every F-map inside T is chi o phi with phi in E, chi in Aut_F(T)."""
    S = F.S
    if T.group is not S:
        raise FusionError("T must be a subgroup of S")
    if not is_strongly_closed(F, T):
        raise FusionError("T is not strongly closed in F")
    Tg = E.S
    emb = embedding(Tg, S)
    if sorted(emb.tolist()) != list(T.members):
        raise FusionError("E is not a system on T")
    back = np.full(S.order, -1, dtype=np.int64)
    back[emb] = np.arange(Tg.order)
    # E inside F
    for P in Tg.subgroups():
        Ps = S.subgroup(emb[P.arr])
        pos = np.searchsorted(Ps.arr, emb[P.arr])
        for img in E.homs[P]:
            mapped = np.empty(P.order, dtype=np.int64)
            mapped[pos] = emb[np.asarray(img)]
            if tuple(int(v) for v in mapped) not in F.homs[Ps]:
                raise FusionError("E is not contained in F")
    # Aut_F(T) as maps on Tg
    auts = []
    for img in F.homs[T]:
        arr = np.full(S.order, -1, dtype=np.int64)
        arr[T.arr] = img
        auts.append(back[arr[emb]])
    for chi in auts:
        beta = GroupHom(Tg.whole, Tg, chi)
        if not is_fusion_preserving(beta, E, E):
            return NormalityVerdict(False, "Aut_F(T) does not preserve E", {"chi": chi.tolist()})
    for P in Tg.subgroups():
        Ps = S.subgroup(emb[P.arr])
        ident = emb[P.arr]
        want = set()
        for img in F.homs[Ps]:
            arr = np.full(S.order, -1, dtype=np.int64)
            arr[Ps.arr] = img
            want.add(tuple(int(v) for v in back[arr[ident]]))
        got = set()
        for img in E.homs[P]:
            e = np.asarray(img)
            for chi in auts:
                got.add(tuple(int(v) for v in chi[e]))
        missing = want - got
        if missing:
            return NormalityVerdict(False, "F-morphism does not factor through E and Aut_F(T)",
                                    {"P": [int(v) for v in ident], "psi": list(sorted(missing)[0])})
    return NormalityVerdict(True, "normal")
