"""Pairs (K, phi) with K <= G and phi: K -> H, their conjugacy classes, and marks.

A pair stands for the twisted diagonal {(phi(k), k)} inside H x G.  Two pairs
are conjugate when their diagonals are conjugate in H x G; the class
representative is the conjugate with the least (K member list, image list).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _accel
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    canonical_subgroup,
    centralizer,
    homomorphisms,
)

_SIGNATURES: dict[tuple[int, int], "Signature"] = {}


class Signature:
    """The pair of groups (G, H) indexing A(G, H): G acts on the right, H on the left."""

    def __init__(self, G: FiniteGroup, H: FiniteGroup):
        self.G = G
        self.H = H
        self._canon: dict[tuple, PairClass] = {}
        self._basis: list[PairClass] | None = None
        self._index: dict[PairClass, int] | None = None
        self._columns: dict[PairClass, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"<Signature G={self.G!r} H={self.H!r}>"

    @property
    def square(self) -> bool:
        return self.G is self.H

    # -- basis -------------------------------------------------------------
    def basis(self) -> list["PairClass"]:
        if self._basis is None:
            found = set()
            for K in self.G.subgroup_classes():
                for phi in homomorphisms(K, self.H):
                    found.add(canonicalize(self, K, phi))
            self._basis = sorted(found, key=PairClass.sort_key)
            self._index = {c: i for i, c in enumerate(self._basis)}
        return list(self._basis)

    def index(self, cls: "PairClass") -> int:
        if self._index is None:
            self.basis()
        return self._index[cls]

    def mark_column(self, cls: "PairClass") -> np.ndarray:
        """Marks of the basis element [cls] at every basis class (object array of ints)."""
        col = self._columns.get(cls)
        if col is None:
            col = np.array([mark(a, cls) for a in self.basis()], dtype=object)
            self._columns[cls] = col
        return col

    def mark_matrix(self) -> np.ndarray:
        basis = self.basis()
        return np.column_stack([self.mark_column(c) for c in basis]) if basis else np.zeros((0, 0), dtype=object)


def signature(G: FiniteGroup, H: FiniteGroup) -> Signature:
    key = (id(G), id(H))
    sig = _SIGNATURES.get(key)
    if sig is None:
        sig = Signature(G, H)
        _SIGNATURES[key] = sig
    return sig


@dataclass(frozen=True, eq=False)
class PairClass:
    sig: Signature
    K: Subgroup
    phi: GroupHom

    @property
    def key(self) -> tuple:
        return (self.K.members, self.phi.images)

    def sort_key(self):
        return (self.K.order, self.K.members, self.phi.images)

    def __hash__(self) -> int:
        return hash((id(self.sig), self.key))

    def __eq__(self, other) -> bool:
        return isinstance(other, PairClass) and other.sig is self.sig and other.key == self.key

    def __lt__(self, other: "PairClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        graph = ",".join(f"{k}:{v}" for k, v in zip(self.K.members, self.phi.images))
        return f"<{graph}>"

    @property
    def injective(self) -> bool:
        return self.phi.is_injective

    @property
    def image(self) -> Subgroup:
        return self.phi.image


def canonicalize(sig: Signature, K: Subgroup, phi: GroupHom | np.ndarray | tuple) -> PairClass:
    """Class representative of the pair (K, phi) in the signature ``sig``."""
    images = phi.images if isinstance(phi, GroupHom) else tuple(int(v) for v in phi)
    raw = (K.members, images)
    hit = sig._canon.get(raw)
    if hit is not None:
        return hit
    G, H = sig.G, sig.H
    Kc, xs = canonical_subgroup(G, K)
    full = np.full(G.order, -1, dtype=np.int64)
    full[K.arr] = images
    # phi o c_x^-1 on Kc, for each x carrying K onto Kc
    pulled = full[G.conj[G.inv[xs]][:, Kc.arr]]
    cands = H.conj[:, pulled].reshape(-1, Kc.order)
    best = cands[_accel.lexmin_row(cands)]
    key = (Kc.members, tuple(int(v) for v in best))
    cls = sig._canon.get(key)
    if cls is None:
        cls = PairClass(sig, Kc, GroupHom(Kc, H, best))
        sig._canon[key] = cls
    sig._canon[raw] = cls
    return cls


def pair_conjugate(sig: Signature, a: tuple[Subgroup, GroupHom], b: tuple[Subgroup, GroupHom]) -> bool:
    return canonicalize(sig, *a) == canonicalize(sig, *b)


def transport_mask(sig: Signature, K: Subgroup, phi: GroupHom, L: Subgroup, psi: GroupHom) -> np.ndarray:
    """Mask of x in G with x K x^-1 <= L and c_y o phi = psi o c_x for some y in H."""
    G, H = sig.G, sig.H
    kgens = np.asarray(K.gens, dtype=np.int64)
    return _accel.transport_mask(G.conj, H.conj, kgens, phi.arr, psi.arr, L.mask)


def pair_subconjugate(sig: Signature, a: tuple[Subgroup, GroupHom], b: tuple[Subgroup, GroupHom]) -> bool:
    """Is the diagonal of ``a`` conjugate into the diagonal of ``b``?"""
    if a[0].order > b[0].order or b[0].order % a[0].order:
        return False
    return bool(transport_mask(sig, a[0], a[1], b[0], b[1]).any())


def pair_conjugate_search(sig: Signature, a: tuple[Subgroup, GroupHom], b: tuple[Subgroup, GroupHom]) -> bool:
    """Conjugacy decided by an explicit (x, y) search, independent of canonical forms."""
    (K, phi), (L, psi) = a, b
    if K.order != L.order:
        return False
    G, H = sig.G, sig.H
    graph_b = set(zip(L.members, psi.images))
    for x in range(G.order):
        moved = [int(G.conj[x, k]) for k in K.members]
        if not all(L.mask[m] for m in moved):
            continue
        for y in range(H.order):
            if all((m, int(H.conj[y, v])) in graph_b for m, v in zip(moved, phi.images)):
                return True
    return False


def n_phi_psi(sig: Signature, K: Subgroup, phi: GroupHom, L: Subgroup, psi: GroupHom) -> np.ndarray:
    return np.flatnonzero(transport_mask(sig, K, phi, L, psi))


def n_phi(sig: Signature, K: Subgroup, phi: GroupHom) -> Subgroup:
    return sig.G.subgroup(n_phi_psi(sig, K, phi, K, phi))


def mark_value(sig: Signature, K: Subgroup, phi: GroupHom, L: Subgroup, psi: GroupHom) -> int:
    """Number of points of the basis biset [L, psi] fixed by the diagonal of (K, phi)."""
    if L.order % K.order:
        return 0
    count = int(transport_mask(sig, K, phi, L, psi).sum())
    if count == 0:
        return 0
    cent = centralizer(sig.H, phi.image).order
    val, rem = divmod(count * cent, L.order)
    assert rem == 0
    return val


def mark(a: PairClass, b: PairClass) -> int:
    return mark_value(a.sig, a.K, a.phi, b.K, b.phi)
