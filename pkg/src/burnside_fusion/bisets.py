"""Explicit finite bisets, used as a brute-force oracle for the algebra.

A (G, H)-biset carries a left H-action and a right G-action.  Both are stored
as dense tables: ``left[h, x] = h.x`` and ``right[g, x] = x.g``.
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from . import _accel
from .groups import FiniteGroup, direct_product
from .pairs import PairClass, Signature, canonicalize, signature


class NotLeftFree(ValueError):
    pass


class ExplicitBiset:
    def __init__(self, G: FiniteGroup, H: FiniteGroup, left: np.ndarray, right: np.ndarray):
        self.G = G
        self.H = H
        self.left = np.ascontiguousarray(left, dtype=np.int64)
        self.right = np.ascontiguousarray(right, dtype=np.int64)
        self.size = self.left.shape[1]

    def __len__(self) -> int:
        return self.size

    @classmethod
    def from_pair(cls, G: FiniteGroup, H: FiniteGroup, K, phi) -> "ExplicitBiset":
        """(H x G)/Delta(K, phi) with (h, g).z = h z g^-1."""
        nh, ng = H.order, G.order
        kk = K.arr
        fk = phi.arr[kk]
        label = np.full((nh, ng), -1, dtype=np.int64)
        reps = []
        for h in range(nh):
            for g in range(ng):
                if label[h, g] < 0:
                    label[H.mul[h, fk], G.mul[g, kk]] = len(reps)
                    reps.append((h, g))
        rh = np.array([r[0] for r in reps], dtype=np.int64)
        rg = np.array([r[1] for r in reps], dtype=np.int64)
        left = label[H.mul[:, rh], rg[None, :]]
        # z.g' corresponds to (1, g'^-1) acting on the coset of (h, g)
        right = label[rh[None, :], G.mul[G.inv[:, None], rg[None, :]]]
        return cls(G, H, left, right)

    @classmethod
    def from_counts(cls, sig: Signature, counts: dict[PairClass, int]) -> "ExplicitBiset":
        parts = []
        for c, n in sorted(counts.items(), key=lambda kv: kv[0].sort_key()):
            if n < 0 or int(n) != n:
                raise ValueError("only non-negative integer combinations are bisets")
            parts.extend([cls.from_pair(sig.G, sig.H, c.K, c.phi)] * int(n))
        return cls.disjoint_union(sig.G, sig.H, parts)

    @classmethod
    def disjoint_union(cls, G, H, parts) -> "ExplicitBiset":
        if not parts:
            return cls(G, H, np.zeros((H.order, 0)), np.zeros((G.order, 0)))
        lefts, rights, off = [], [], 0
        for b in parts:
            lefts.append(b.left + off)
            rights.append(b.right + off)
            off += b.size
        return cls(G, H, np.hstack(lefts), np.hstack(rights))

    def tensor(self, other: "ExplicitBiset") -> "ExplicitBiset":
        """``self x_M other`` where M is self's right group and other's left group."""
        if self.G is not other.H:
            raise ValueError("middle groups differ")
        M = self.G
        nx, ny = self.size, other.size
        xs = np.repeat(np.arange(nx), ny)
        ys = np.tile(np.arange(ny), nx)
        acts = []
        for m in M.generators:
            # (x, y).m = (x m, m^-1 y)
            acts.append(self.right[m, xs] * ny + other.left[M.inv[m], ys])
        acts = np.array(acts, dtype=np.int64).reshape(-1, nx * ny)
        labels = _accel.orbit_labels(acts) if acts.size else np.arange(nx * ny)
        roots, point = np.unique(labels, return_inverse=True)
        rx, ry = roots // ny, roots % ny
        left = point[self.left[:, rx] * ny + ry[None, :]]
        right = point[rx[None, :] * ny + other.right[:, ry]]
        return ExplicitBiset(other.G, self.H, left, right)

    def product(self, other: "ExplicitBiset") -> "ExplicitBiset":
        G = direct_product(self.G, other.G)
        H = direct_product(self.H, other.H)
        ny = other.size
        xs = np.repeat(np.arange(self.size), ny)
        ys = np.tile(np.arange(ny), self.size)
        ih = np.repeat(np.arange(self.H.order), other.H.order)
        jh = np.tile(np.arange(other.H.order), self.H.order)
        ig = np.repeat(np.arange(self.G.order), other.G.order)
        jg = np.tile(np.arange(other.G.order), self.G.order)
        left = self.left[ih][:, xs] * ny + other.left[jh][:, ys]
        right = self.right[ig][:, xs] * ny + other.right[jg][:, ys]
        return ExplicitBiset(G, H, left, right)

    def orbits(self) -> np.ndarray:
        acts = [self.left[h] for h in self.H.generators] + [self.right[g] for g in self.G.generators]
        if not acts:
            return np.arange(self.size)
        return _accel.orbit_labels(np.array(acts, dtype=np.int64))

    def stabilizer_pair(self, z: int):
        """The stabilizer of z in H x G as a pair (L, images) with L <= G."""
        hits = np.flatnonzero(self.left[:, z] == z)
        if hits.size != 1:
            raise NotLeftFree("result not left-free")
        L, imgs = [], []
        col = self.left[:, z]
        for g in range(self.G.order):
            w = self.right[g, z]
            ks = np.flatnonzero(col == w)
            if ks.size:
                L.append(g)
                imgs.append(int(ks[0]))
        return self.G.subgroup(L), [imgs[i] for i in np.argsort(L)]

    def decompose(self, sig: Signature | None = None) -> Counter:
        """Multiplicity of each basis class among the transitive pieces."""
        sig = sig or signature(self.G, self.H)
        out: Counter = Counter()
        labels = self.orbits()
        for z in np.unique(labels):
            L, imgs = self.stabilizer_pair(int(z))
            out[canonicalize(sig, L, imgs)] += 1
        return out

    def fixed_points(self, pairs) -> int:
        """Points fixed by every (h, g) in ``pairs`` under z -> h z g^-1."""
        mask = np.ones(self.size, dtype=np.bool_)
        for h, g in pairs:
            mask &= self.left[h] == self.right[g]
        return int(mask.sum())

    def is_bifree(self) -> bool:
        return bool(
            all((self.left[h] != np.arange(self.size)).all() for h in range(1, self.H.order))
            and all((self.right[g] != np.arange(self.size)).all() for g in range(1, self.G.order))
        )


def group_as_biset(G: FiniteGroup, S_embed: np.ndarray, S: FiniteGroup) -> ExplicitBiset:
    """G as an (S, S)-biset by left and right multiplication, S embedded via ``S_embed``."""
    left = G.mul[S_embed, :]
    right = G.mul[:, S_embed].T
    return ExplicitBiset(S, S, left, right)
