"""Finite permutation groups stored as full multiplication tables.

Elements are indexed by the lexicographic order of their one-line images, so
the identity is always index 0 and two constructions of the same group give
identical tables.  Products follow function composition: ``mul[a, b]`` is the
permutation ``i -> a(b(i))``.
"""
from __future__ import annotations

import os
from functools import cached_property
from itertools import product as cartesian_product
from typing import Iterable, Sequence

import numpy as np

from . import _accel

DEFAULT_CAP = 10_000
CAP_ENV = "BURNSIDE_FUSION_GROUP_CAP"


class GroupTooLarge(ValueError):
    pass


def group_cap() -> int:
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


_REGISTRY: dict[tuple[int, bytes], "FiniteGroup"] = {}


def _intern(perms: np.ndarray) -> "FiniteGroup":
    key = (perms.shape[1], perms.tobytes())
    grp = _REGISTRY.get(key)
    if grp is None:
        grp = FiniteGroup(perms)
        _REGISTRY[key] = grp
    return grp


def _encode(perms: np.ndarray):
    d = perms.shape[1]
    if d == 0 or d ** d >= 2 ** 62:
        return None
    weights = np.array([d ** (d - 1 - k) for k in range(d)], dtype=np.int64)
    return perms.astype(np.int64) @ weights, weights


class FiniteGroup:
    """A permutation group with its complete multiplication table."""

    def __init__(self, perms: np.ndarray):
        self.perms = np.ascontiguousarray(perms, dtype=np.int64)
        self.order, self.degree = self.perms.shape
        self.name: str | None = None
        self.factors: tuple[FiniteGroup, FiniteGroup] | None = None
        self._subgroups: dict[tuple[int, ...], Subgroup] = {}
        self._lookup: dict[bytes, int] | None = None
        enc = _encode(self.perms)
        if enc is not None:
            codes, weights = enc
            self.mul = _accel.mul_table(self.perms, codes, weights)
        else:
            self.mul = self._slow_table()
        self.inv = np.argmin(self.mul, axis=1).astype(np.int64)

    def _slow_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            prod = self.perms[i][self.perms]
            table[i] = [self.index(row) for row in prod]
        return table

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"<FiniteGroup {label}, order {self.order}>"

    def index(self, perm: Sequence[int]) -> int:
        if self._lookup is None:
            self._lookup = {row.tobytes(): i for i, row in enumerate(self.perms)}
        key = np.asarray(perm, dtype=np.int64).tobytes()
        try:
            return self._lookup[key]
        except KeyError:
            raise ValueError(f"{list(perm)} is not an element of {self!r}") from None

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, h] = g h g^-1``."""
        return self.mul[self.mul, self.inv[:, None]]

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.ones(n, dtype=np.int64)
        cur = np.arange(n)
        k = 1
        todo = cur != 0
        while todo.any():
            cur = self.mul[cur, np.arange(n)]
            k += 1
            hit = todo & (cur == 0)
            orders[hit] = k
            todo &= ~hit
        return orders

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return self.whole.gens

    @cached_property
    def whole(self) -> "Subgroup":
        return self.subgroup(range(self.order))

    @cached_property
    def trivial(self) -> "Subgroup":
        return self.subgroup([0])

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        key = tuple(sorted(int(m) for m in members))
        sub = self._subgroups.get(key)
        if sub is None:
            sub = Subgroup(self, key)
            self._subgroups[key] = sub
        return sub

    def generate(self, elements: Iterable[int]) -> "Subgroup":
        gens = np.unique(np.asarray(list(elements), dtype=np.int64))
        mask = _accel.closure_mask(self.mul, gens, gens)
        return self.subgroup(np.flatnonzero(mask))

    def subgroups(self) -> list["Subgroup"]:
        return list(self._all_subgroups)

    @cached_property
    def _all_subgroups(self) -> tuple["Subgroup", ...]:
        # every subgroup is a join of cyclic subgroups, so grow layers of joins
        cyclic = {self.generate([g]) for g in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for a in frontier:
                for c in cyclic:
                    if c <= a:
                        continue
                    j = self.generate(a.members + c.gens)
                    if j not in found:
                        found.add(j)
                        new.add(j)
            frontier = new
        return tuple(sorted(found, key=Subgroup.sort_key))

    def subgroup_classes(self) -> list["Subgroup"]:
        """Minimal representative of each conjugacy class of subgroups."""
        reps = {canonical_subgroup(self, h)[0] for h in self._all_subgroups}
        return sorted(reps, key=Subgroup.sort_key)

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def descriptor(self) -> dict:
        return {
            "degree": int(self.degree),
            "generators": [self.perms[g].tolist() for g in self.generators],
        }


class Subgroup:
    __slots__ = ("group", "members", "order", "mask", "_gens", "_hash", "__weakref__")

    def __init__(self, group: FiniteGroup, members: tuple[int, ...]):
        self.group = group
        self.members = members
        self.order = len(members)
        self.mask = np.zeros(group.order, dtype=np.bool_)
        self.mask[list(members)] = True
        self._gens = None
        self._hash = hash((id(group), members))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.members == self.members
        )

    def __le__(self, other: "Subgroup") -> bool:
        return self.order <= other.order and bool(other.mask[list(self.members)].all())

    def __lt__(self, other: "Subgroup") -> bool:
        return self.order < other.order and self <= other

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __repr__(self) -> str:
        return f"<Subgroup order {self.order} {list(self.members)}>"

    def sort_key(self):
        return (self.order, self.members)

    @property
    def arr(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            orders = self.group.element_orders
            gens: list[int] = []
            cur = np.zeros(self.group.order, dtype=np.bool_)
            cur[0] = True
            for g in sorted(self.members, key=lambda m: (-orders[m], m)):
                if not cur[g]:
                    gens.append(g)
                    arr = np.asarray(gens, dtype=np.int64)
                    cur = _accel.closure_mask(self.group.mul, arr, arr)
                    if cur.sum() == self.order:
                        break
            self._gens = tuple(gens)
        return self._gens

    def is_normal(self) -> bool:
        return normalizer(self.group, self).order == self.group.order

    def conjugate(self, g: int) -> "Subgroup":
        return self.group.subgroup(self.group.conj[g, self.arr])

    def join(self, other: "Subgroup") -> "Subgroup":
        return self.group.generate(self.members + other.gens)

    def meet(self, other: "Subgroup") -> "Subgroup":
        return self.group.subgroup(np.flatnonzero(self.mask & other.mask))


def enumerate_group(generators: Sequence[Sequence[int]], degree: int, cap: int | None = None) -> FiniteGroup:
    """Close a set of permutations under composition."""
    cap = group_cap() if cap is None else cap
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"{list(g)} is not a permutation of degree {degree}")
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise GroupTooLarge("group too large")
        frontier = nxt
    perms = np.array(sorted(seen), dtype=np.int64).reshape(len(seen), degree)
    return _intern(perms)


def group_from_subgroup(sub: Subgroup) -> FiniteGroup:
    """The subgroup as a permutation group in its own right."""
    return _intern(sub.group.perms[list(sub.members)])


def embedding(sub_group: FiniteGroup, ambient: FiniteGroup) -> np.ndarray:
    """Index map from a group to a containing group of the same degree."""
    return np.array([ambient.index(row) for row in sub_group.perms], dtype=np.int64)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """``a x b`` acting on disjoint point sets; element ``(x, y)`` has index ``x*|b| + y``."""
    if a.order * b.order > group_cap():
        raise GroupTooLarge("group too large")
    na, nb = a.order, b.order
    left = np.repeat(a.perms, nb, axis=0)
    right = np.tile(b.perms + a.degree, (na, 1))
    perms = np.hstack([left, right])
    key = (perms.shape[1], perms.tobytes())
    grp = _REGISTRY.get(key)
    if grp is None:
        grp = FiniteGroup.__new__(FiniteGroup)
        grp.perms = np.ascontiguousarray(perms)
        grp.order, grp.degree = perms.shape
        grp.name = None
        grp._subgroups = {}
        grp._lookup = None
        ia = np.repeat(np.arange(na), nb)
        ib = np.tile(np.arange(nb), na)
        grp.mul = (a.mul[ia[:, None], ia[None, :]] * nb + b.mul[ib[:, None], ib[None, :]]).astype(np.int32)
        grp.inv = (a.inv[ia] * nb + b.inv[ib]).astype(np.int64)
        _REGISTRY[key] = grp
    grp.factors = (a, b)
    if a.name and b.name and grp.name is None:
        grp.name = f"{a.name}x{b.name}"
    return grp


def product_subgroup(prod: FiniteGroup, p: Subgroup, q: Subgroup) -> Subgroup:
    nb = prod.factors[1].order
    return prod.subgroup(x * nb + y for x in p.members for y in q.members)


def transporter(G: FiniteGroup, P: Subgroup, Q: Subgroup) -> np.ndarray:
    """All g with g P g^-1 contained in Q."""
    gens = list(P.gens)
    if not gens:
        return np.arange(G.order)
    return np.flatnonzero(Q.mask[G.conj[:, gens]].all(axis=1))


def normalizer(G: FiniteGroup, P: Subgroup) -> Subgroup:
    return G.subgroup(transporter(G, P, P))


def centralizer(G: FiniteGroup, P: Subgroup) -> Subgroup:
    gens = list(P.gens)
    if not gens:
        return G.whole
    return G.subgroup(np.flatnonzero((G.conj[:, gens] == np.asarray(gens)).all(axis=1)))


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, G.whole)


_CANON_SUB: dict[tuple[int, Subgroup], tuple[Subgroup, np.ndarray]] = {}


def canonical_subgroup(G: FiniteGroup, K: Subgroup) -> tuple[Subgroup, np.ndarray]:
    """Least conjugate of K (by member list) and every x with x K x^-1 equal to it."""
    hit = _CANON_SUB.get((id(G), K))
    if hit is not None:
        return hit
    conj = np.sort(G.conj[:, K.arr], axis=1)
    best = _accel.lexmin_row(conj)
    xs = np.flatnonzero((conj == conj[best]).all(axis=1))
    res = (G.subgroup(conj[best]), xs)
    _CANON_SUB[(id(G), K)] = res
    return res


class GroupHom:
    """A homomorphism from a subgroup into a group, stored as a full table."""

    __slots__ = ("source", "target", "images", "arr", "_hash")

    def __init__(self, source: Subgroup, target: FiniteGroup, images: Sequence[int]):
        self.source = source
        self.target = target
        self.images = tuple(int(v) for v in images)
        arr = np.full(source.group.order, -1, dtype=np.int64)
        arr[list(source.members)] = self.images
        self.arr = arr
        self._hash = hash((source, id(target), self.images))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and other.source == self.source
            and other.target is self.target
            and other.images == self.images
        )

    def __call__(self, x: int) -> int:
        v = self.arr[x]
        if v < 0:
            raise ValueError(f"{x} is outside the domain")
        return int(v)

    def __repr__(self) -> str:
        graph = ", ".join(f"{k}->{v}" for k, v in zip(self.source.members, self.images))
        return f"<GroupHom {graph}>"

    @property
    def image(self) -> Subgroup:
        return self.target.subgroup(set(self.images))

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    @property
    def kernel(self) -> Subgroup:
        return self.source.group.subgroup(k for k, v in zip(self.source.members, self.images) if v == 0)

    def is_homomorphism(self) -> bool:
        mul_s, mul_t = self.source.group.mul, self.target.mul
        m = self.source.arr
        prods = mul_s[np.ix_(m, m)]
        if not self.source.mask[prods].all():
            return False
        img = self.arr[m]
        return bool((self.arr[prods] == mul_t[np.ix_(img, img)]).all())

    def restrict(self, sub: Subgroup) -> "GroupHom":
        return GroupHom(sub, self.target, self.arr[sub.arr])

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``; the image of ``inner`` must lie in the domain of ``self``."""
        vals = self.arr[np.asarray(inner.images, dtype=np.int64)]
        if (vals < 0).any():
            raise ValueError("image of inner map is outside the domain")
        return GroupHom(inner.source, self.target, vals)

    def inverse(self) -> "GroupHom":
        if not self.is_injective:
            raise ValueError("map is not injective")
        img = self.image
        back = dict(zip(self.images, self.source.members))
        return GroupHom(img, self.source.group, [back[v] for v in img.members])

    def graph(self) -> list[list[int]]:
        return [[k, v] for k, v in zip(self.source.members, self.images)]


def inclusion(sub: Subgroup) -> GroupHom:
    return GroupHom(sub, sub.group, sub.members)


def conjugation(sub: Subgroup, g: int, target: FiniteGroup | None = None) -> GroupHom:
    """c_g restricted to ``sub``: x -> g x g^-1."""
    G = sub.group
    return GroupHom(sub, target or G, G.conj[g, sub.arr])


def trivial_hom(sub: Subgroup, target: FiniteGroup) -> GroupHom:
    return GroupHom(sub, target, [0] * sub.order)


class _Tree:
    """Spanning tree of the right Cayley graph of a subgroup, plus closing edges."""

    def __init__(self, sub: Subgroup):
        G = sub.group
        gens = sub.gens
        pos = {m: i for i, m in enumerate(sub.members)}
        parent = np.zeros(sub.order, dtype=np.int64)
        gen_of = np.zeros(sub.order, dtype=np.int64)
        seen = {0}
        order = [0]
        chk = []
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for i, g in enumerate(gens):
                y = int(G.mul[x, g])
                if y in seen:
                    chk.append((pos[x], i, pos[y]))
                else:
                    seen.add(y)
                    order.append(y)
                    parent[pos[y]] = pos[x]
                    gen_of[pos[y]] = i
        # table entries must be filled parents-first
        self.perm = np.asarray([pos[x] for x in order], dtype=np.int64)
        rank = np.empty(sub.order, dtype=np.int64)
        rank[self.perm] = np.arange(sub.order)
        self.parent = rank[parent[self.perm]]
        self.gen_of = gen_of[self.perm]
        chk = np.asarray(chk, dtype=np.int64).reshape(-1, 3)
        self.chk_x = rank[chk[:, 0]]
        self.chk_g = chk[:, 1].copy()
        self.chk_y = rank[chk[:, 2]]


_HOM_CACHE: dict[tuple, tuple[GroupHom, ...]] = {}


def homomorphisms(P: Subgroup | FiniteGroup, H: FiniteGroup, injective_only: bool = False) -> list[GroupHom]:
    """All homomorphisms P -> H (or all monomorphisms), in a fixed order."""
    if isinstance(P, FiniteGroup):
        P = P.whole
    key = (P, id(H), injective_only)
    hit = _HOM_CACHE.get(key)
    if hit is not None:
        return list(hit)
    if injective_only:
        out = tuple(h for h in homomorphisms(P, H) if h.is_injective)
        _HOM_CACHE[key] = out
        return list(out)
    gens = P.gens
    if not gens:
        out = (GroupHom(P, H, [0]),)
        _HOM_CACHE[key] = out
        return list(out)
    orders = P.group.element_orders
    choices = [np.flatnonzero(orders[g] % H.element_orders == 0) for g in gens]
    cands = np.array(list(cartesian_product(*choices)), dtype=np.int64).reshape(-1, len(gens))
    tree = _Tree(P)
    table, ok = _accel.extend_homs(H.mul, tree.parent, tree.gen_of, tree.chk_x, tree.chk_g, tree.chk_y, cands)
    out = []
    for row in table[ok]:
        images = np.empty(P.order, dtype=np.int64)
        images[tree.perm] = row
        out.append(GroupHom(P, H, images))
    _HOM_CACHE[key] = tuple(out)
    return out


def coset_quotient(S: FiniteGroup, T: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """S/T as a permutation group on the left cosets of T, with the projection."""
    if not T.is_normal():
        raise ValueError("subgroup is not normal")
    label = np.full(S.order, -1, dtype=np.int64)
    reps = []
    for s in range(S.order):
        if label[s] < 0:
            label[S.mul[s, T.arr]] = len(reps)
            reps.append(s)
    reps_arr = np.asarray(reps, dtype=np.int64)
    # element s sends coset rT to (s r)T
    action = label[S.mul[:, reps_arr]]
    gens = [action[g].tolist() for g in S.generators]
    Q = enumerate_group(gens, len(reps))
    proj = np.array([Q.index(row) for row in action], dtype=np.int64)
    return Q, proj


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown greedily by adjoining the least usable p-element."""
    n = G.order
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    orders = G.element_orders
    pelts = [g for g in range(1, G.order) if _is_p_power(int(orders[g]), p)]
    cur = G.trivial
    while cur.order < target:
        for g in pelts:
            if g in cur:
                continue
            cand = G.generate(cur.gens + (g,))
            if _is_p_power(cand.order, p):
                cur = cand
                break
        else:  # pragma: no cover - Sylow's theorem guarantees progress
            raise RuntimeError("could not extend p-subgroup")
    return cur


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1
