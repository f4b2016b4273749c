"""Named groups and fusion systems built from fixed recipes."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .fusion import FusionSystem, closure, fusion_from_group, minimal_fusion
from .groups import FiniteGroup, GroupHom, direct_product, enumerate_group, sylow_subgroup


# -- group recipes ------------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return _named(enumerate_group([], 1), "C1")
    return _named(enumerate_group([list(range(1, n)) + [0]], n), f"C{n}")


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    """(Z/p)^r acting on r disjoint blocks of p points."""
    deg = p * r
    gens = []
    for i in range(r):
        g = list(range(deg))
        for k in range(p):
            g[i * p + k] = i * p + (k + 1) % p
        gens.append(g)
    name = "V4" if (p, r) == (2, 2) else f"C{p}^{r}"
    return _named(enumerate_group(gens, deg), name)


def dihedral(order: int) -> FiniteGroup:
    n = order // 2
    if order % 2 or n < 2:
        raise ValueError("dihedral groups have even order >= 4")
    rot = list(range(1, n)) + [0]
    ref = [(-i) % n for i in range(n)]
    return _named(enumerate_group([rot, ref], n), f"D{order}")


_UNITS = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
          ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
          ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
          ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}


def quaternion8() -> FiniteGroup:
    """Q8 in its left regular representation."""
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]
    pos = {e: i for i, e in enumerate(elems)}

    def left(x):
        out = []
        for s, u in elems:
            t, w = _UNITS[(x[1], u)]
            out.append(pos[(x[0] * s * t, w)])
        return out

    return _named(enumerate_group([left((1, "i")), left((1, "j"))], 8), "Q8")


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return _named(enumerate_group([], 1), "S1")
    return _named(enumerate_group([[1, 0] + list(range(2, n)), list(range(1, n)) + [0]], n), f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return _named(enumerate_group([], max(n, 1)), f"A{n}")
    gens = [[1, 2, 0] + list(range(3, n))]
    if n > 3:
        if n % 2:
            gens.append(list(range(1, n)) + [0])
        else:
            gens.append([0] + list(range(2, n)) + [1])
    return _named(enumerate_group(gens, n), f"A{n}")


def product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    return direct_product(a, b)


def explicit(degree: int, generators) -> FiniteGroup:
    return enumerate_group(generators, degree)


def _named(G: FiniteGroup, name: str) -> FiniteGroup:
    if G.name is None:
        G.name = name
    return G


_GROUP_PATTERN = re.compile(r"^(C|S|A|D)(\d+)$")


def group_by_name(name: str) -> FiniteGroup:
    """Parse names such as C3, V4, D8, Q8, S4, A4, C2^3 and products like S3xC3."""
    name = name.strip()
    if "x" in name:
        parts = [group_by_name(part) for part in name.split("x")]
        G = parts[0]
        for H in parts[1:]:
            G = direct_product(G, H)
        return G
    if name == "V4":
        return elementary_abelian(2, 2)
    if name == "Q8":
        return quaternion8()
    m = re.match(r"^C(\d+)\^(\d+)$", name)
    if m:
        return elementary_abelian(int(m.group(1)), int(m.group(2)))
    m = _GROUP_PATTERN.match(name)
    if not m:
        raise KeyError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"C": cyclic, "S": symmetric, "A": alternating, "D": dihedral}[kind](n)


# -- fusion systems -----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    recipe: str
    p: int
    ambient: bool
    saturated: bool = True


def _from_group(group: str, p: int):
    def build():
        G = group_by_name(group)
        return fusion_from_group(G, sylow_subgroup(G, p), p)
    return build


def _minimal(group: str, p: int):
    def build():
        return minimal_fusion(group_by_name(group), p)
    return build


def _swap_v4():
    V = elementary_abelian(2, 2)
    a = V.index([1, 0, 2, 3])
    b = V.index([0, 1, 3, 2])
    images = list(V.whole.members)
    images[a], images[b] = b, a
    return closure(V, 2, [GroupHom(V.whole, V, images)])


CATALOG: dict[str, tuple[CatalogEntry, object]] = {}


def _register(entry: CatalogEntry, builder):
    CATALOG[entry.name] = (entry, builder)


for _name, _grp, _p in (("F(S3,C3)", "S3", 3), ("F(S4,D8)", "S4", 2), ("F(A4,V4)", "A4", 2),
                        ("F(S3xC3,C3xC3)", "S3xC3", 3)):
    _register(CatalogEntry(_name, f"sylow {_p} of {_grp}", _p, True), _from_group(_grp, _p))
for _grp, _p in (("C2", 2), ("C3", 3), ("V4", 2), ("C4", 2), ("D8", 2), ("Q8", 2), ("C3xC3", 3)):
    _register(CatalogEntry(f"F({_grp})", f"minimal on {_grp}", _p, False), _minimal(_grp, _p))
_register(CatalogEntry("swap-V4-unsaturated", "closure of the factor swap on V4", 2, False, saturated=False), _swap_v4)

_BUILT: dict[str, FusionSystem] = {}


def fusion_by_name(name: str) -> FusionSystem:
    hit = _BUILT.get(name)
    if hit is None:
        if name not in CATALOG:
            raise KeyError(f"unknown fusion system {name!r}")
        hit = CATALOG[name][1]()
        hit.name = name
        _BUILT[name] = hit
    return hit


def catalog_names(saturated_only: bool = False) -> list[str]:
    return [n for n, (e, _) in CATALOG.items() if e.saturated or not saturated_only]


def entry(name: str) -> CatalogEntry:
    return CATALOG[name][0]


# the systems used by the round-trip checks
ROUND_TRIP = ["F(C3)", "F(V4)", "F(C4)", "F(D8)", "F(Q8)", "F(S3,C3)", "F(S4,D8)", "F(A4,V4)", "F(S3xC3,C3xC3)"]


def subgroup_from_members(G: FiniteGroup, members):
    members = sorted(int(m) for m in members)
    sub = G.generate(members)
    if list(sub.members) != members:
        raise ValueError("member list is not a subgroup")
    return sub

