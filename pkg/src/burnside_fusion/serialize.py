"""JSON forms of groups, Burnside elements and fusion systems.

Element indices refer to the deterministic element order of the group built
from the descriptor, so a descriptor plus index lists is a complete encoding.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .burnside import BurnsideElement
from .fusion import FusionSystem, PreFusionSystem, closure, validate
from .groups import FiniteGroup, GroupHom, enumerate_group
from .pairs import canonicalize, signature


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def group_to_json(G: FiniteGroup) -> dict:
    return G.descriptor()


def group_from_json(d: dict) -> FiniteGroup:
    try:
        return enumerate_group(d["generators"], int(d["degree"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed group descriptor: {exc}") from exc


def _subgroup(G: FiniteGroup, members):
    members = sorted(int(m) for m in members)
    sub = G.generate(members)
    if list(sub.members) != members:
        raise ValueError("member list is not a subgroup")
    return sub


def element_to_json(X: BurnsideElement) -> dict:
    terms = [
        {"K": list(cls.K.members), "phi": cls.phi.graph(), "coeff": fraction_str(c)}
        for cls, c in X.items()
    ]
    return {"signature": {"G": group_to_json(X.sig.G), "H": group_to_json(X.sig.H)}, "terms": terms}


def element_from_json(d: dict) -> BurnsideElement:
    try:
        G = group_from_json(d["signature"]["G"])
        H = group_from_json(d["signature"]["H"])
        sig = signature(G, H)
        acc: dict = {}
        for t in d["terms"]:
            K = _subgroup(G, t["K"])
            table = {int(a): int(b) for a, b in t["phi"]}
            phi = GroupHom(K, H, [table[k] for k in K.members])
            if not phi.is_homomorphism():
                raise ValueError("term map is not a homomorphism")
            cls = canonicalize(sig, K, phi)
            acc[cls] = acc.get(cls, Fraction(0)) + Fraction(str(t["coeff"]))
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed element: {exc}") from exc
    return BurnsideElement(sig, acc)


def fusion_to_json(F: PreFusionSystem) -> dict:
    out = F.to_json()
    out["close"] = False
    name = getattr(F, "name", None)
    if name:
        out["name"] = name
    return out


def fusion_from_json(d: dict) -> PreFusionSystem:
    """Morphism graphs on a group; with ``close`` the fusion system they generate."""
    try:
        S = group_from_json(d["group"])
        p = int(d["p"])
        homs: dict = {}
        for m in d.get("morphisms", []):
            P = _subgroup(S, m["source"])
            table = {int(a): int(b) for a, b in m["graph"]}
            phi = GroupHom(P, S, [table[k] for k in P.members])
            if not phi.is_homomorphism() or not phi.is_injective:
                raise ValueError("morphisms must be injective homomorphisms")
            homs.setdefault(P, set()).add(phi.images)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed fusion system: {exc}") from exc
    pre = PreFusionSystem(S, p, homs)
    if d.get("close"):
        F = closure(S, p, pre=pre)
    elif not validate(pre):
        F = FusionSystem(S, p, pre.homs)
    else:
        return pre
    if d.get("name"):
        F.name = d["name"]
    return F
