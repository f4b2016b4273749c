"""Batch command line: every command prints one JSON document on stdout.

Exit status is 0 on success, 2 when the mathematical answer is negative
(unsaturated, infeasible, identity fails, class rejected) and 1 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import burnside as bz
from .bideflation import IncompatibleClass, bidef_augmentation_check, bideflate
from .catalog import CATALOG, fusion_by_name, group_by_name, subgroup_from_members
from .characteristic import (
    characteristic_biset_from_group,
    characteristic_idempotent,
    congruence_suite,
    frobenius_check,
    frobenius_violation,
    is_characteristic,
    saturated_from_element,
)
from .fusion import PreFusionSystem, fusion_from_group, is_saturated, validate
from .groups import CAP_ENV, GroupTooLarge, Subgroup, sylow_subgroup
from .induced import RouteDisagreement, full_stabilizer, infer_prime, left_stabilizer, right_stabilizer
from .pairs import PairClass, signature
from .serialize import element_from_json, element_to_json, fraction_str, fusion_from_json, fusion_to_json

MATH_FAIL = 2
INPUT_ERROR = 1


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _plain(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, bz.BurnsideElement):
        return element_to_json(obj)
    if isinstance(obj, PairClass):
        return {"K": list(obj.K.members), "phi": obj.phi.graph()}
    if isinstance(obj, Subgroup):
        return list(obj.members)
    if isinstance(obj, PreFusionSystem):
        return fusion_to_json(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_plain)


# -- argument resolution ------------------------------------------------------------

def _load_json(text: str):
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    path = Path(text)
    if not path.is_file():
        raise InputError(f"not inline JSON and no such file: {text}")
    return json.loads(path.read_text())


def _ambient_biset(name: str) -> bz.BurnsideElement:
    F = fusion_by_name(name)
    if F.ambient is None:
        raise InputError(f"{name} has no ambient group")
    G, emb = F.ambient
    return characteristic_biset_from_group(G, G.subgroup(emb))


def resolve_element(arg: str) -> bz.BurnsideElement:
    """Inline JSON, a JSON file, or idempotent:NAME, group:NAME, identity:GROUP, basis:G:H:i."""
    kind, _, rest = arg.partition(":")
    if kind == "idempotent" and rest:
        solved = characteristic_idempotent(fusion_by_name(rest))
        if solved.status != "ok":
            raise InputError(f"{rest} has no characteristic idempotent ({solved.status})")
        return solved.element
    if kind == "group" and rest:
        return _ambient_biset(rest)
    if kind == "identity" and rest:
        return bz.identity_element(group_by_name(rest))
    if kind == "basis" and rest:
        parts = rest.split(":")
        if len(parts) != 3:
            raise InputError("basis elements are written basis:G:H:index")
        sig = signature(group_by_name(parts[0]), group_by_name(parts[1]))
        cls = sig.basis()[int(parts[2])]
        return bz.BurnsideElement(sig, {cls: 1})
    return element_from_json(_load_json(arg))


def resolve_fusion(arg: str) -> PreFusionSystem:
    if arg in CATALOG:
        return fusion_by_name(arg)
    return fusion_from_json(_load_json(arg))


def _prime(args, S) -> int:
    return args.p if args.p else infer_prime(S)


def _square_group(X: bz.BurnsideElement):
    if X.sig.G is not X.sig.H:
        raise InputError("element must lie in A(S, S)")
    return X.sig.G


# -- commands -----------------------------------------------------------------------

def cmd_basis(args):
    G, H = group_by_name(args.G), group_by_name(args.H)
    classes = bz.bifree_basis(G, H) if args.bifree else bz.basis(G, H)
    return {"count": len(classes), "classes": classes}, 0


def cmd_marks(args):
    X = resolve_element(args.element)
    return {"classes": X.sig.basis(), "marks": bz.marks(X)}, 0


def cmd_compose(args):
    X, Y = resolve_element(args.left), resolve_element(args.right)
    Z = bz.compose(X, Y)
    doc = {"element": Z}
    if args.oracle:
        doc["oracle_agrees"] = bz.oracle_compose(X, Y) == Z
        return doc, 0 if doc["oracle_agrees"] else MATH_FAIL
    return doc, 0


def cmd_product(args):
    X, Y = resolve_element(args.left), resolve_element(args.right)
    Z = bz.cartesian(X, Y)
    doc = {"element": Z}
    if args.oracle:
        doc["oracle_agrees"] = bz.cartesian(X, Y, oracle=True) == Z
        return doc, 0 if doc["oracle_agrees"] else MATH_FAIL
    return doc, 0


def cmd_opposite(args):
    X = resolve_element(args.element)
    try:
        return {"element": bz.opposite(X)}, 0
    except bz.OppositeUndefined as exc:
        return {"defined": False, "reason": str(exc)}, MATH_FAIL


def cmd_augment(args):
    X = resolve_element(args.element)
    doc = {"epsilon": bz.augmentation(X), "right_epsilon": bz.right_augmentation(X),
           "bifree": bz.is_bifree(X)}
    if X.sig.G is X.sig.H:
        doc["dominant"] = bz.is_dominant(X)
    if args.p:
        doc["p_local"] = bz.is_p_local(X, args.p)
    return doc, 0


def cmd_fusion(args):
    if args.group:
        G = group_by_name(args.group)
        p = args.p or infer_prime(G)
        F = fusion_from_group(G, sylow_subgroup(G, p), p)
    elif args.source:
        data = None if args.source in CATALOG else _load_json(args.source)
        if data is None:
            F = fusion_by_name(args.source)
        else:
            if args.close:
                data = dict(data, close=True)
            F = fusion_from_json(data)
    else:
        raise InputError("give a catalog name, a JSON source or --group")
    problems = validate(F)
    doc = {"fusion": F, "morphisms": F.size(), "valid": not problems, "problems": problems}
    return doc, 0 if not problems else MATH_FAIL


def cmd_saturate(args):
    F = resolve_fusion(args.fusion)
    v = is_saturated(F)
    doc = {"saturated": v.saturated, "reason": v.reason, "witness": v.witness}
    return doc, 0 if v.saturated else MATH_FAIL


def cmd_idempotent(args):
    F = resolve_fusion(args.fusion)
    solved = characteristic_idempotent(F)
    doc = {"status": solved.status, "element": solved.element, "denominators": solved.denominators,
           "nullity": solved.nullity, "checks": solved.checks}
    return doc, 0 if solved.status == "ok" else MATH_FAIL


def cmd_frobenius(args):
    X = resolve_element(args.element)
    _square_group(X)
    route = "both" if args.oracle else args.route
    ok = frobenius_check(X, route)
    doc = {"holds": ok, "route": route}
    if not ok and route != "composite":
        doc["witness"] = frobenius_violation(X)
    return doc, 0 if ok else MATH_FAIL


def cmd_stabilizer(args):
    X = resolve_element(args.element)
    S = _square_group(X)
    p = _prime(args, S)
    if args.side == "right":
        F = right_stabilizer(X, p)
    elif args.side == "left":
        F = left_stabilizer(X, p, cross_check=args.oracle)
    else:
        F = full_stabilizer(X, p)
    v = is_saturated(F)
    return {"fusion": F, "morphisms": F.size(), "saturated": v.saturated, "reason": v.reason}, 0


def cmd_saturation_from_element(X, p):
    res = saturated_from_element(X, p)
    return {"verdict": res.verdict, "reasons": res.reasons, "certificate": res.certificate,
            "fusion": res.fusion}, 0 if res.verdict == "saturated" else MATH_FAIL


def cmd_roundtrip(args):
    F = resolve_fusion(args.fusion)
    solved = characteristic_idempotent(F)
    doc = {"status": solved.status}
    if solved.status != "ok":
        return doc, MATH_FAIL
    w = solved.element
    checks = {
        "bifree": bz.is_bifree(w),
        "epsilon_one": bz.augmentation(w) == 1,
        "idempotent": bz.compose(w, w) == w,
        "symmetric": bz.opposite(w) == w,
        "frobenius": frobenius_check(w, "both"),
        "stabilizer_matches": full_stabilizer(w, F.p) == F,
    }
    if args.element:
        sat_doc, _ = cmd_saturation_from_element(w, F.p)
        checks["saturation_from_element"] = sat_doc["verdict"] == "saturated"
        checks["recovered"] = sat_doc["fusion"] == F
    doc.update(element=w, checks=checks)
    return doc, 0 if all(checks.values()) else MATH_FAIL


def cmd_bideflate(args):
    X = resolve_element(args.element)
    S = _square_group(X)
    T = subgroup_from_members(S, json.loads(args.T) if args.T.startswith("[") else args.T.split(","))
    try:
        Y = bideflate(X, T, oracle=args.oracle)
    except IncompatibleClass as exc:
        return {"rejected": str(exc)}, MATH_FAIL
    doc = {"element": Y, "epsilon": bz.augmentation(Y)}
    if args.check:
        doc["checks"] = bidef_augmentation_check(X, T, resolve_fusion(args.check))
    return doc, 0


def cmd_congruences(args):
    X = resolve_element(args.element)
    S = _square_group(X)
    rep = congruence_suite(X, _prime(args, S))
    return rep.to_json(), 0 if rep.ok else MATH_FAIL


def cmd_report(args):
    X = resolve_element(args.element)
    if args.fusion is None:
        S = _square_group(X)
        return cmd_saturation_from_element(X, _prime(args, S))
    F = resolve_fusion(args.fusion)
    rep = is_characteristic(X, F, side=args.side, frobenius=not args.no_frobenius)
    return rep.to_json(), 0 if rep.characteristic else MATH_FAIL


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (default: inferred from the group order)")
    common.add_argument("--cap", type=int, default=None, help="largest group order to enumerate")
    common.add_argument("--oracle", action="store_true", help="force the independent cross-checks")

    parser = _Parser(prog="burnside-fusion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("basis", cmd_basis, "list the basis classes of A(G, H)")
    sp.add_argument("G")
    sp.add_argument("H")
    sp.add_argument("--bifree", action="store_true")
    add("marks", cmd_marks, "mark vector of an element").add_argument("element")
    for name, func in (("compose", cmd_compose), ("product", cmd_product)):
        sp = add(name, func, f"{name} two elements")
        sp.add_argument("left")
        sp.add_argument("right")
    add("opposite", cmd_opposite, "opposite of a bifree element").add_argument("element")
    add("augment", cmd_augment, "left and right augmentations").add_argument("element")

    sp = add("fusion", cmd_fusion, "build a fusion system")
    sp.add_argument("source", nargs="?", help="catalog name or morphism JSON")
    sp.add_argument("--group", help="fusion system of a Sylow p-subgroup of this group")
    sp.add_argument("--close", action="store_true", help="close the given morphisms")
    for name, func, text in (("saturate", cmd_saturate, "saturation verdict"),
                             ("idempotent", cmd_idempotent, "solve for the characteristic idempotent")):
        add(name, func, text).add_argument("fusion")
    sp = add("roundtrip", cmd_roundtrip, "idempotent, its properties, and its stabilizer")
    sp.add_argument("fusion")
    sp.add_argument("--element", action="store_true", help="also recover the system from the element")

    sp = add("frobenius", cmd_frobenius, "reciprocity identity for an element of A(S, S)")
    sp.add_argument("element")
    sp.add_argument("--route", choices=("marks", "composite", "both"), default="marks")
    sp = add("stabilizer", cmd_stabilizer, "stabilizer fusion system of an element")
    sp.add_argument("element")
    sp.add_argument("--side", choices=("right", "left", "full"), default="right")

    sp = add("bideflate", cmd_bideflate, "bideflate along a normal subgroup")
    sp.add_argument("element")
    sp.add_argument("T", help="member indices, comma separated or a JSON list")
    sp.add_argument("--check", metavar="FUSION", help="also evaluate the augmentation checks against FUSION")
    add("congruences", cmd_congruences, "divisibility and congruence checks").add_argument("element")

    sp = add("report", cmd_report, "characteristic report, or saturation from the element alone")
    sp.add_argument("element")
    sp.add_argument("fusion", nargs="?")
    sp.add_argument("--side", choices=("right", "left", "full"), default="full")
    sp.add_argument("--no-frobenius", action="store_true")
    return parser


def run(argv=None) -> tuple[int, str]:
    """Parse and execute; returns (exit status, JSON text)."""
    saved = os.environ.get(CAP_ENV)
    try:
        args = build_parser().parse_args(argv)
        if args.cap:
            os.environ[CAP_ENV] = str(args.cap)
        doc, status = args.func(args)
        return status, _emit(doc)
    except RouteDisagreement as exc:
        return MATH_FAIL, _emit({"error": "route disagreement", "detail": str(exc)})
    except (InputError, GroupTooLarge, ValueError, KeyError, IndexError, OSError) as exc:
        return INPUT_ERROR, _emit({"error": type(exc).__name__, "detail": str(exc)})
    finally:
        if saved is None:
            os.environ.pop(CAP_ENV, None)
        else:
            os.environ[CAP_ENV] = saved


def main(argv=None) -> int:
    status, text = run(argv)
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
