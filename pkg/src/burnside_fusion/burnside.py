"""Double Burnside modules A(G, H) with exact rational coefficients.

An element is a sparse combination of basis classes [K, phi].  Composition
``X o Y`` takes X in A(H, K) and Y in A(G, H) to A(G, K), following the
double coset formula; ``oracle_compose`` recomputes the same product from
explicit bisets.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .bisets import ExplicitBiset
from .groups import FiniteGroup, GroupHom, Subgroup, direct_product, product_subgroup, group_cap, GroupTooLarge
from .pairs import PairClass, Signature, canonicalize, mark_value, signature


class BurnsideElement:
    __slots__ = ("sig", "terms", "_marks")

    def __init__(self, sig: Signature, terms: Mapping[PairClass, object] | None = None):
        self.sig = sig
        clean: dict[PairClass, Fraction] = {}
        for cls, c in (terms or {}).items():
            if cls.sig is not sig:
                raise ValueError("basis class from another signature")
            c = Fraction(c)
            if c:
                clean[cls] = clean.get(cls, Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}
        self._marks: dict = {}

    @classmethod
    def basis_element(cls, sig: Signature, K: Subgroup, phi, coeff=1) -> "BurnsideElement":
        return cls(sig, {canonicalize(sig, K, phi): coeff})

    @classmethod
    def zero(cls, sig: Signature) -> "BurnsideElement":
        return cls(sig)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, cls: PairClass) -> Fraction:
        return self.terms.get(cls, Fraction(0))

    def support(self) -> list[PairClass]:
        return [c for c, _ in self.items()]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "BurnsideElement"):
        if other.sig is not self.sig:
            raise ValueError("signature mismatch")

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return BurnsideElement(self.sig, out)

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(self.sig, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self + (-other)

    def __mul__(self, scalar) -> "BurnsideElement":
        s = Fraction(scalar)
        return BurnsideElement(self.sig, {k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, BurnsideElement) and other.sig is self.sig and other.terms == self.terms

    def __hash__(self):
        return hash((id(self.sig), frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*[{k.K.order},{k!r}]" for k, v in self.items())

    def __matmul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return compose(self, other)


def basis(G: FiniteGroup, H: FiniteGroup) -> list[PairClass]:
    return signature(G, H).basis()


def bifree_basis(G: FiniteGroup, H: FiniteGroup) -> list[PairClass]:
    return [c for c in basis(G, H) if c.injective]


def identity_element(S: FiniteGroup) -> BurnsideElement:
    sig = signature(S, S)
    return BurnsideElement.basis_element(sig, S.whole, S.whole.members)


# -- marks ------------------------------------------------------------------

def mark_at(X: BurnsideElement, K: Subgroup, phi: GroupHom) -> Fraction:
    """Phi_<K,phi>(X) for any pair (K, phi) of X's signature."""
    key = (K.members, phi.images)
    val = X._marks.get(key)
    if val is None:
        sig = X.sig
        if sig.G is sig.H:
            # square signatures: dense vector over the (cached) basis
            vec = X._marks.get("vector")
            if vec is None:
                vec = X._marks["vector"] = marks(X)
            val = vec[sig.index(canonicalize(sig, K, phi))]
        else:
            val = Fraction(0)
            for cls, c in X.terms.items():
                m = mark_value(sig, K, phi, cls.K, cls.phi)
                if m:
                    val += c * m
        X._marks[key] = val
    return val


def marks(X: BurnsideElement) -> list[Fraction]:
    """Mark vector of X over the ordered basis of its signature."""
    sig = X.sig
    out = [Fraction(0)] * len(sig.basis())
    for cls, c in X.terms.items():
        col = sig.mark_column(cls)
        for i, m in enumerate(col):
            if m:
                out[i] += c * m
    return out


def mark_matrix(G: FiniteGroup, H: FiniteGroup) -> np.ndarray:
    return signature(G, H).mark_matrix()


class NotInImage(ValueError):
    pass


def from_marks(sig: Signature, values: Iterable, p: int | None = None, integral: bool = False) -> BurnsideElement:
    """Invert the mark homomorphism by back substitution.

    The mark matrix is upper triangular for the basis order (subconjugate
    classes have strictly smaller K), so the solve is exact.  With ``integral``
    or ``p`` the result must lie in A(G, H) or its p-local version.
    """
    basis_ = sig.basis()
    v = [Fraction(x) for x in values]
    if len(v) != len(basis_):
        raise NotInImage("not in image of Φ")
    n = len(basis_)
    cols = [sig.mark_column(c) for c in basis_]
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = v[i]
        for j in range(i + 1, n):
            if coeffs[j]:
                acc -= cols[j][i] * coeffs[j]
        coeffs[i] = acc / cols[i][i]
    for c in coeffs:
        if integral and c.denominator != 1:
            raise NotInImage("not in image of Φ")
        if p is not None and c.denominator % p == 0:
            raise NotInImage("not in image of Φ")
    return BurnsideElement(sig, dict(zip(basis_, coeffs)))


def general_fixed_points(X: BurnsideElement, pairs) -> Fraction:
    """Fixed points of an arbitrary subgroup of H x G, given by generating pairs (h, g)."""
    total = Fraction(0)
    for cls, c in X.terms.items():
        b = ExplicitBiset.from_pair(X.sig.G, X.sig.H, cls.K, cls.phi)
        total += c * b.fixed_points(pairs)
    return total


# -- composition -------------------------------------------------------------

_DCOSETS: dict[tuple, tuple[int, ...]] = {}


def double_coset_reps(H: FiniteGroup, A: Subgroup, C: Subgroup) -> tuple[int, ...]:
    """Least element of each double coset A x C in H."""
    key = (A, C)
    hit = _DCOSETS.get(key)
    if hit is not None:
        return hit
    seen = np.zeros(H.order, dtype=np.bool_)
    reps = []
    a, c = A.arr, C.arr
    for x in range(H.order):
        if seen[x]:
            continue
        reps.append(x)
        seen[H.mul[H.mul[a, x][:, None], c[None, :]].ravel()] = True
    out = tuple(reps)
    _DCOSETS[key] = out
    return out


def compose_pairs(out_sig: Signature, A: Subgroup, phi: GroupHom, B: Subgroup, psi: GroupHom) -> list[PairClass]:
    """[A, phi] o [B, psi] as a list of classes (with repetition).

    A <= H with phi: A -> K and B <= G with psi: B -> H.  Each double coset
    A x psi(B) contributes [{b : x psi(b) x^-1 in A}, b -> phi(x psi(b) x^-1)].
    """
    H = A.group
    out = []
    pb = psi.arr[B.arr]
    for x in double_coset_reps(H, A, psi.image):
        vals = H.conj[x, pb]
        sel = A.mask[vals]
        L = B.group.subgroup(B.arr[sel])
        imgs = phi.arr[vals[sel]]
        order = np.argsort(B.arr[sel])
        out.append(canonicalize(out_sig, L, imgs[order]))
    return out


def compose(X: BurnsideElement, Y: BurnsideElement) -> BurnsideElement:
    """X o Y for X in A(H, K), Y in A(G, H)."""
    if X.sig.G is not Y.sig.H:
        raise ValueError("signature mismatch")
    out_sig = signature(Y.sig.G, X.sig.H)
    acc: dict[PairClass, Fraction] = {}
    for a, ca in X.terms.items():
        for b, cb in Y.terms.items():
            c = ca * cb
            for cls in compose_pairs(out_sig, a.K, a.phi, b.K, b.phi):
                acc[cls] = acc.get(cls, Fraction(0)) + c
    return BurnsideElement(out_sig, acc)


def oracle_compose(X: BurnsideElement, Y: BurnsideElement) -> BurnsideElement:
    """X o Y through explicit bisets; coefficients are expanded bilinearly."""
    if X.sig.G is not Y.sig.H:
        raise ValueError("signature mismatch")
    out_sig = signature(Y.sig.G, X.sig.H)
    acc: dict[PairClass, Fraction] = {}
    for a, ca in X.terms.items():
        bx = ExplicitBiset.from_pair(a.sig.G, a.sig.H, a.K, a.phi)
        for b, cb in Y.terms.items():
            by = ExplicitBiset.from_pair(b.sig.G, b.sig.H, b.K, b.phi)
            for cls, n in bx.tensor(by).decompose(out_sig).items():
                acc[cls] = acc.get(cls, Fraction(0)) + ca * cb * n
    return BurnsideElement(out_sig, acc)


def product_pair(sig1: Signature, a: PairClass, sig2: Signature, b: PairClass, G: FiniteGroup, H: FiniteGroup):
    """The pair (K1 x K2, phi1 x phi2) inside G = G1 x G2, H = H1 x H2."""
    K = product_subgroup(G, a.K, b.K)
    nh2 = sig2.H.order
    imgs = [a.phi.arr[x // sig2.G.order] * nh2 + b.phi.arr[x % sig2.G.order] for x in K.members]
    return K, GroupHom(K, H, imgs)


def cartesian(X: BurnsideElement, Y: BurnsideElement, oracle: bool = False) -> BurnsideElement:
    """X x Y in A(G1 x G2, H1 x H2).

    The product of two transitive bisets is transitive with stabilizer the
    product of the diagonals, so each term pair gives one class.  With
    ``oracle`` the explicit product biset is decomposed as well and compared.
    """
    G = direct_product(X.sig.G, Y.sig.G)
    H = direct_product(X.sig.H, Y.sig.H)
    sig = signature(G, H)
    acc: dict[PairClass, Fraction] = {}
    for a, ca in X.terms.items():
        for b, cb in Y.terms.items():
            K, phi = product_pair(X.sig, a, Y.sig, b, G, H)
            cls = canonicalize(sig, K, phi)
            if oracle:
                ba = ExplicitBiset.from_pair(a.sig.G, a.sig.H, a.K, a.phi)
                bb = ExplicitBiset.from_pair(b.sig.G, b.sig.H, b.K, b.phi)
                got = ba.product(bb).decompose(sig)
                if dict(got) != {cls: 1}:
                    raise RuntimeError("product disagrees with the explicit biset")
            acc[cls] = acc.get(cls, Fraction(0)) + ca * cb
    return BurnsideElement(sig, acc)


class OppositeUndefined(ValueError):
    pass


def opposite(X: BurnsideElement) -> BurnsideElement:
    """[K, phi] -> [phi(K), phi^-1]; defined on bifree elements only."""
    out_sig = signature(X.sig.H, X.sig.G)
    acc = {}
    for cls, c in X.terms.items():
        if not cls.injective:
            raise OppositeUndefined("opposite undefined on non-bifree element")
        inv = cls.phi.inverse()
        acc[canonicalize(out_sig, inv.source, inv)] = c
    return BurnsideElement(out_sig, acc)


def augmentation(X: BurnsideElement) -> Fraction:
    n = X.sig.G.order
    return sum((c * Fraction(n, cls.K.order) for cls, c in X.terms.items()), Fraction(0))


def right_augmentation(X: BurnsideElement) -> Fraction:
    n = X.sig.H.order
    return sum((c * Fraction(n, cls.image.order) for cls, c in X.terms.items()), Fraction(0))


def is_bifree(X: BurnsideElement) -> bool:
    return all(cls.injective for cls in X.terms)


def is_p_local(X: BurnsideElement, p: int) -> bool:
    return all(c.denominator % p for c in X.terms.values())


def is_dominant(X: BurnsideElement) -> bool:
    """Nonzero coefficient at some class whose map is onto the whole target group."""
    n = X.sig.H.order
    return any(cls.image.order == n for cls in X.terms)


def m_value(X: BurnsideElement, P: Subgroup) -> Fraction:
    """Sum of the coefficients at classes <Q, phi> with Q conjugate to P."""
    from .groups import canonical_subgroup

    Pc = canonical_subgroup(X.sig.G, P)[0]
    return sum((c for cls, c in X.terms.items() if cls.K == Pc), Fraction(0))


def p_valuation(x: Fraction, p: int) -> float:
    """p-adic valuation; +inf for zero."""
    if x == 0:
        return float("inf")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def congruent(a: Fraction, b: Fraction, p: int) -> bool:
    return p_valuation(Fraction(a) - Fraction(b), p) >= 1


def diagonal_element(S: FiniteGroup) -> BurnsideElement:
    """[S, Delta] in A(S, S x S)."""
    SS = direct_product(S, S)
    n = S.order
    sig = signature(S, SS)
    return BurnsideElement.basis_element(sig, S.whole, [s * n + s for s in S.whole.members])


def random_element(sig: Signature, rng: np.random.Generator, terms: int = 4, bifree: bool = False,
                   low: int = -3, high: int = 3, pool: list[PairClass] | None = None) -> BurnsideElement:
    """Random integer combination of basis classes (used by the test suites)."""
    if pool is None:
        pool = [c for c in sig.basis() if c.injective or not bifree]
    pick = rng.choice(len(pool), size=min(terms, len(pool)), replace=False)
    coeffs = {}
    for i in pick:
        c = 0
        while c == 0:
            c = int(rng.integers(low, high + 1))
        coeffs[pool[int(i)]] = c
    return BurnsideElement(sig, coeffs)


def check_cap(n: int):
    if n > group_cap():
        raise GroupTooLarge("group too large")
