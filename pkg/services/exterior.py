# services/exterior.py
"""
Weighted exterior algebra on ambient element labels.

An ExtVector maps a subset mask to a Fraction coefficient. Signs always use
the ambient order, so monomials of a minor are just ambient monomials whose
support lies in the minor's ground set. Weights are a tuple a[i] of nonzero
integers indexed by ambient element.
"""
from __future__ import annotations
import itertools
import logging
from fractions import Fraction
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

from services.errors import InhomogeneousInput, OverlappingSets
from services.matroid import Matroid, elements, fmt_set, popcount

log = logging.getLogger(__name__)

Weights = Sequence[int]
Scalar = Union[int, Fraction]


# ------------------------- values -------------------------
class ExtVector:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, Scalar]] = None):
        self.terms: Dict[int, Fraction] = {}
        for mask, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[mask] = c

    @classmethod
    def monomial(cls, mask: int, coeff: Scalar = 1) -> "ExtVector":
        return cls({mask: coeff})

    @classmethod
    def zero(cls) -> "ExtVector":
        return cls()

    @classmethod
    def combination(cls, monomials: Sequence[int], coeffs: Sequence[Scalar]) -> "ExtVector":
        out: Dict[int, Fraction] = {}
        for m, c in zip(monomials, coeffs):
            out[m] = out.get(m, Fraction(0)) + Fraction(c)
        return cls(out)

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, mask: int) -> Fraction:
        return self.terms.get(mask, Fraction(0))

    def coords(self, monomials: Sequence[int]) -> list:
        return [self.coeff(m) for m in monomials]

    def support(self) -> int:
        out = 0
        for m in self.terms:
            out |= m
        return out

    def degrees(self) -> set:
        return {popcount(m) for m in self.terms}

    def __add__(self, other: "ExtVector") -> "ExtVector":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return ExtVector(out)

    def __sub__(self, other: "ExtVector") -> "ExtVector":
        return self + other.scale(-1)

    def __neg__(self) -> "ExtVector":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "ExtVector":
        return ExtVector({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtVector):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e{fmt_set(m)}" for m, c in self)


@dataclass(frozen=True)
class GradedPiece:
    matroid: Matroid
    degree: int
    rank: int
    monomials: Tuple[int, ...]  # ambient masks, increasing

    def __len__(self) -> int:
        return len(self.monomials)


# ------------------------- signs and weights -------------------------
def eps_sign(s: int, t: int) -> int:
    """(-1)^k with k = #{(x, y) in S x T : x > y}."""
    if s & t:
        raise OverlappingSets(f"Sign needs disjoint sets, got {fmt_set(s)} and {fmt_set(t)}.")
    k = 0
    for y in elements(t):
        k += popcount(s >> (y + 1))
    return -1 if k & 1 else 1


def weight_of(a: Weights, mask: int) -> int:
    out = 1
    for i in elements(mask):
        out *= a[i]
    return out


def weight_sum(a: Weights, mask: int) -> int:
    return sum(a[i] for i in elements(mask))


# ------------------------- products -------------------------
def wedge(x: ExtVector, y: ExtVector) -> ExtVector:
    out: Dict[int, Fraction] = {}
    for s, cs in x.terms.items():
        for t, ct in y.terms.items():
            if s & t:
                continue
            m = s | t
            out[m] = out.get(m, Fraction(0)) + eps_sign(s, t) * cs * ct
    return ExtVector(out)


def pair(x: ExtVector, y: ExtVector, a: Weights) -> Fraction:
    """<e_S, e_T> = a(S)^-1 if S = T, else 0."""
    small, big = (x, y) if len(x.terms) <= len(y.terms) else (y, x)
    total = Fraction(0)
    for m, c in small.terms.items():
        d = big.terms.get(m)
        if d is not None:
            total += c * d / weight_of(a, m)
    return total


def contract_left(x: ExtVector, y: ExtVector, a: Weights) -> ExtVector:
    """x -| y, adjoint to left wedge: <x -| y, z> = <y, x ^ z>."""
    out: Dict[int, Fraction] = {}
    for s, cs in x.terms.items():
        w = weight_of(a, s)
        for t, ct in y.terms.items():
            if s & t != s:
                continue
            rest = t & ~s
            out[rest] = out.get(rest, Fraction(0)) + Fraction(eps_sign(s, rest) * cs * ct, 1) / w
    return ExtVector(out)


def contract_right(x: ExtVector, y: ExtVector, a: Weights) -> ExtVector:
    """x |- y, adjoint to right wedge: <x |- y, z> = <x, z ^ y>."""
    out: Dict[int, Fraction] = {}
    for v, cv in y.terms.items():
        w = weight_of(a, v)
        for t, ct in x.terms.items():
            if t & v != v:
                continue
            rest = t & ~v
            out[rest] = out.get(rest, Fraction(0)) + Fraction(eps_sign(rest, v) * ct * cv, 1) / w
    return ExtVector(out)


# ------------------------- differentials -------------------------
def boundary(x: ExtVector) -> ExtVector:
    """d(e_S) = sum_i (-1)^i e_{S - s_i}, i counted from 1 in increasing order."""
    out: Dict[int, Fraction] = {}
    for m, c in x.terms.items():
        for i, s in enumerate(elements(m), start=1):
            rest = m & ~(1 << s)
            out[rest] = out.get(rest, Fraction(0)) + (c if i % 2 == 0 else -c)
    return ExtVector(out)


def delta(x: ExtVector, a: Weights, ground: Optional[int] = None) -> ExtVector:
    """Pairing-adjoint of boundary: delta(e) = -sum_{s in ground} a(s) s ^ e."""
    if ground is None:
        ground = (1 << len(a)) - 1
    out: Dict[int, Fraction] = {}
    for m, c in x.terms.items():
        for s in elements(ground & ~m):
            bit = 1 << s
            key = m | bit
            out[key] = out.get(key, Fraction(0)) - eps_sign(bit, m) * a[s] * c
    return ExtVector(out)


def _local_rank(m: Matroid, amask: int) -> int:
    return m.rank(m.from_ambient(amask))


def bidegree(m: Matroid, x: ExtVector) -> Optional[Tuple[int, int]]:
    """(degree, rank) shared by all terms of x, None for the zero vector."""
    kinds = {(popcount(t), _local_rank(m, t)) for t in x.terms}
    if len(kinds) > 1:
        raise InhomogeneousInput(f"Vector mixes (degree, rank) pairs {sorted(kinds)}.")
    return next(iter(kinds)) if kinds else None


def _keep_rank(m: Matroid, x: ExtVector, rank: int) -> ExtVector:
    return ExtVector({t: c for t, c in x.terms.items() if _local_rank(m, t) == rank})


def boundary_h(m: Matroid, x: ExtVector) -> ExtVector:
    bd = bidegree(m, x)
    if bd is None:
        return ExtVector.zero()
    return _keep_rank(m, boundary(x), bd[1] - 1)


def boundary_v(m: Matroid, x: ExtVector) -> ExtVector:
    bd = bidegree(m, x)
    if bd is None:
        return ExtVector.zero()
    return _keep_rank(m, boundary(x), bd[1])


def delta_h(m: Matroid, x: ExtVector, a: Weights) -> ExtVector:
    bd = bidegree(m, x)
    if bd is None:
        return ExtVector.zero()
    return _keep_rank(m, delta(x, a, m.ambient_ground), bd[1] + 1)


def delta_v(m: Matroid, x: ExtVector, a: Weights) -> ExtVector:
    bd = bidegree(m, x)
    if bd is None:
        return ExtVector.zero()
    return _keep_rank(m, delta(x, a, m.ambient_ground), bd[1])


def laplacians(m: Matroid, x: ExtVector, a: Weights) -> Tuple[ExtVector, ExtVector]:
    """(dh_delta + delta_h dh, dv_delta + delta_v dv) applied to homogeneous x."""
    lap_h = delta_h(m, boundary_h(m, x), a) + boundary_h(m, delta_h(m, x, a))
    lap_v = delta_v(m, boundary_v(m, x), a) + boundary_v(m, delta_v(m, x, a))
    return lap_h, lap_v


def duality_D(x: ExtVector, a: Weights, ground: Optional[int] = None) -> ExtVector:
    """v -| e_ground: e_S goes to eps(S, G-S) a(S)^-1 e_{G-S}."""
    if ground is None:
        ground = (1 << len(a)) - 1
    out: Dict[int, Fraction] = {}
    for s, c in x.terms.items():
        if s & ~ground:
            continue
        rest = ground & ~s
        out[rest] = out.get(rest, Fraction(0)) + Fraction(eps_sign(s, rest)) * c / weight_of(a, s)
    return ExtVector(out)


# ------------------------- graded pieces -------------------------
def monomial_basis(m: Matroid, p: int, q: int) -> GradedPiece:
    """Ambient monomials e_S with |S| = p and rank(S) = q, in increasing mask order."""
    found = []
    for c in itertools.combinations(range(m.n), p):
        local = 0
        for i in c:
            local |= 1 << i
        if m.rank(local) == q:
            found.append(m.to_ambient(local))
    return GradedPiece(matroid=m, degree=p, rank=q, monomials=tuple(sorted(found)))


def basis_monomials(m: Matroid) -> Tuple[int, ...]:
    """Monomials of B(M), one per basis, as ambient masks."""
    return tuple(sorted(m.to_ambient(b) for b in m.bases))


def operator_matrix(fn, source: Sequence[int], target: Sequence[int]) -> list:
    """Rows = target monomials, columns = images of the source monomials."""
    index = {t: i for i, t in enumerate(target)}
    rows = [[Fraction(0)] * len(source) for _ in target]
    for j, s in enumerate(source):
        for t, c in fn(ExtVector.monomial(s)).terms.items():
            if t not in index:
                raise InhomogeneousInput(f"Image term e{fmt_set(t)} lies outside the target monomials.")
            rows[index[t]][j] = c
    return rows


def random_vector(rng, monomials: Sequence[int], low: int = -3, high: int = 3) -> ExtVector:
    """Random integer combination; rng is a numpy Generator."""
    coeffs = rng.integers(low, high + 1, size=len(monomials))
    return ExtVector.combination(monomials, [int(c) for c in coeffs])

