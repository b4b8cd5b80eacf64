# services/matroid.py
"""
Matroid kernel on bitmask subsets.

Elements are 0..n-1 in their natural order (all activity computations depend on
that order). A subset is an int mask. A matroid is stored as its basis list;
the rank oracle is "max intersection with a basis", memoized per instance.

Minors relabel their ground set densely but keep `ground`, the ambient labels
of their elements, so exterior monomials can be signed in the ambient order.
"""
from __future__ import annotations
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from services.errors import (
    EmptyBasisList,
    EmptyGroundSet,
    EqualCardinalityViolation,
    ExchangeViolation,
    InputError,
    MinorNotNested,
    NotABasis,
    RankOutOfRange,
    VertexOutOfRange,
)

log = logging.getLogger(__name__)

MAX_ELEMENTS = 24

SubsetLike = Union[int, Iterable[int]]


# ------------------------- bit helpers -------------------------
def popcount(mask: int) -> int:
    return bin(mask).count("1")


def elements(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << int(i)
    return m


def to_mask(s: SubsetLike) -> int:
    return s if isinstance(s, int) else mask_of(s)


def submasks(mask: int):
    """All submasks of mask, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


# ------------------------- types -------------------------
@dataclass(frozen=True, eq=False)
class Matroid:
    n: int
    bases: FrozenSet[int]
    ground: Tuple[int, ...]
    name: str = ""
    _rank_memo: Dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def r(self) -> int:
        return popcount(next(iter(self.bases)))

    def rank(self, mask: int) -> int:
        memo = self._rank_memo
        v = memo.get(mask)
        if v is None:
            v = max(popcount(mask & b) for b in self.bases)
            memo[mask] = v
        return v

    def to_ambient(self, mask: int) -> int:
        out = 0
        for i in elements(mask):
            out |= 1 << self.ground[i]
        return out

    def from_ambient(self, amask: int) -> int:
        out = 0
        for i, g in enumerate(self.ground):
            if amask >> g & 1:
                out |= 1 << i
        return out

    @property
    def ambient_ground(self) -> int:
        return mask_of(self.ground)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.bases == other.bases

    def __hash__(self) -> int:
        return hash((self.n, self.bases))

    def __repr__(self) -> str:
        label = self.name or "Matroid"
        return f"<{label} n={self.n} r={self.r} bases={len(self.bases)}>"


@dataclass(frozen=True)
class ActivityRecord:
    basis: int
    internally_active: int
    externally_active: int


@dataclass(frozen=True)
class CyclicFlatPoset:
    """Coloop-free flats, ordered here by plain set inclusion."""
    flats: Tuple[int, ...]
    one: int   # the flat of loops (smallest)
    zero: int  # complement of the coloops (largest)

    def __contains__(self, mask: object) -> bool:
        return mask in self.flats

    def __iter__(self):
        return iter(self.flats)

    def __len__(self) -> int:
        return len(self.flats)

    def supersets(self, e: int) -> List[int]:
        return [f for f in self.flats if f & e == e]

    def subsets(self, f: int) -> List[int]:
        return [e for e in self.flats if e & f == e]

    def nested_pairs(self) -> List[Tuple[int, int]]:
        return [(e, f) for e in self.flats for f in self.flats if f & e == e]


class TuttePoly:
    """T(x, y) as a map (i, j) -> coefficient of x^i y^j."""

    def __init__(self, coefficients: Optional[Dict[Tuple[int, int], int]] = None):
        self.coefficients: Dict[Tuple[int, int], int] = {
            k: int(v) for k, v in (coefficients or {}).items() if v
        }

    X, Y = sympy.symbols("x y")

    @classmethod
    def one(cls) -> "TuttePoly":
        return cls({(0, 0): 1})

    @classmethod
    def from_poly(cls, poly: sympy.Poly) -> "TuttePoly":
        return cls({(int(i), int(j)): int(c) for (i, j), c in poly.terms()})

    def as_poly(self) -> sympy.Poly:
        expr = sum((c * self.X ** i * self.Y ** j for (i, j), c in self.coefficients.items()), sympy.Integer(0))
        return sympy.Poly(expr, self.X, self.Y)

    def coefficient(self, i: int, j: int) -> int:
        return self.coefficients.get((i, j), 0)

    def __call__(self, x: int, y: int) -> int:
        return sum(c * x ** i * y ** j for (i, j), c in self.coefficients.items())

    def swapped(self) -> "TuttePoly":
        return TuttePoly({(j, i): c for (i, j), c in self.coefficients.items()})

    def __add__(self, other: "TuttePoly") -> "TuttePoly":
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out.get(k, 0) + c
        return TuttePoly(out)

    def shift(self, di: int, dj: int) -> "TuttePoly":
        return TuttePoly({(i + di, j + dj): c for (i, j), c in self.coefficients.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TuttePoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self.coefficients.items()))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return str(self.as_poly().as_expr())

    __repr__ = __str__


# ------------------------- construction -------------------------
def _make(n: int, bases: Iterable[int], ground: Optional[Sequence[int]] = None, name: str = "") -> Matroid:
    return Matroid(n=n, bases=frozenset(bases), ground=tuple(ground if ground is not None else range(n)), name=name)


def _check_size(n: int) -> None:
    if n < 0 or n > MAX_ELEMENTS:
        raise InputError(f"Ground set size must be between 0 and {MAX_ELEMENTS}, got {n}.")


def from_bases(n: int, bases: Sequence[SubsetLike], name: str = "") -> Matroid:
    """Validated matroid from an explicit basis list."""
    _check_size(n)
    masks = [to_mask(b) for b in bases]
    if not masks:
        raise EmptyBasisList("The basis list is empty; a matroid has at least one basis.")
    full = (1 << n) - 1
    for b in masks:
        if b & ~full:
            raise InputError(f"Basis {fmt_set(b)} is not a subset of the ground set 0..{n - 1}.")
    sizes = {popcount(b) for b in masks}
    if len(sizes) > 1:
        raise EqualCardinalityViolation(f"Bases have different sizes {sorted(sizes)}; all bases must have equal cardinality.")
    bset = frozenset(masks)
    for b1 in bset:
        for b2 in bset:
            if b1 == b2:
                continue
            for x in elements(b1 & ~b2):
                base = b1 & ~(1 << x)
                if not any((base | (1 << y)) in bset for y in elements(b2 & ~b1)):
                    raise ExchangeViolation(b1, b2, x)
    return _make(n, bset, name=name)


def from_graph(vertices: int, edges: Sequence[Tuple[int, int]], name: str = "") -> Matroid:
    """Cycle matroid: edges labelled in input order, bases are spanning forests."""
    m = len(edges)
    _check_size(m)
    for k, (u, v) in enumerate(edges):
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise VertexOutOfRange(f"Edge {k} = ({u},{v}) uses a vertex outside 0..{vertices - 1}.")

    def acyclic(idx: Sequence[int]) -> bool:
        parent = list(range(vertices))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for k in idx:
            u, v = edges[k]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    everything = list(range(m))
    # rank of the graphic matroid = vertices - components; grow a forest greedily
    forest: List[int] = []
    for k in everything:
        if acyclic(forest + [k]):
            forest.append(k)
    rank = len(forest)
    bases = [mask_of(c) for c in itertools.combinations(everything, rank) if acyclic(c)]
    log.debug("[from_graph] %d vertices, %d edges, %d spanning forests", vertices, m, len(bases))
    return _make(m, bases, name=name)


def uniform(r: int, n: int, name: str = "") -> Matroid:
    _check_size(n)
    if r < 0 or r > n:
        raise RankOutOfRange(f"Uniform matroid needs 0 <= r <= n, got r={r}, n={n}.")
    bases = [mask_of(c) for c in itertools.combinations(range(n), r)]
    return _make(n, bases, name=name or f"U({r},{n})")


def direct_sum(m1: Matroid, m2: Matroid) -> Matroid:
    _check_size(m1.n + m2.n)
    bases = [b1 | (b2 << m1.n) for b1 in m1.bases for b2 in m2.bases]
    return _make(m1.n + m2.n, bases, name=f"{m1.name or 'M'}+{m2.name or 'N'}")


def dual(m: Matroid) -> Matroid:
    name = m.name[:-1] if m.name.endswith("*") else (m.name + "*" if m.name else "")
    return _make(m.n, (m.full & ~b for b in m.bases), m.ground, name=name)


def minor(m: Matroid, e: SubsetLike, f: SubsetLike) -> Matroid:
    """M(F)/E on F\\E, relabelled densely; `ground` keeps the ambient labels."""
    e, f = to_mask(e), to_mask(f)
    if e & ~f:
        raise MinorNotNested(f"Minor needs E subset of F, got E={fmt_set(e)}, F={fmt_set(f)}.")
    if f & ~m.full:
        raise InputError(f"F={fmt_set(f)} is not a subset of the ground set.")
    rf, re_ = m.rank(f), m.rank(e)
    keep = elements(f & ~e)
    pos = {old: new for new, old in enumerate(keep)}
    out = set()
    for b in m.bases:
        if popcount(b & f) == rf and popcount(b & e) == re_:
            nb = 0
            for i in elements(b & f & ~e):
                nb |= 1 << pos[i]
            out.add(nb)
    return _make(len(keep), out, [m.ground[i] for i in keep])


def restriction(m: Matroid, x: SubsetLike) -> Matroid:
    return minor(m, 0, x)


def contraction(m: Matroid, e: SubsetLike) -> Matroid:
    return minor(m, e, m.full)


# ------------------------- queries -------------------------
def rank(m: Matroid, s: SubsetLike) -> int:
    return m.rank(to_mask(s))


def is_independent(m: Matroid, s: SubsetLike) -> bool:
    s = to_mask(s)
    return m.rank(s) == popcount(s)


def is_basis(m: Matroid, s: SubsetLike) -> bool:
    return to_mask(s) in m.bases


def closure(m: Matroid, s: SubsetLike) -> int:
    s = to_mask(s)
    rs = m.rank(s)
    out = s
    for x in range(m.n):
        if not s >> x & 1 and m.rank(s | (1 << x)) == rs:
            out |= 1 << x
    return out


def loops(m: Matroid) -> int:
    union = 0
    for b in m.bases:
        union |= b
    return m.full & ~union


def coloops(m: Matroid) -> int:
    inter = m.full
    for b in m.bases:
        inter &= b
    return inter


def independent_sets(m: Matroid) -> List[int]:
    seen = set()
    for b in m.bases:
        seen.update(submasks(b))
    return sorted(seen)


def flats(m: Matroid) -> List[int]:
    return sorted({closure(m, s) for s in independent_sets(m)}, key=lambda f: (popcount(f), f))


def is_coloop_free_set(m: Matroid, f: int) -> bool:
    rf = m.rank(f)
    return all(m.rank(f & ~(1 << x)) == rf for x in elements(f))


def cyclic_flats(m: Matroid) -> CyclicFlatPoset:
    found = tuple(f for f in flats(m) if is_coloop_free_set(m, f))
    return CyclicFlatPoset(flats=found, one=loops(m), zero=m.full & ~coloops(m))


def circuits(m: Matroid) -> List[int]:
    out = []
    for size in range(1, m.n + 1):
        for c in itertools.combinations(range(m.n), size):
            s = mask_of(c)
            if m.rank(s) == size - 1 and all(m.rank(s & ~(1 << x)) == size - 1 for x in c):
                out.append(s)
    return out


def _basic_circuit(m: Matroid, b: int, p: int) -> int:
    out = 1 << p
    for x in elements(b):
        if ((b & ~(1 << x)) | (1 << p)) in m.bases:
            out |= 1 << x
    return out


def _basic_bond(m: Matroid, b: int, x: int) -> int:
    out = 1 << x
    for p in elements(m.full & ~b):
        if ((b & ~(1 << x)) | (1 << p)) in m.bases:
            out |= 1 << p
    return out


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def activities(m: Matroid, b: SubsetLike) -> ActivityRecord:
    b = to_mask(b)
    if b not in m.bases:
        raise NotABasis(f"{fmt_set(b)} is not a basis of this matroid.")
    internal = 0
    for x in elements(b):
        if _lowest(_basic_bond(m, b, x)) == x:
            internal |= 1 << x
    external = 0
    for p in elements(m.full & ~b):
        if _lowest(_basic_circuit(m, b, p)) == p:
            external |= 1 << p
    return ActivityRecord(basis=b, internally_active=internal, externally_active=external)


def passive_counts(m: Matroid) -> Tuple[int, int]:
    """(externally passive bases, internally passive bases)."""
    ext = inte = 0
    for b in m.bases:
        rec = activities(m, b)
        ext += rec.externally_active == 0
        inte += rec.internally_active == 0
    return ext, inte


# ------------------------- Tutte invariants -------------------------
def tutte(m: Matroid) -> TuttePoly:
    coeffs: Dict[Tuple[int, int], int] = {}
    for b in m.bases:
        rec = activities(m, b)
        key = (popcount(rec.internally_active), popcount(rec.externally_active))
        coeffs[key] = coeffs.get(key, 0) + 1
    return TuttePoly(coeffs)


def tutte_deletion_contraction(m: Matroid) -> TuttePoly:
    """Independent oracle: recursive deletion-contraction on the last element."""
    memo: Dict[Tuple[int, FrozenSet[int]], TuttePoly] = {}

    def rec(mm: Matroid) -> TuttePoly:
        key = (mm.n, mm.bases)
        if key in memo:
            return memo[key]
        if mm.n == 0:
            out = TuttePoly.one()
        else:
            e = 1 << (mm.n - 1)
            deleted = minor(mm, 0, mm.full & ~e)
            if loops(mm) & e:
                out = rec(deleted).shift(0, 1)
            elif coloops(mm) & e:
                out = rec(minor(mm, e, mm.full)).shift(1, 0)
            else:
                out = rec(deleted) + rec(minor(mm, e, mm.full))
        memo[key] = out
        return out

    return rec(m)


def beta(m: Matroid) -> int:
    return tutte(m).coefficient(1, 0)


def mu_plus(m: Matroid) -> int:
    """T(1,0): the number of externally passive (nbc) bases."""
    return tutte(m)(1, 0)


def mu_plus_dual(m: Matroid) -> int:
    """T(0,1) = mu_plus of the dual: the number of internally passive bases."""
    return tutte(m)(0, 1)


# ------------------------- connectivity -------------------------
def components(m: Matroid) -> List[int]:
    """Connected components, joined through the fundamental circuits of one basis."""
    parent = list(range(m.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    b0 = min(m.bases)
    for p in elements(m.full & ~b0):
        c = elements(_basic_circuit(m, b0, p))
        for x in c[1:]:
            parent[find(x)] = find(c[0])
    groups: Dict[int, int] = {}
    for x in range(m.n):
        root = find(x)
        groups[root] = groups.get(root, 0) | (1 << x)
    return sorted(groups.values())


def is_connected(m: Matroid) -> bool:
    """Every two elements lie on a common circuit; one-element matroids count as connected."""
    if m.n == 0:
        raise EmptyGroundSet("Connectivity is undefined for the empty matroid.")
    if m.n == 1:
        return True
    return len(components(m)) == 1
