# services/xalg.py
"""
Exact linear algebra over QQ, GF(p) and ZZ.

Matrices are sympy DomainMatrix values; scalars come in as int or Fraction and
are converted into the field with K.quo(num, den), so weights that are units
mod p land correctly in GF(p). The integer kernel uses a numpy object-dtype
unimodular column reduction.
"""
from __future__ import annotations
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import GF, QQ, ZZ, isprime, multiplicity
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from services.errors import NotPrime, NotSquare, ShapeMismatch

log = logging.getLogger(__name__)

Number = Union[int, Fraction]


# ------------------------- fields and conversion -------------------------
def field_for(p: Optional[int] = None):
    """QQ for p=None, otherwise GF(p) with representatives 0..p-1."""
    if p is None:
        return QQ
    if not isprime(p):
        raise NotPrime(f"{p} is not a prime number.")
    return GF(p, symmetric=False)


def characteristic(K) -> int:
    return 0 if K == QQ or K == ZZ else int(K.mod)


def to_field(x: Number, K):
    if isinstance(x, Fraction):
        if K == ZZ:
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer.")
            return K.convert(x.numerator)
        return K.quo(K.convert(x.numerator), K.convert(x.denominator))
    return K.convert(int(x))


def to_number(x, K) -> Number:
    """Domain element back to Fraction (QQ) or int (ZZ, GF(p))."""
    v = K.to_sympy(x)
    if K == QQ:
        return Fraction(int(v.p), int(v.q))
    return int(v)


def matrix(rows: Sequence[Sequence[Number]], K, ncols: Optional[int] = None) -> DomainMatrix:
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    data = [[to_field(x, K) for x in row] for row in rows]
    return DomainMatrix(data, (m, n), K)


def zeros(m: int, n: int, K) -> DomainMatrix:
    return DomainMatrix([[K.zero] * n for _ in range(m)], (m, n), K)


def identity(n: int, K) -> DomainMatrix:
    return DomainMatrix([[K.one if i == j else K.zero for j in range(n)] for i in range(n)], (n, n), K)


def diagonal(values: Sequence[Number], K) -> DomainMatrix:
    n = len(values)
    return DomainMatrix(
        [[to_field(values[i], K) if i == j else K.zero for j in range(n)] for i in range(n)], (n, n), K
    )


def entries(A: DomainMatrix) -> List[List[Number]]:
    K = A.domain
    return [[to_number(x, K) for x in row] for row in A.to_list()]


def column(A: DomainMatrix, j: int) -> List[Number]:
    return [row[j] for row in entries(A)]


def columns(A: DomainMatrix) -> List[List[Number]]:
    rows = entries(A)
    return [[row[j] for row in rows] for j in range(A.shape[1])]


def from_columns(cols: Sequence[Sequence[Number]], K, nrows: int) -> DomainMatrix:
    rows = [[c[i] for c in cols] for i in range(nrows)]
    return matrix(rows, K, ncols=len(cols))


def hstack(blocks: Sequence[DomainMatrix], nrows: int, K) -> DomainMatrix:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return zeros(nrows, 0, K)
    for b in blocks:
        if b.shape[0] != nrows:
            raise ShapeMismatch(f"Cannot stack a block with {b.shape[0]} rows next to {nrows} rows.")
    if len(blocks) == 1:
        return blocks[0]
    return blocks[0].hstack(*blocks[1:])


def mul(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"Cannot multiply {A.shape} by {B.shape}.")
    if 0 in A.shape or 0 in B.shape:
        return zeros(A.shape[0], B.shape[1], A.domain)
    return A * B


def is_zero(A: DomainMatrix) -> bool:
    K = A.domain
    return all(x == K.zero for row in A.to_list() for x in row)


# ------------------------- rank, kernel, determinant -------------------------
def rank_of(A: DomainMatrix) -> int:
    if 0 in A.shape:
        return 0
    return len(A.rref()[1])


def kernel_basis(A: DomainMatrix) -> DomainMatrix:
    """Columns spanning the right kernel; width = cols - rank."""
    m, n = A.shape
    K = A.domain
    if n == 0:
        return zeros(0, 0, K)
    if m == 0:
        return identity(n, K)
    R, pivots = A.rref()
    rows = R.to_list()
    free = [j for j in range(n) if j not in pivots]
    cols = []
    for f in free:
        v = [K.zero] * n
        v[f] = K.one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        cols.append(v)
    data = [[cols[k][i] for k in range(len(cols))] for i in range(n)]
    return DomainMatrix(data, (n, len(cols)), K)


def determinant(A: DomainMatrix) -> Number:
    m, n = A.shape
    if m != n:
        raise NotSquare(f"Determinant needs a square matrix, got {m}x{n}.")
    K = A.domain
    if n == 0:
        return to_number(K.one, K)
    return to_number(A.det(), K)


def span_contains(big: DomainMatrix, small: DomainMatrix) -> bool:
    """Column span of `small` inside the column span of `big`."""
    if small.shape[1] == 0:
        return True
    return rank_of(hstack([big, small], big.shape[0], big.domain)) == rank_of(big)


def same_span(A: DomainMatrix, B: DomainMatrix) -> bool:
    return span_contains(A, B) and span_contains(B, A)


# ------------------------- integer kernel -------------------------
def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0]."""
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a, b = a * a_sign, b * b_sign
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]
    g = M[0, 0]
    M = M[:, 1:] * np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def column_reduce(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Unimodular column reduction A @ U = H with H column-echelon.
    Returns (H, U, k) where the first k columns of H are the nonzero ones.
    """
    H = A.astype(object).copy()
    m, n = H.shape
    U = np.eye(n, dtype=object)
    col = 0
    for row in range(m):
        if col >= n:
            break
        for j in range(col + 1, n):
            if H[row, j] == 0:
                continue
            M = exgcd(int(H[row, col]), int(H[row, j])).T
            H[:, [col, j]] = H[:, [col, j]] @ M
            U[:, [col, j]] = U[:, [col, j]] @ M
        if H[row, col] != 0:
            col += 1
    return H, U, col


def integer_kernel_saturated(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> np.ndarray:
    """
    Saturated Z-basis of {x : A x = 0}, as the columns of an object array.
    The kernel is spanned by the trailing columns of the unimodular U.
    """
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return np.eye(n, dtype=object)
    arr = np.array([[int(x) for x in row] for row in A], dtype=object).reshape(len(A), n)
    _, U, k = column_reduce(arr)
    basis = U[:, k:]
    log.debug("[integer_kernel_saturated] %dx%d matrix, kernel rank %d", len(A), n, basis.shape[1])
    return basis


def is_saturated(basis: np.ndarray) -> bool:
    """Columns span a saturated lattice iff all invariant factors are 1."""
    n, k = basis.shape
    if k == 0:
        return True
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in basis.tolist()], (n, k), ZZ)
    factors = invariant_factors(dm)
    return len(factors) == k and all(abs(int(f)) == 1 for f in factors)


# ------------------------- p-adic helpers -------------------------
def valuation(p: int, x: Number) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("The valuation of 0 is infinite.")
    num, den = abs(x.numerator), x.denominator
    return (multiplicity(p, num) if num % p == 0 else 0) - (multiplicity(p, den) if den % p == 0 else 0)


# ------------------------- operator spans -------------------------
def _check_shapes(gens: Sequence[DomainMatrix]) -> None:
    shapes = {g.shape for g in gens}
    if len(shapes) > 1:
        raise ShapeMismatch(f"Generators have different shapes {sorted(shapes)}.")
    domains = {g.domain for g in gens}
    if len(domains) > 1:
        raise ShapeMismatch("Generators live over different fields.")


def _flatten(A: DomainMatrix) -> list:
    return [x for row in A.to_list() for x in row]


class _SpanTracker:
    """Incremental row-echelon basis of flattened matrices."""

    def __init__(self, K, size: int):
        self.K, self.size = K, size
        self.rows: List[list] = []
        self.pivots: List[int] = []

    def add(self, vec: list) -> bool:
        K = self.K
        v = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != K.zero:
                v = [x - c * y for x, y in zip(v, row)]
        for j, x in enumerate(v):
            if x != K.zero:
                inv = K.quo(K.one, x)
                v = [y * inv for y in v]
                # keep the stored rows reduced at the new pivot
                for i, row in enumerate(self.rows):
                    c = row[j]
                    if c != K.zero:
                        self.rows[i] = [a - c * b for a, b in zip(row, v)]
                self.rows.append(v)
                self.pivots.append(j)
                return True
        return False


def span_dimension(gens: Sequence[DomainMatrix], closed_under_product: bool = False) -> int:
    """
    Dimension of the linear span of gens; with closed_under_product, of the
    unital algebra they generate (products are added until nothing new appears).
    """
    if not gens:
        return 1 if closed_under_product else 0
    _check_shapes(gens)
    m, n = gens[0].shape
    if closed_under_product and m != n:
        raise ShapeMismatch(f"Algebra generators must be square, got {m}x{n}.")
    K = gens[0].domain
    tracker = _SpanTracker(K, m * n)
    if not closed_under_product:
        for g in gens:
            tracker.add(_flatten(g))
        return len(tracker.rows)
    basis: List[DomainMatrix] = []
    for g in [identity(n, K), *gens]:
        if tracker.add(_flatten(g)):
            basis.append(g)
    frontier = list(basis)
    while frontier:
        fresh = []
        for a in frontier:
            for g in gens:
                prod = mul(a, g)
                if tracker.add(_flatten(prod)):
                    fresh.append(prod)
        basis.extend(fresh)
        frontier = fresh
    log.debug("[span_dimension] algebra of %d generators has dimension %d", len(gens), len(basis))
    return len(basis)


def centralizer_dimension(ops: Sequence[DomainMatrix], size: Optional[int] = None) -> int:
    """Dimension of {X : X g = g X for all g}, solved on d^2 unknowns."""
    if not ops:
        if size is None:
            raise ShapeMismatch("The size is needed when no operators are given.")
        return size * size
    _check_shapes(ops)
    d, d2 = ops[0].shape
    if d != d2:
        raise ShapeMismatch(f"Operators must be square, got {d}x{d2}.")
    K = ops[0].domain
    rows = []
    # unknown X[i][j] sits at index i*d + j; (Xg - gX)[i][k] = sum_j X[i][j] g[j][k] - g[i][j] X[j][k]
    for g in ops:
        G = g.to_list()
        for i in range(d):
            for k in range(d):
                row = [K.zero] * (d * d)
                for j in range(d):
                    row[i * d + j] += G[j][k]
                    row[j * d + k] -= G[i][j]
                rows.append(row)
    A = DomainMatrix(rows, (len(rows), d * d), K)
    return d * d - rank_of(A)
