# services/schur.py
"""
Ringel datum of a weighted matroid over its cyclic flats.

For cyclic flats E <= F the piece B(E,F) is spanned by the bases of the minor
M(F)/E, written as ambient monomials; U(E,F) = ker d and Uc(E,F) = ker delta on
that piece. Everything downstream (characters, decomposition numbers,
determinants, axiom and identity checks) reads these pieces.

Conventions:
  * ch Delta(E) and ch L(E) are supported on the cyclic flats containing E.
  * The decomposition matrix is solved in the cell-module orientation:
    entry(E, F) = [Delta(F) : L(E)], zero unless E is a subset of F.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ, primefactors

from services import exterior as ext
from services import matroid as mat
from services import xalg
from services.errors import (
    DimensionTooLarge,
    FlatNotInPoset,
    InconsistentSystem,
    InputError,
    NonIntegerWeights,
    WeightNotUnit,
    ZeroWeightSum,
)
from services.exterior import ExtVector
from services.matroid import Matroid, fmt_set, popcount
from services.pool import parallel_map
from services.report_service import CheckResult, Tally
from services.settings_service import get_settings

log = logging.getLogger(__name__)


# ------------------------- types -------------------------
class Character:
    """Finitely supported map cyclic flat -> integer."""

    def __init__(self, coefficients: Optional[Dict[int, int]] = None):
        self.coefficients: Dict[int, int] = {k: int(v) for k, v in (coefficients or {}).items() if v}

    def __getitem__(self, flat: int) -> int:
        return self.coefficients.get(flat, 0)

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + v
        return Character(out)

    def __sub__(self, other: "Character") -> "Character":
        return self + other.scale(-1)

    def scale(self, c: int) -> "Character":
        return Character({k: c * v for k, v in self.coefficients.items()})

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.coefficients.values())

    def __le__(self, other: "Character") -> bool:
        return (other - self).is_nonnegative()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, dict):
            other = Character(other)
        if not isinstance(other, Character):
            return NotImplemented
        return self.coefficients == other.coefficients

    def items(self) -> List[Tuple[int, int]]:
        return sorted(self.coefficients.items(), key=lambda kv: (popcount(kv[0]), kv[0]))

    def as_labels(self) -> Dict[str, int]:
        return {fmt_set(k): v for k, v in self.items()}

    def __repr__(self) -> str:
        return "Character(" + ", ".join(f"{fmt_set(k)}:{v}" for k, v in self.items()) + ")"


@dataclass
class Piece:
    e: int
    f: int
    minor: Matroid
    monomials: Tuple[int, ...]
    U: object   # DomainMatrix, columns span ker d
    Uc: object  # DomainMatrix, columns span ker delta
    gram: object

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def dim_U(self) -> int:
        return self.U.shape[1]

    @property
    def dim_Uc(self) -> int:
        return self.Uc.shape[1]

    def u_vectors(self) -> List[ExtVector]:
        return [ExtVector.combination(self.monomials, col) for col in xalg.columns(self.U)]

    def uc_vectors(self) -> List[ExtVector]:
        return [ExtVector.combination(self.monomials, col) for col in xalg.columns(self.Uc)]

    def monomial_vectors(self) -> List[ExtVector]:
        return [ExtVector.monomial(m) for m in self.monomials]

    def coords(self, v: ExtVector, project: bool = False) -> Optional[List[Fraction]]:
        """Coordinates in the monomial basis; None if v leaves the piece (unless projecting)."""
        if not project:
            index = set(self.monomials)
            if any(t not in index for t in v.terms):
                return None
        return v.coords(self.monomials)


@dataclass
class RingelDatum:
    matroid: Matroid
    weights: Tuple[int, ...]
    p: Optional[int]
    poset: mat.CyclicFlatPoset
    pieces: Dict[Tuple[int, int], Piece] = field(default_factory=dict)
    _ranks: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False)

    @property
    def domain(self):
        return xalg.field_for(self.p)

    @property
    def flats(self) -> Tuple[int, ...]:
        return self.poset.flats

    def require(self, flat: int) -> int:
        if flat not in self.poset:
            raise FlatNotInPoset(f"{fmt_set(flat)} is not a cyclic flat of this matroid.")
        return flat

    def piece(self, e: int, f: int) -> Optional[Piece]:
        self.require(e)
        self.require(f)
        return self.pieces.get((e, f))

    def dim_U(self, e: int, f: int) -> int:
        pc = self.pieces.get((e, f))
        return pc.dim_U if pc else 0

    def dim_Uc(self, e: int, f: int) -> int:
        pc = self.pieces.get((e, f))
        return pc.dim_Uc if pc else 0

    def dim_B(self, e: int, f: int) -> int:
        pc = self.pieces.get((e, f))
        return pc.dim if pc else 0

    def gram_rank(self, e: int, f: int) -> int:
        if (e, f) not in self._ranks:
            pc = self.pieces.get((e, f))
            self._ranks[(e, f)] = xalg.rank_of(pc.gram) if pc else 0
        return self._ranks[(e, f)]

    def between(self, e: int, f: int) -> List[int]:
        return [g for g in self.flats if g & e == e and g & f == g]


@dataclass
class DecompMatrix:
    flats: Tuple[int, ...]
    entries: Dict[Tuple[int, int], int]

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def is_identity(self) -> bool:
        return all(v == (1 if e == f else 0) for (e, f), v in self.entries.items())

    def off_diagonal(self) -> List[Tuple[int, int, int]]:
        return [(e, f, v) for (e, f), v in sorted(self.entries.items()) if e != f and v]


@dataclass
class DetFactorization:
    factors: List[Tuple[int, int, int]]  # (flat, base weight sum, exponent)
    product: Fraction

    def valuation(self, p: int) -> int:
        return sum(exp * xalg.valuation(p, base) for _, base, exp in self.factors)


@dataclass
class JantzenSum:
    terms: List[Tuple[int, int]]  # (flat K, coefficient of ch Delta(K))
    total: Character


@dataclass
class AlgebraDims:
    dim_R: int
    dim_Rc: int
    R_table: Dict[Tuple[int, int], int]
    Rc_table: Dict[Tuple[int, int], int]


@dataclass
class OperatorModel:
    dim_B: int
    offsets: Dict[Tuple[int, int], int]
    R_generators: List[object]
    Rc_generators: List[object]


@dataclass
class AxiomReport:
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


# ------------------------- weights -------------------------
def normalize_weights(m: Matroid, a: Optional[Sequence] = None, p: Optional[int] = None) -> Tuple[int, ...]:
    if a is None:
        a = [1] * m.n
    if len(a) != m.n:
        raise InputError(f"Expected {m.n} weights, got {len(a)}.")
    out = []
    for i, v in enumerate(a):
        if isinstance(v, bool):
            raise NonIntegerWeights(f"Weight a({i}) = {v!r} is not an integer.")
        if isinstance(v, Fraction) and v.denominator == 1:
            v = v.numerator
        if not isinstance(v, int):
            raise NonIntegerWeights(f"Weight a({i}) = {v!r} is not an integer.")
        if v == 0:
            raise InputError(f"Weight a({i}) is zero; weights must be nonzero.")
        if p is not None and v % p == 0:
            raise WeightNotUnit(p, i, v)
        out.append(v)
    return tuple(out)


def _dense(m: Matroid) -> Matroid:
    if m.ground == tuple(range(m.n)):
        return m
    return Matroid(n=m.n, bases=m.bases, ground=tuple(range(m.n)), name=m.name)


# ------------------------- pieces -------------------------
def boundary_rows(mm: Matroid) -> Tuple[Tuple[int, ...], list]:
    """Matrix of d from B(mm) to the independent (r-1)-sets; integer entries."""
    monos = ext.basis_monomials(mm)
    r = mm.r
    lower = ext.monomial_basis(mm, r - 1, r - 1).monomials if r > 0 else ()
    return monos, ext.operator_matrix(ext.boundary, monos, lower)


def delta_rows(mm: Matroid, a: Sequence[int]) -> Tuple[Tuple[int, ...], list]:
    monos = ext.basis_monomials(mm)
    r = mm.r
    upper = ext.monomial_basis(mm, r + 1, r).monomials if r < mm.n else ()
    ground = mm.ambient_ground
    return monos, ext.operator_matrix(lambda x: ext.delta(x, a, ground), monos, upper)


def inverse_weights(monos: Sequence[int], a: Sequence[int]) -> List[Fraction]:
    return [Fraction(1, ext.weight_of(a, s)) for s in monos]


def gram_matrix(basis, monos: Sequence[int], a: Sequence[int]):
    K = basis.domain
    D = xalg.diagonal(inverse_weights(monos, a), K)
    return xalg.mul(xalg.mul(basis.transpose(), D), basis)


def subspaces(mm: Matroid, a: Sequence[int], K=QQ):
    """(monomials, U, Uc) for any minor, computed directly over K."""
    monos, d = boundary_rows(mm)
    _, dl = delta_rows(mm, a)
    U = xalg.kernel_basis(xalg.matrix(d, K, ncols=len(monos)))
    Uc = xalg.kernel_basis(xalg.matrix(dl, K, ncols=len(monos)))
    return monos, U, Uc


def _build_piece(args) -> Piece:
    m, a, K, e, f = args
    mm = mat.minor(m, e, f)
    monos, U, Uc = subspaces(mm, a, K)
    gram = gram_matrix(U, monos, a)
    log.debug("[build_datum] pair %s/%s: dimB=%d dimU=%d dimUc=%d",
              fmt_set(e), fmt_set(f), len(monos), U.shape[1], Uc.shape[1])
    return Piece(e=e, f=f, minor=mm, monomials=monos, U=U, Uc=Uc, gram=gram)


def build_datum(m: Matroid, a: Optional[Sequence] = None, p: Optional[int] = None,
                workers: Optional[int] = None) -> RingelDatum:
    """All pieces over QQ (p=None) or directly over GF(p)."""
    m = _dense(m)
    K = xalg.field_for(p)
    weights = normalize_weights(m, a, p)
    poset = mat.cyclic_flats(m)
    pairs = poset.nested_pairs()
    pieces = parallel_map(_build_piece, [(m, weights, K, e, f) for e, f in pairs], workers)
    datum = RingelDatum(matroid=m, weights=weights, p=p, poset=poset,
                        pieces={(pc.e, pc.f): pc for pc in pieces})
    log.info("[build_datum] %s over %s: %d cyclic flats, %d pieces",
             m.name or "matroid", "QQ" if p is None else f"GF({p})", len(poset), len(pieces))
    return datum


# ------------------------- characters -------------------------
def standard_character(d: RingelDatum, e: int) -> Character:
    d.require(e)
    return Character({f: d.dim_U(e, f) for f in d.poset.supersets(e)})


def simple_character(d: RingelDatum, e: int) -> Character:
    d.require(e)
    return Character({f: d.gram_rank(e, f) for f in d.poset.supersets(e)})


def decomposition_matrix(d: RingelDatum) -> DecompMatrix:
    """Solve ch Delta(F) = sum_E [Delta(F):L(E)] ch L(E) with characters on subsets of F."""
    flats = d.flats
    entries: Dict[Tuple[int, int], int] = {}
    for f in flats:
        below = sorted(d.poset.subsets(f), key=lambda g: (-popcount(g), g))
        col: Dict[int, int] = {}
        for g in below:
            v = d.dim_U(g, f) - sum(col[e] * d.gram_rank(g, e) for e in col if e != g and e & g == g)
            if g == f and v != 1:
                raise InconsistentSystem(f"Diagonal entry at {fmt_set(f)} is {v}, expected 1.")
            if v < 0:
                raise InconsistentSystem(
                    f"Negative multiplicity [Δ({fmt_set(f)}):L({fmt_set(g)})] = {v}."
                )
            col[g] = v
        for g, v in col.items():
            entries[(g, f)] = v
    return DecompMatrix(flats=flats, entries=entries)


# ------------------------- semisimplicity -------------------------
def connected_pairs(m: Matroid) -> List[Tuple[int, int]]:
    poset = mat.cyclic_flats(m)
    out = []
    for k, f in poset.nested_pairs():
        if k != f and mat.is_connected(mat.minor(m, k, f)):
            out.append((k, f))
    return out


def bad_primes(m: Matroid, a: Optional[Sequence] = None) -> List[int]:
    """Primes dividing a weight sum over a connected minor of nested cyclic flats."""
    m = _dense(m)
    a = normalize_weights(m, a)
    found = set()
    for k, f in connected_pairs(m):
        s = ext.weight_sum(a, f & ~k)
        if s == 0:
            raise ZeroWeightSum(k, f)
        found.update(primefactors(abs(s)))
    return sorted(found)


def semisimple_test(m: Matroid, a: Optional[Sequence], p: int) -> bool:
    m = _dense(m)
    a = normalize_weights(m, a)
    if any(v % p == 0 for v in a):
        return False
    return all(ext.weight_sum(a, f & ~k) % p != 0 for k, f in connected_pairs(m))


# ------------------------- determinants -------------------------
def gram_det_U(m: Matroid, a: Sequence[int]) -> Fraction:
    """det of the pairing on a saturated integer basis of ker d (sign depends on the basis)."""
    for i, v in enumerate(a):
        if not isinstance(v, (int, Fraction)) or Fraction(v).denominator != 1:
            raise NonIntegerWeights(f"Weight a({i}) = {v!r} is not an integer.")
    a = [int(v) for v in a]
    monos, rows = boundary_rows(m)
    basis = xalg.integer_kernel_saturated(rows, ncols=len(monos))
    cols = [list(basis[:, j]) for j in range(basis.shape[1])]
    U = xalg.from_columns(cols, QQ, len(monos))
    return Fraction(xalg.determinant(gram_matrix(U, monos, a)))


def bv_predicted(m: Matroid, a: Sequence[int]) -> DetFactorization:
    """Product over flats K != ground of (sum of a off K)^(beta(M/K) * T_{M(K)}(0,1))."""
    factors = []
    product = Fraction(1)
    for k in mat.flats(m):
        if k == m.full:
            continue
        exp = mat.beta(mat.contraction(m, k))
        if exp:
            exp *= mat.mu_plus_dual(mat.restriction(m, k))
        if not exp:
            continue
        base = ext.weight_sum(a, m.to_ambient(m.full & ~k))
        factors.append((k, base, exp))
        product *= Fraction(base) ** exp
    return DetFactorization(factors=factors, product=product)


def _det_matches(gram: Fraction, predicted: DetFactorization, a: Sequence[int], primes: Sequence[int]) -> bool:
    if gram == 0 or predicted.product == 0:
        return gram == 0 and predicted.product == 0
    if all(abs(v) == 1 for v in a):
        return abs(gram) == abs(predicted.product)
    for p in primes:
        if any(v % p == 0 for v in a):
            continue
        if xalg.valuation(p, gram) != predicted.valuation(p):
            return False
    return True


DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)


def determinant_checks(m: Matroid, a: Optional[Sequence] = None,
                       primes: Sequence[int] = DEFAULT_PRIMES) -> Tuple[List[dict], List[CheckResult]]:
    """
    Gram determinant against the predicted factorization for every minor of
    nested cyclic flats; exact for unit weights, p-adic for the others.
    """
    m = _dense(m)
    a = normalize_weights(m, a)
    tally = Tally("determinant_formula")
    rows = []
    for e, f in mat.cyclic_flats(m).nested_pairs():
        if e == f:
            continue
        mm = mat.minor(m, e, f)
        gram = gram_det_U(mm, a)
        pred = bv_predicted(mm, a)
        ok = _det_matches(gram, pred, a, primes)
        label = f"{fmt_set(e)}/{fmt_set(f)}"
        tally.check(ok, lambda: f"{label}: gram det {gram} vs predicted {pred.product}")
        rows.append({
            "minor": label,
            "gram_det": gram,
            "predicted": pred.product,
            "factors": [{"flat": mat.elements(mm.to_ambient(k)), "base": b, "exponent": x}
                        for k, b, x in pred.factors],
        })
    return rows, [tally.result()]


# ------------------------- Jantzen -------------------------
def jantzen_rhs(d: RingelDatum, p: int, e: int) -> JantzenSum:
    """sum over cyclic K above E of beta(M(K)/E) * nu_p(sum of a over K-E) * ch Delta(K)."""
    d.require(e)
    xalg.field_for(p)
    if any(v % p == 0 for v in d.weights):
        bad = next(i for i, v in enumerate(d.weights) if v % p == 0)
        raise WeightNotUnit(p, bad, d.weights[bad])
    terms = []
    total = Character()
    for k in d.poset.supersets(e):
        if k == e:
            continue
        b = mat.beta(mat.minor(d.matroid, e, k))
        if not b:
            continue
        s = ext.weight_sum(d.weights, k & ~e)
        if s == 0:
            raise ZeroWeightSum(e, k)
        c = b * xalg.valuation(p, s)
        if c:
            terms.append((k, c))
            total = total + standard_character(d, k).scale(c)
    return JantzenSum(terms=terms, total=total)


def filtration_sum(d: RingelDatum, p: int, e: int) -> Character:
    """Coefficient at F: nu_p of the saturated Gram determinant on U(E,F)."""
    d.require(e)
    out = {}
    for f in d.poset.supersets(e):
        if f == e:
            continue
        det = gram_det_U(mat.minor(d.matroid, e, f), d.weights)
        if det == 0:
            log.warning("[filtration_sum] singular form on U(%s,%s) over QQ", fmt_set(e), fmt_set(f))
            continue
        out[f] = xalg.valuation(p, det)
    return Character(out)


def jantzen_checks(d: RingelDatum, datum_p: RingelDatum, p: int) -> List[CheckResult]:
    """Both sums dominate ch Delta - ch L; a zero sum forces Delta = L."""
    rhs_t = Tally("jantzen_rhs_bound")
    fil_t = Tally("filtration_sum_bound")
    for e in d.flats:
        gap = standard_character(d, e) - simple_character(datum_p, e)
        rhs = jantzen_rhs(d, p, e).total
        fil = filtration_sum(d, p, e)
        rhs_t.check((rhs - gap).is_nonnegative(), lambda: f"E={fmt_set(e)}: rhs {rhs} vs gap {gap}")
        fil_t.check((fil - gap).is_nonnegative(), lambda: f"E={fmt_set(e)}: filtration {fil} vs gap {gap}")
    return [rhs_t.result(), fil_t.result()]


# ------------------------- dimensions -------------------------
def algebra_dims(d: RingelDatum) -> AlgebraDims:
    flats = d.flats
    R: Dict[Tuple[int, int], int] = {}
    Rc: Dict[Tuple[int, int], int] = {}
    for e in flats:
        for f in flats:
            R[(e, f)] = sum(d.dim_U(e, z) * d.dim_U(f, z) for z in flats if z & (e | f) == (e | f))
            Rc[(e, f)] = sum(d.dim_Uc(z, e) * d.dim_Uc(z, f) for z in flats if z & e & f == z)
    return AlgebraDims(dim_R=sum(R.values()), dim_Rc=sum(Rc.values()), R_table=R, Rc_table=Rc)


def cell_standard_character(d: RingelDatum, f: int) -> Character:
    """ch' Delta(F): dim U(E,F) on the cyclic flats E inside F."""
    d.require(f)
    return Character({e: d.dim_U(e, f) for e in d.poset.subsets(f)})


def tilting_character_check(d: RingelDatum, f: int) -> CheckResult:
    """ch' B^F equals sum over G inside F of dim Uc(G,F) * ch' Delta(G)."""
    d.require(f)
    tally = Tally(f"tilting_filtration[{fmt_set(f)}]")
    lhs = Character({e: d.dim_B(e, f) for e in d.poset.subsets(f)})
    rhs = Character()
    for g in d.poset.subsets(f):
        rhs = rhs + cell_standard_character(d, g).scale(d.dim_Uc(g, f))
    tally.check(lhs == rhs, lambda: f"ch B = {lhs}, filtration sum = {rhs}")
    return tally.result()


# ------------------------- operator model -------------------------
def _sorted_pairs(d: RingelDatum) -> List[Tuple[int, int]]:
    return sorted(d.pieces, key=lambda ef: (popcount(ef[0]), ef[0], popcount(ef[1]), ef[1]))


def operator_model(d: RingelDatum, cap: Optional[int] = None) -> OperatorModel:
    """Generators of R (left wedge and contraction by U) and Rc (right, by Uc) on B."""
    if d.p is not None:
        raise InputError("The operator model is built over the rationals.")
    cap = cap if cap is not None else get_settings().dim_cap
    offsets: Dict[Tuple[int, int], int] = {}
    total = 0
    for key in _sorted_pairs(d):
        offsets[key] = total
        total += d.pieces[key].dim
    if total > cap:
        raise DimensionTooLarge(f"dim B = {total} exceeds the cap {cap}; raise --cap or SCHUR_DIM_CAP.")

    def embed(blocks, project: bool = False):
        rows = [[Fraction(0)] * total for _ in range(total)]
        for src, dst, fn in blocks:
            sp, dp = d.pieces[src], d.pieces[dst]
            for j, mono in enumerate(sp.monomials):
                image = fn(ExtVector.monomial(mono))
                coords = dp.coords(image, project)
                if coords is None:
                    raise InconsistentSystem(f"Operator image leaves piece {fmt_set(dst[0])}/{fmt_set(dst[1])}.")
                for i, c in enumerate(coords):
                    if c:
                        rows[offsets[dst] + i][offsets[src] + j] = c
        return xalg.matrix(rows, QQ, ncols=total)

    a = d.weights
    flats = d.flats
    R_gens, Rc_gens = [], []
    for (e, g), pc in d.pieces.items():
        for u in pc.u_vectors():
            mult = [((g, f), (e, f), lambda b, u=u: ext.wedge(u, b)) for f in flats if (g, f) in d.pieces]
            contr = [((e, f), (g, f), lambda b, u=u: ext.contract_left(u, b, a)) for f in flats if (g, f) in d.pieces]
            R_gens.append(embed(mult))
            R_gens.append(embed(contr, project=True))
        for uc in pc.uc_vectors():
            # uc in Uc(e, g): right wedge B(x, e) -> B(x, g), right contraction back
            mult = [((x, e), (x, g), lambda b, uc=uc: ext.wedge(b, uc)) for x in flats if (x, e) in d.pieces]
            contr = [((x, g), (x, e), lambda b, uc=uc: ext.contract_right(b, uc, a)) for x in flats if (x, e) in d.pieces]
            Rc_gens.append(embed(mult))
            Rc_gens.append(embed(contr, project=True))
    log.info("[operator_model] dim B = %d, %d R generators, %d Rc generators", total, len(R_gens), len(Rc_gens))
    return OperatorModel(dim_B=total, offsets=offsets, R_generators=R_gens, Rc_generators=Rc_gens)


def double_centralizer_checks(d: RingelDatum, cap: Optional[int] = None) -> List[CheckResult]:
    model = operator_model(d, cap)
    dims = algebra_dims(d)
    span_t = Tally("R_span_dimension")
    dim_R = xalg.span_dimension(model.R_generators, closed_under_product=True)
    span_t.check(dim_R == dims.dim_R, lambda: f"operator span {dim_R} vs formula {dims.dim_R}")
    span_c = Tally("Rc_span_dimension")
    dim_Rc = xalg.span_dimension(model.Rc_generators, closed_under_product=True)
    span_c.check(dim_Rc == dims.dim_Rc, lambda: f"operator span {dim_Rc} vs formula {dims.dim_Rc}")
    cent_t = Tally("centralizer_of_Rc")
    cent = xalg.centralizer_dimension(model.Rc_generators, size=model.dim_B)
    cent_t.check(cent == dims.dim_R, lambda: f"centralizer {cent} vs dim R {dims.dim_R}")
    comm_t = Tally("R_Rc_commute")
    for i, x in enumerate(model.R_generators):
        for j, y in enumerate(model.Rc_generators):
            comm_t.check(xalg.is_zero(xalg.mul(x, y) - xalg.mul(y, x)), lambda: f"R gen {i} vs Rc gen {j}")
    return [span_t.result(), span_c.result(), cent_t.result(), comm_t.result()]


# ------------------------- axioms -------------------------
def _span(vectors: List[ExtVector], pc: Piece, tally: Tally, what: str, project: bool = False):
    cols = []
    for v in vectors:
        c = pc.coords(v, project)
        if c is None:
            tally.check(False, f"{what}: product leaves piece {fmt_set(pc.e)}/{fmt_set(pc.f)}")
            continue
        cols.append(c)
    return xalg.from_columns(cols, QQ, pc.dim)


def _orthogonal(basis, pc: Piece, a):
    """Pairing-orthogonal complement of span(basis) inside the piece."""
    D = xalg.diagonal(inverse_weights(pc.monomials, a), QQ)
    return xalg.kernel_basis(xalg.mul(basis.transpose(), D))


def _label(*flats: int) -> str:
    return "/".join(fmt_set(x) for x in flats)


def check_axioms(d: RingelDatum) -> AxiomReport:
    if d.p is not None:
        raise InputError("Axiom checks run over the rationals; build the datum with p=None.")
    a = d.weights
    flats = d.flats
    nested = lambda x, y: x & y == x  # noqa: E731
    results = []

    # A1: units, b -| b = <b,b> 1, products of pieces stay in pieces
    t = Tally("A1_triangularity")
    one = ExtVector.monomial(0)
    for e in flats:
        pc = d.pieces[(e, e)]
        t.check(pc.monomials == (0,) and ext.pair(one, one, a) == 1, f"unit piece at {fmt_set(e)}")
    for (e, f), pc in d.pieces.items():
        for b in pc.monomial_vectors():
            t.check(ext.contract_left(b, b, a) == one.scale(ext.pair(b, b, a)), f"b -| b at {_label(e, f)}")
    for e in flats:
        for g in flats:
            for f in flats:
                if not (nested(e, g) and nested(g, f)):
                    continue
                src1, src2, dst = d.pieces[(e, g)], d.pieces[(g, f)], d.pieces[(e, f)]
                for x in src1.monomials:
                    for y in src2.monomials:
                        prod = ext.wedge(ExtVector.monomial(x), ExtVector.monomial(y))
                        t.check(dst.coords(prod) is not None, f"product {fmt_set(x)}^{fmt_set(y)} at {_label(e, g, f)}")
    results.append(t.result())

    # A2: U^perp = sum B(E,G) ^ Uc(G,F), Uc^perp = sum U(E,G) ^ B(G,F)
    t2 = Tally("A2_orthogonal_complements")
    for (e, f), pc in d.pieces.items():
        gens = []
        for g in d.between(e, f):
            if g == f:
                continue
            left, right = d.pieces[(e, g)], d.pieces[(g, f)]
            gens += [ext.wedge(b, uc) for b in left.monomial_vectors() for uc in right.uc_vectors()]
        ok = xalg.same_span(_orthogonal(pc.U, pc, a), _span(gens, pc, t2, "B^Uc"))
        t2.check(ok, f"U^perp at {_label(e, f)}")
        gens = []
        for g in d.between(e, f):
            if g == e:
                continue
            left, right = d.pieces[(e, g)], d.pieces[(g, f)]
            gens += [ext.wedge(u, b) for u in left.u_vectors() for b in right.monomial_vectors()]
        ok = xalg.same_span(_orthogonal(pc.Uc, pc, a), _span(gens, pc, t2, "U^B"))
        t2.check(ok, f"Uc^perp at {_label(e, f)}")
    results.append(t2.result())

    # A3: (u -| b) ^ uc = u -| (b ^ uc) for E <= G <= H <= K
    t3 = Tally("A3_associativity")
    for e in flats:
        for g in flats:
            if not nested(e, g):
                continue
            us = d.pieces[(e, g)].u_vectors()
            for h in flats:
                if not nested(g, h):
                    continue
                bs = d.pieces[(e, h)].monomial_vectors()
                for k in flats:
                    if not nested(h, k):
                        continue
                    ucs = d.pieces[(h, k)].uc_vectors()
                    for u in us:
                        for b in bs:
                            for uc in ucs:
                                lhs = ext.wedge(ext.contract_left(u, b, a), uc)
                                rhs = ext.contract_left(u, ext.wedge(b, uc), a)
                                t3.check(lhs == rhs, lambda: f"A3 at {_label(e, g, h, k)}")
    results.append(t3.result())

    # subrings: U ^ U in U, Uc ^ Uc in Uc, B -| U in U, Uc |- B in Uc
    ts = Tally("subring_closure")
    for e in flats:
        for g in flats:
            for f in flats:
                if not (nested(e, g) and nested(g, f)):
                    continue
                p1, p2, p3 = d.pieces[(e, g)], d.pieces[(g, f)], d.pieces[(e, f)]
                prods = [ext.wedge(x, y) for x in p1.u_vectors() for y in p2.u_vectors()]
                ts.check(xalg.span_contains(p3.U, _span(prods, p3, ts, "U^U")), f"U^U at {_label(e, g, f)}")
                prods = [ext.wedge(x, y) for x in p1.uc_vectors() for y in p2.uc_vectors()]
                ts.check(xalg.span_contains(p3.Uc, _span(prods, p3, ts, "Uc^Uc")), f"Uc^Uc at {_label(e, g, f)}")
                conts = [ext.contract_left(b, u, a) for b in p1.monomial_vectors() for u in p3.u_vectors()]
                ts.check(xalg.span_contains(p2.U, _span(conts, p2, ts, "B-|U")), f"B-|U at {_label(e, g, f)}")
                conts = [ext.contract_right(uc, b, a) for uc in p3.uc_vectors() for b in p2.monomial_vectors()]
                ts.check(xalg.span_contains(p1.Uc, _span(conts, p1, ts, "Uc|-B", project=True)), f"Uc|-B at {_label(e, g, f)}")
    results.append(ts.result())

    # U and Uc orthogonal on nonempty minors; on (E,E) both are spanned by 1
    to = Tally("U_orthogonal_Uc")
    for (e, f), pc in d.pieces.items():
        if e == f:
            continue
        D = xalg.diagonal(inverse_weights(pc.monomials, a), QQ)
        to.check(xalg.is_zero(xalg.mul(xalg.mul(pc.U.transpose(), D), pc.Uc)), f"U vs Uc at {_label(e, f)}")
    results.append(to.result())

    results += _image_descriptions(d)
    results.append(_contraction_stability(d))
    results.append(_flat_orthogonality(d))
    return AxiomReport(results=results)


def _image_descriptions(d: RingelDatum) -> List[CheckResult]:
    """U^perp = Im delta_h from independent (r-1)-sets, Uc^perp = Im d_v from (r+1, r)-sets."""
    a = d.weights
    th = Tally("U_perp_is_image_delta_h")
    tv = Tally("Uc_perp_is_image_d_v")
    for (e, f), pc in d.pieces.items():
        mm = pc.minor
        r = mm.r
        ground = mm.ambient_ground
        keep = set(pc.monomials)
        if r > 0:
            src = ext.monomial_basis(mm, r - 1, r - 1).monomials
            imgs = [ExtVector({t: c for t, c in ext.delta(ExtVector.monomial(s), a, ground).terms.items() if t in keep})
                    for s in src]
            th.check(xalg.same_span(_orthogonal(pc.U, pc, a), _span(imgs, pc, th, "delta_h")),
                     f"Im delta_h at {_label(e, f)}")
        if r < mm.n:
            src = ext.monomial_basis(mm, r + 1, r).monomials
            imgs = [ExtVector({t: c for t, c in ext.boundary(ExtVector.monomial(s)).terms.items() if t in keep})
                    for s in src]
            tv.check(xalg.same_span(_orthogonal(pc.Uc, pc, a), _span(imgs, pc, tv, "d_v")),
                     f"Im d_v at {_label(e, f)}")
    return [th.result(), tv.result()]


def _contraction_stability(d: RingelDatum) -> CheckResult:
    """e_S -| u lies in U of the contraction by closure(S), for S independent."""
    a = d.weights
    t = Tally("contraction_stability")
    for (e, f), pc in d.pieces.items():
        mm = pc.minor
        us = pc.u_vectors()
        if not us:
            continue
        for s in mat.independent_sets(mm):
            cl = mat.closure(mm, s)
            target = set(ext.basis_monomials(mat.contraction(mm, cl)))
            es = ExtVector.monomial(mm.to_ambient(s))
            for u in us:
                v = ext.contract_left(es, u, a)
                ok = all(m in target for m in v.terms) and not ext.boundary(v)
                t.check(ok, lambda: f"S={fmt_set(mm.to_ambient(s))} at {_label(e, f)}")
    return t.result()


def _flat_orthogonality(d: RingelDatum) -> CheckResult:
    """B(M(K)) ^ Uc(M/K) is orthogonal to U(M) for K != top; U(M(K)) ^ B(M/K) to Uc(M) for K != bottom."""
    a = d.weights
    t = Tally("flat_orthogonality")
    top = d.pieces[(d.poset.one, d.poset.zero)]
    mm = top.minor
    us, ucs = top.u_vectors(), top.uc_vectors()
    for k in mat.flats(mm):
        restr, contr = mat.restriction(mm, k), mat.contraction(mm, k)
        if k != mm.full:
            _, _, Uc_k = subspaces(contr, a)
            xs = [ExtVector.monomial(x) for x in ext.basis_monomials(restr)]
            for x in xs:
                for col in xalg.columns(Uc_k):
                    w = ext.wedge(x, ExtVector.combination(ext.basis_monomials(contr), col))
                    t.check(all(ext.pair(w, u, a) == 0 for u in us), lambda: f"B(M(K))^Uc(M/K), K={fmt_set(k)}")
        if k != 0:
            _, U_k, _ = subspaces(restr, a)
            ys = [ExtVector.monomial(y) for y in ext.basis_monomials(contr)]
            for col in xalg.columns(U_k):
                uk = ExtVector.combination(ext.basis_monomials(restr), col)
                for y in ys:
                    w = ext.wedge(uk, y)
                    t.check(all(ext.pair(w, uc, a) == 0 for uc in ucs), lambda: f"U(M(K))^B(M/K), K={fmt_set(k)}")
    return t.result()


# ------------------------- identities -------------------------
def krs_checks(m: Matroid, d: Optional[RingelDatum] = None) -> List[CheckResult]:
    """Basis count over flats, its cyclic-flat refinement, and the Tutte convolution."""
    m = _dense(m)
    t1 = Tally("krs_dimension")
    total = sum(mat.mu_plus_dual(mat.restriction(m, v)) * mat.mu_plus(mat.contraction(m, v)) for v in mat.flats(m))
    t1.check(total == len(m.bases), f"#bases {len(m.bases)} vs flat sum {total}")

    t2 = Tally("krs_cyclic_refinement")
    d = d if d is not None else build_datum(m)
    one, zero = d.poset.one, d.poset.zero
    refined = sum(d.dim_U(one, e) * d.dim_Uc(e, zero) for e in d.flats)
    t2.check(refined == len(m.bases), f"#bases {len(m.bases)} vs cyclic sum {refined}")

    t3 = Tally("tutte_convolution")
    conv = mat.TuttePoly()
    for s in mat.submasks(m.full):
        left = mat.tutte(mat.restriction(m, s))
        right = mat.tutte(mat.contraction(m, s))
        ly = mat.TuttePoly({k: c for k, c in left.coefficients.items() if k[0] == 0})
        rx = mat.TuttePoly({k: c for k, c in right.coefficients.items() if k[1] == 0})
        conv = conv + mat.TuttePoly.from_poly(ly.as_poly() * rx.as_poly())
    expected = mat.tutte(m)
    t3.check(conv == expected, f"T = {expected}, convolution = {conv}")
    return [t1.result(), t2.result(), t3.result()]


def duality_checks(m: Matroid, a: Optional[Sequence] = None) -> List[CheckResult]:
    m = _dense(m)
    a = normalize_weights(m, a)
    md = mat.dual(m)
    results = []

    t = Tally("cyclic_flat_complement")
    ours = {m.full & ~f for f in mat.cyclic_flats(m)}
    theirs = set(mat.cyclic_flats(md))
    t.check(ours == theirs, "complements of cyclic flats differ from the dual's cyclic flats")
    results.append(t.result())

    monos, U, Uc = subspaces(m, a)
    monos_d, U_d, Uc_d = subspaces(md, a)
    t = Tally("D_exchanges_U_and_Uc")
    t.check(U.shape[1] == Uc_d.shape[1] and Uc.shape[1] == U_d.shape[1],
            f"dim U = {U.shape[1]}, dim Uc* = {Uc_d.shape[1]}, dim Uc = {Uc.shape[1]}, dim U* = {U_d.shape[1]}")
    target = set(monos_d)
    for col in xalg.columns(U):
        img = ext.duality_D(ExtVector.combination(monos, col), a, m.full)
        t.check(all(x in target for x in img.terms) and not ext.delta(img, a, m.full), "D(u) not in Uc(M*)")
    for col in xalg.columns(Uc):
        img = ext.duality_D(ExtVector.combination(monos, col), a, m.full)
        t.check(all(x in target for x in img.terms) and not ext.boundary(img), "D(uc) not in U(M*)")
    results.append(t.result())

    t = Tally("ringel_dual_dimension")
    dims, dims_d = algebra_dims(build_datum(m, a)), algebra_dims(build_datum(md, a))
    t.check(dims.dim_Rc == dims_d.dim_R, f"dim Rc(M) = {dims.dim_Rc}, dim R(M*) = {dims_d.dim_R}")
    results.append(t.result())
    return results


def kernel_dimension_checks(d: RingelDatum) -> CheckResult:
    """dim U = T(0,1) and dim Uc = T(1,0) of each minor."""
    t = Tally("kernel_dimensions")
    for (e, f), pc in d.pieces.items():
        tp = mat.tutte(pc.minor)
        t.check(pc.dim_U == tp(0, 1) and pc.dim_Uc == tp(1, 0),
                lambda: f"{_label(e, f)}: dims ({pc.dim_U},{pc.dim_Uc}) vs ({tp(0, 1)},{tp(1, 0)})")
    return t.result()


def semisimplicity_cross_check(m: Matroid, primes: Sequence[int]) -> CheckResult:
    """Weight-sum criterion agrees with 'decomposition matrix is the identity'."""
    t = Tally("semisimplicity_criterion")
    for p in primes:
        d = build_datum(m, None, p)
        predicted = semisimple_test(m, None, p)
        actual = decomposition_matrix(d).is_identity()
        t.check(predicted == actual, f"p={p}: criterion {predicted}, decomposition identity {actual}")
    return t.result()
