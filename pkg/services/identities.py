# services/identities.py
"""
Property suites for the exterior algebra and the matroid kernel.

Small ground sets (n <= EXHAUSTIVE_MAX) are checked on every monomial; larger
ones on SCHUR_SAMPLES random integer vectors drawn from a seeded numpy
Generator, so reruns are reproducible.
"""
from __future__ import annotations
import itertools
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from services import exterior as ext
from services import matroid as mat
from services.exterior import ExtVector
from services.matroid import Matroid, fmt_set, popcount
from services.report_service import CheckResult, Tally
from services.settings_service import get_settings

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX = 5


def random_weights(rng: np.random.Generator, n: int, bound: int = 5) -> List[int]:
    """Nonzero integers in [-bound, bound]."""
    out = []
    for _ in range(n):
        v = 0
        while v == 0:
            v = int(rng.integers(-bound, bound + 1))
        out.append(v)
    return out


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(get_settings().seed if seed is None else seed)


def _samples(samples: Optional[int]) -> int:
    return get_settings().samples if samples is None else samples


def _random_mask(rng: np.random.Generator, ground: int) -> int:
    out = 0
    for i in mat.elements(ground):
        if rng.integers(0, 2):
            out |= 1 << i
    return out


def _random_homogeneous(rng: np.random.Generator, n: int, k: int) -> ExtVector:
    monos = [mat.mask_of(c) for c in itertools.combinations(range(n), k)]
    return ext.random_vector(rng, monos)


# ------------------------- pure exterior identities -------------------------
def exterior_suite(n: int, a: Optional[Sequence[int]] = None, samples: Optional[int] = None,
                   seed: Optional[int] = None) -> List[CheckResult]:
    """Adjunctions, split products, d^2 = delta^2 = 0 and the duality identities on Lambda(0..n-1)."""
    rng = make_rng(seed)
    a = list(a) if a is not None else random_weights(rng, n)
    full = (1 << n) - 1
    exhaustive = n <= EXHAUSTIVE_MAX
    count = _samples(samples)
    monos = list(range(1 << n))

    adj = Tally(f"contraction_adjunction[n={n}]")
    split = Tally(f"split_product_rule[n={n}]")
    fact = Tally(f"pairing_factorization[n={n}]")
    square = Tally(f"differentials_square_zero[n={n}]")
    dadj = Tally(f"delta_adjoint_of_d[n={n}]")
    dual = Tally(f"duality_identities[n={n}]")

    if exhaustive:
        triples = ((x, y, z) for x in monos for y in monos for z in monos)
        singles = [ExtVector.monomial(m) for m in monos]
    else:
        triples = ((int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))
                   for _ in range(count))
        singles = [_random_homogeneous(rng, n, int(rng.integers(0, n + 1))) for _ in range(count)]

    for x, y, z in triples:
        ex, ey, ez = ExtVector.monomial(x), ExtVector.monomial(y), ExtVector.monomial(z)
        adj.check(ext.pair(ext.contract_left(ex, ey, a), ez, a) == ext.pair(ey, ext.wedge(ex, ez), a),
                  lambda: f"left: x={fmt_set(x)} y={fmt_set(y)} z={fmt_set(z)}")
        adj.check(ext.pair(ext.contract_right(ex, ey, a), ez, a) == ext.pair(ex, ext.wedge(ez, ey), a),
                  lambda: f"right: x={fmt_set(x)} y={fmt_set(y)} z={fmt_set(z)}")

    # split supports: x, x' inside S and y, y' outside
    splits = (range(1 << n) if exhaustive else (int(rng.integers(0, 1 << n)) for _ in range(count)))
    for s in splits:
        rest = full & ~s
        if exhaustive:
            quads = ((x, x2, y, y2) for x in mat.submasks(s) for x2 in mat.submasks(s)
                     for y in mat.submasks(rest) for y2 in mat.submasks(rest))
        else:
            quads = [(_random_mask(rng, s), _random_mask(rng, s), _random_mask(rng, rest), _random_mask(rng, rest))]
        for x, x2, y, y2 in quads:
            ex, ex2, ey, ey2 = (ExtVector.monomial(v) for v in (x, x2, y, y2))
            lhs = ext.contract_left(ext.wedge(ex, ey), ext.wedge(ex2, ey2), a)
            sign = -1 if ((popcount(x) - popcount(x2)) * popcount(y)) % 2 else 1
            rhs = ext.wedge(ext.contract_left(ex, ex2, a), ext.contract_left(ey, ey2, a)).scale(sign)
            split.check(lhs == rhs, lambda: f"S={fmt_set(s)} x={fmt_set(x)} x'={fmt_set(x2)} y={fmt_set(y)} y'={fmt_set(y2)}")
            lhs_p = ext.pair(ext.wedge(ex, ey), ext.wedge(ex2, ey2), a)
            fact.check(lhs_p == ext.pair(ex, ex2, a) * ext.pair(ey, ey2, a),
                       lambda: f"S={fmt_set(s)} pairing does not factor")

    for v in singles:
        square.check(not ext.boundary(ext.boundary(v)), lambda: f"d^2 on {v}")
        square.check(not ext.delta(ext.delta(v, a, full), a, full), lambda: f"delta^2 on {v}")
        degs = v.degrees()
        k = degs.pop() if degs else 0
        dv = ext.duality_D(v, a, full)
        sign1 = 1 if (k + 1) % 2 == 0 else -1
        dual.check(ext.delta(dv, a, full) == ext.duality_D(ext.boundary(v), a, full).scale(sign1),
                   lambda: f"delta D = (-1)^(k+1) D d on {v}")
        sign2 = 1 if k % 2 == 0 else -1
        dual.check(ext.boundary(dv) == ext.duality_D(ext.delta(v, a, full), a, full).scale(sign2),
                   lambda: f"d D = (-1)^k D delta on {v}")
        sign3 = -1 if (k * (n - k)) % 2 else 1
        dual.check(ext.duality_D(dv, a, full) == v.scale(Fraction(sign3, ext.weight_of(a, full))),
                   lambda: f"D^2 on {v}")

    pairs = ((x, y) for x in monos for y in monos) if exhaustive else \
        ((int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))) for _ in range(count))
    for x, y in pairs:
        ex, ey = ExtVector.monomial(x), ExtVector.monomial(y)
        dadj.check(ext.pair(ext.delta(ex, a, full), ey, a) == ext.pair(ex, ext.boundary(ey), a),
                   lambda: f"<delta e{fmt_set(x)}, e{fmt_set(y)}> != <e{fmt_set(x)}, d e{fmt_set(y)}>")

    return [adj.result(), split.result(), fact.result(), square.result(), dadj.result(), dual.result()]


# ------------------------- identities relative to a matroid -------------------------
def matroid_exterior_suite(m: Matroid, a: Optional[Sequence[int]] = None,
                           seed: Optional[int] = None) -> List[CheckResult]:
    """Duality on B(M), split duality over flats, restrictions of d and delta, and the Laplacian."""
    rng = make_rng(seed)
    n = m.n
    a = list(a) if a is not None else random_weights(rng, n)
    full = m.full
    md = mat.dual(m)
    r = m.r
    B = ext.basis_monomials(m)
    Bd = ext.basis_monomials(md)
    dual_bases = set(Bd)

    t_maps = Tally("duality_maps_B_to_dual")
    for b in B:
        img = ext.duality_D(ExtVector.monomial(b), a, full)
        t_maps.check(all(t in dual_bases for t in img.terms), lambda: f"D(e{fmt_set(b)}) leaves B(M*)")
    t_maps_res = t_maps.result()

    t_adj = Tally("duality_adjoint_sign")
    sign = -1 if (r * (n - r)) % 2 else 1
    for x in B:
        for y in Bd:
            ex, ey = ExtVector.monomial(x), ExtVector.monomial(y)
            lhs = ext.pair(ext.duality_D(ex, a, full), ey, a)
            rhs = sign * ext.pair(ex, ext.duality_D(ey, a, full), a)
            t_adj.check(lhs == rhs, lambda: f"x={fmt_set(x)} y={fmt_set(y)}")

    t_split = Tally("split_duality_over_flats")
    for k in mat.flats(m):
        restr, contr = mat.restriction(m, k), mat.contraction(m, k)
        rk = restr.r
        kk = popcount(k)
        rest = full & ~k
        sgn = (-1 if ((kk - rk) * (n - kk)) % 2 else 1) * ext.eps_sign(k, rest)
        for x in ext.basis_monomials(restr):
            for y in ext.basis_monomials(contr):
                ex, ey = ExtVector.monomial(x), ExtVector.monomial(y)
                lhs = ext.duality_D(ext.wedge(ex, ey), a, full)
                rhs = ext.wedge(ext.duality_D(ey, a, rest), ext.duality_D(ex, a, k)).scale(sgn)
                t_split.check(lhs == rhs, lambda: f"K={fmt_set(k)} x={fmt_set(x)} y={fmt_set(y)}")

    t_restr = Tally("restrictions_on_B")
    t_lap = Tally("laplacian_on_B")
    total = sum(a)
    for b in B:
        eb = ExtVector.monomial(b)
        t_restr.check(ext.delta(eb, a, full) == ext.delta_v(m, eb, a), lambda: f"delta != delta_v on e{fmt_set(b)}")
        t_restr.check(ext.boundary(eb) == ext.boundary_h(m, eb), lambda: f"d != d_h on e{fmt_set(b)}")
        lap_h, lap_v = ext.laplacians(m, eb, a)
        t_lap.check(lap_h + lap_v == eb.scale(total), lambda: f"Laplacian on e{fmt_set(b)} with a={a}")
    return [t_maps_res, t_adj.result(), t_split.result(), t_restr.result(), t_lap.result()]


# ------------------------- matroid properties -------------------------
def matroid_suite(m: Matroid, samples: Optional[int] = None, seed: Optional[int] = None) -> List[CheckResult]:
    rng = make_rng(seed)
    count = _samples(samples)
    md = mat.dual(m)
    full = m.full

    t_rank = Tally("rank_axioms")
    for _ in range(count):
        x, y = _random_mask(rng, full), _random_mask(rng, full)
        rx, ry = m.rank(x), m.rank(y)
        t_rank.check(rx <= popcount(x), lambda: f"rank {fmt_set(x)} > size")
        t_rank.check(m.rank(x & y) <= min(rx, ry) and max(rx, ry) <= m.rank(x | y),
                     lambda: f"monotonicity at {fmt_set(x)}, {fmt_set(y)}")
        t_rank.check(rx + ry >= m.rank(x | y) + m.rank(x & y),
                     lambda: f"submodularity at {fmt_set(x)}, {fmt_set(y)}")

    t_dual = Tally("dual_involution")
    t_dual.check(mat.dual(md).bases == m.bases, "dual(dual(M)) changed the bases")

    t_tutte = Tally("tutte_invariants")
    tp = mat.tutte(m)
    t_tutte.check(tp == mat.tutte_deletion_contraction(m), "activity and deletion-contraction disagree")
    t_tutte.check(mat.tutte(md) == tp.swapped(), "T(M*)(x,y) != T(M)(y,x)")
    t_tutte.check(tp(1, 1) == len(m.bases), "T(1,1) != number of bases")
    ext_passive, int_passive = mat.passive_counts(m)
    t_tutte.check(ext_passive == mat.mu_plus(m), f"{ext_passive} externally passive bases vs T(1,0)")
    t_tutte.check(int_passive == mat.mu_plus_dual(m), f"{int_passive} internally passive bases vs T(0,1)")
    if m.n >= 2:
        t_tutte.check(mat.beta(m) == mat.beta(md), "beta(M) != beta(M*)")

    t_flats = Tally("cyclic_flat_duality")
    cf = mat.cyclic_flats(m)
    cfd = mat.cyclic_flats(md)
    t_flats.check({full & ~f for f in cf} == set(cfd), "complement does not map cyclic flats onto the dual's")
    for f in cf:
        t_flats.check(mat.closure(m, f) == f and mat.is_coloop_free_set(m, f), f"{fmt_set(f)} is not a cyclic flat")
        t_flats.check(cf.one & f == cf.one and f & cf.zero == f, f"{fmt_set(f)} outside [loops, non-coloops]")
    return [t_rank.result(), t_dual.result(), t_tutte.result(), t_flats.result()]
