# cli/selftest.py
"""
Fixture suite behind `schur selftest`: the worked families (single-element
bases and their duals, the K4 graph) plus every structural check on the
library matroids. Exact arithmetic only, so two runs print the same report.
"""
from __future__ import annotations
import logging
from typing import Callable, List

from cli.parsing import K4_EDGES
from services import identities
from services import matroid as mat
from services import schur
from services.matroid import Matroid, fmt_set
from services.pool import parallel_map
from services.report_service import CheckResult, Tally

log = logging.getLogger(__name__)

FAMILY_PRIMES = (2, 3, 5, 7)
SEMISIMPLE_PRIMES = (2, 3, 5, 7, 11, 13)
JANTZEN_PRIMES = (2, 3, 5)


def k4() -> Matroid:
    return mat.from_graph(4, K4_EDGES, name="K4")


def library() -> List[Matroid]:
    """U(1,n), U(2,n) for n <= 6, K4, and their duals."""
    base = [mat.uniform(1, n) for n in range(2, 7)] + [mat.uniform(2, n) for n in range(3, 7)] + [k4()]
    return base + [mat.dual(m) for m in base]


def small_library() -> List[Matroid]:
    return [m for m in library() if m.n <= 5] + [k4()]


# ------------------------- worked families -------------------------
def family_fixtures() -> CheckResult:
    t = Tally("single_element_bases_family")
    for n in range(2, 9):
        m = mat.uniform(1, n, name=f"M{n}")
        top = m.full
        d = schur.build_datum(m)
        t.check(schur.standard_character(d, 0) == {0: 1, top: n - 1}, f"M{n}: ch Delta(empty)")
        for p in FAMILY_PRIMES:
            dp = schur.build_datum(m, None, p)
            divides = n % p == 0
            want = {0: 1, top: n - 2 if divides else n - 1}
            got = schur.simple_character(dp, 0)
            t.check(got == want, lambda: f"M{n} p={p}: ch L(empty) = {got}")
            t.check(schur.decomposition_matrix(dp)[(0, top)] == int(divides), f"M{n} p={p}: [Delta(I):L(empty)]")
    return t.result()


def dual_family_fixtures() -> CheckResult:
    t = Tally("dual_single_element_bases_family")
    for n in range(2, 9):
        m = mat.dual(mat.uniform(1, n, name=f"M{n}"))
        top = m.full
        d = schur.build_datum(m)
        t.check(schur.standard_character(d, 0) == {0: 1, top: 1}, f"M{n}*: ch Delta(empty)")
        for p in FAMILY_PRIMES:
            dp = schur.build_datum(m, None, p)
            divides = n % p == 0
            want = {0: 1} if divides else {0: 1, top: 1}
            got = schur.simple_character(dp, 0)
            t.check(got == want, lambda: f"M{n}* p={p}: ch L(empty) = {got}")
            t.check(schur.decomposition_matrix(dp)[(0, top)] == int(divides), f"M{n}* p={p}: [Delta(I):L(empty)]")
    return t.result()


def k4_fixtures() -> CheckResult:
    t = Tally("k4_characters")
    m = k4()
    d = schur.build_datum(m)
    top = m.full
    triangles = [f for f in d.flats if f not in (0, top)]
    t.check(len(d.flats) == 6 and len(triangles) == 4, f"cyclic flats {[fmt_set(f) for f in d.flats]}")
    want = {0: 1, top: 6}
    want.update({a: 1 for a in triangles})
    t.check(schur.standard_character(d, 0) == want, "ch Delta(empty)")
    for a in triangles:
        t.check(schur.standard_character(d, a) == {a: 1, top: 2}, f"ch Delta({fmt_set(a)})")
    for p, top_simple, mult in ((2, 4, 2), (3, 3, 3), (5, 6, 0), (7, 6, 0)):
        dp = schur.build_datum(m, None, p)
        got = schur.simple_character(dp, 0)
        t.check(got[top] == top_simple and got[0] == 1, lambda: f"p={p}: ch L(empty) = {got}")
        if p == 3:
            t.check(got == {0: 1, top: 3}, lambda: f"p=3: ch L(empty) = {got}")
        t.check(schur.decomposition_matrix(dp)[(0, top)] == mult, f"p={p}: [Delta(I):L(empty)]")
    return t.result()


# ------------------------- library sweeps -------------------------
def semisimplicity_sweep() -> CheckResult:
    t = Tally("semisimplicity_sweep")
    for m in library():
        res = schur.semisimplicity_cross_check(m, SEMISIMPLE_PRIMES)
        t.check(res.passed, lambda: f"{m.name}: {'; '.join(res.violations)}")
    return t.result()


def determinant_sweep() -> CheckResult:
    t = Tally("determinant_sweep")
    for m in library():
        _, (res,) = schur.determinant_checks(m)
        t.check(res.passed, lambda: f"{m.name} unit weights: {'; '.join(res.violations)}")
        rng = identities.make_rng(None)
        a = identities.random_weights(rng, m.n)
        _, (res,) = schur.determinant_checks(m, a)
        t.check(res.passed, lambda: f"{m.name} a={a}: {'; '.join(res.violations)}")
    return t.result()


def axiom_sweep() -> CheckResult:
    t = Tally("axiom_sweep")
    for m in small_library():
        report = schur.check_axioms(schur.build_datum(m))
        for r in report.results:
            t.check(r.passed, lambda: f"{m.name} {r.name}: {'; '.join(r.violations[:2])}")
    return t.result()


def centralizer_fixtures() -> CheckResult:
    t = Tally("double_centralizer")
    for m in (mat.uniform(1, 2), mat.uniform(1, 3), mat.uniform(2, 3)):
        d = schur.build_datum(m)
        for r in schur.double_centralizer_checks(d):
            t.check(r.passed, lambda: f"{m.name} {r.name}: {'; '.join(r.violations[:2])}")
    t.check(schur.algebra_dims(schur.build_datum(mat.uniform(1, 2))).dim_R == 5, "dim R(U(1,2)) != 5")
    return t.result()


def structure_sweep() -> CheckResult:
    """Tilting filtrations, duality, dimension identities and kernel sizes."""
    t = Tally("structure_sweep")
    for m in library():
        d = schur.build_datum(m)
        checks = [schur.tilting_character_check(d, e) for e in d.flats]
        checks += schur.duality_checks(m)
        checks += schur.krs_checks(m, d)
        checks.append(schur.kernel_dimension_checks(d))
        for r in checks:
            t.check(r.passed, lambda: f"{m.name} {r.name}: {'; '.join(r.violations[:2])}")
    t.check(len(k4().bases) == 16, "K4 has 16 spanning trees")
    return t.result()


def jantzen_sweep() -> CheckResult:
    t = Tally("jantzen_sweep")
    for m in small_library():
        d = schur.build_datum(m)
        for p in JANTZEN_PRIMES:
            for r in schur.jantzen_checks(d, schur.build_datum(m, None, p), p):
                t.check(r.passed, lambda: f"{m.name} p={p} {r.name}: {'; '.join(r.violations[:2])}")
    # equality cases
    for n, p in ((2, 2), (3, 3), (6, 2), (6, 3), (5, 5)):
        m = mat.uniform(1, n)
        d, dp = schur.build_datum(m), schur.build_datum(m, None, p)
        gap = schur.standard_character(d, 0) - schur.simple_character(dp, 0)
        t.check(schur.jantzen_rhs(d, p, 0).total == gap, f"U(1,{n}) p={p}: sum differs from the gap")
    m = k4()
    d = schur.build_datum(m)
    t.check(schur.jantzen_rhs(d, 2, 0).total == {m.full: 2}, "K4 p=2: sum is not 2 e(I)")
    return t.result()


def exterior_sweep() -> CheckResult:
    t = Tally("exterior_identities")
    results: List[CheckResult] = []
    for n in range(1, 9):
        results += identities.exterior_suite(n)
    for m in small_library():
        results += identities.matroid_exterior_suite(m)
        results += identities.matroid_suite(m)
    for r in results:
        t.check(r.passed, lambda: f"{r.name}: {'; '.join(r.violations[:2])}")
    return t.result()


SECTIONS: List[Callable[[], CheckResult]] = [
    family_fixtures,
    dual_family_fixtures,
    k4_fixtures,
    semisimplicity_sweep,
    determinant_sweep,
    axiom_sweep,
    centralizer_fixtures,
    structure_sweep,
    jantzen_sweep,
    exterior_sweep,
]


def run_selftest(workers=None) -> List[CheckResult]:
    log.info("[selftest] %d sections", len(SECTIONS))
    return parallel_map(lambda section: section(), SECTIONS, workers)
