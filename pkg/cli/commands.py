# cli/commands.py
"""
Subcommand handlers and argparse wiring.

Every handler fills a Report; `run` prints its text rendering, optionally
writes the JSON form, and maps the outcome to an exit code:
0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from cli import parsing
from cli.parsing import JobSpec
from services import identities
from services import matroid as mat
from services import schur
from services.errors import DimensionTooLarge, InputError, SchurError
from services.log_service import level_from_verbosity, setup_logging
from services.matroid import fmt_set
from services.pool import parallel_map
from services.report_service import CheckResult, Report, render_text
from services.settings_service import get_settings

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


# ------------------------- helpers -------------------------
def _report(job: JobSpec, weights=None) -> Report:
    m = job.matroid
    poset = mat.cyclic_flats(m)
    return Report(
        matroid=m.name or "matroid",
        weights=list(weights if weights is not None else (job.weights or [1] * m.n)),
        field="Q" if len(job.primes) != 1 else "Fp",
        p=job.primes[0] if len(job.primes) == 1 else None,
        flats=[mat.elements(f) for f in poset],
    )


def _primes_or_default(job: JobSpec) -> List[int]:
    return job.primes or list(schur.DEFAULT_PRIMES)


def _require_primes(job: JobSpec) -> List[int]:
    if not job.primes:
        raise InputError(f"The '{job.command}' command needs at least one --prime.")
    return job.primes


def _standard_table(d: schur.RingelDatum) -> Dict[str, Dict[str, int]]:
    return {fmt_set(e): schur.standard_character(d, e).as_labels() for e in d.flats}


def _simple_table(d: schur.RingelDatum) -> Dict[str, Dict[str, int]]:
    return {fmt_set(e): schur.simple_character(d, e).as_labels() for e in d.flats}


def _datums_by_prime(job: JobSpec, primes: List[int]) -> Dict[int, schur.RingelDatum]:
    # each datum builds its own pieces serially; the fan-out is over primes
    built = parallel_map(lambda p: schur.build_datum(job.matroid, job.weights, p, workers=1), primes)
    return dict(zip(primes, built))


# ------------------------- handlers -------------------------
def cmd_describe(job: JobSpec) -> Report:
    m = job.matroid
    report = _report(job)
    tp = mat.tutte(m)
    report.extra = {
        "n": m.n,
        "rank": m.r,
        "bases": len(m.bases),
        "flats": len(mat.flats(m)),
        "circuits": [mat.elements(c) for c in mat.circuits(m)],
        "loops": mat.elements(mat.loops(m)),
        "coloops": mat.elements(mat.coloops(m)),
        "components": [mat.elements(c) for c in mat.components(m)] if m.n else [],
        "tutte": str(tp),
        "beta": mat.beta(m),
        "mu_plus": tp(1, 0),
        "mu_plus_dual": tp(0, 1),
    }
    return report


def cmd_characters(job: JobSpec) -> Report:
    report = _report(job)
    d = schur.build_datum(job.matroid, job.weights)
    report.standard_characters = _standard_table(d)
    for p, dp in _datums_by_prime(job, job.primes).items():
        report.simple_characters[str(p)] = _simple_table(dp)
    return report


def cmd_decomp(job: JobSpec) -> Report:
    report = _report(job)
    primes = _require_primes(job)
    for p, dp in _datums_by_prime(job, primes).items():
        report.simple_characters[str(p)] = _simple_table(dp)
        dm = schur.decomposition_matrix(dp)
        for e, f, v in dm.off_diagonal():
            report.decomposition.append({"p": p, "row": fmt_set(e), "col": fmt_set(f), "value": v})
    return report


def cmd_semisimple(job: JobSpec) -> Report:
    report = _report(job)
    report.bad_primes = schur.bad_primes(job.matroid, job.weights)
    report.extra["semisimple"] = {
        str(p): schur.semisimple_test(job.matroid, job.weights, p) for p in _primes_or_default(job)
    }
    return report


def cmd_det(job: JobSpec) -> Report:
    report = _report(job)
    rows, results = schur.determinant_checks(job.matroid, job.weights, _primes_or_default(job))
    report.determinants = rows
    report.add_checks("identities", results)
    return report


def cmd_jantzen(job: JobSpec) -> Report:
    report = _report(job)
    primes = _require_primes(job)
    d = schur.build_datum(job.matroid, job.weights)
    report.standard_characters = _standard_table(d)
    flats = [d.require(job.flat)] if job.flat is not None else list(d.flats)
    sums = {}
    for p, dp in _datums_by_prime(job, primes).items():
        report.add_checks("identities", [
            CheckResult(f"{r.name}[p={p}]", r.passed, r.instances, r.violations, r.failures)
            for r in schur.jantzen_checks(d, dp, p)
        ])
        per_flat = {}
        for e in flats:
            rhs = schur.jantzen_rhs(d, p, e)
            per_flat[fmt_set(e)] = {
                "gap": (schur.standard_character(d, e) - schur.simple_character(dp, e)).as_labels(),
                "rhs": rhs.total.as_labels(),
                "rhs_terms": {fmt_set(k): c for k, c in rhs.terms},
                "filtration": schur.filtration_sum(d, p, e).as_labels(),
            }
        sums[str(p)] = per_flat
    report.extra["jantzen"] = sums
    return report


def identity_results(m: mat.Matroid, weights: Optional[List[int]] = None) -> List[CheckResult]:
    """Every identity check for one matroid, over QQ."""
    d = schur.build_datum(m, weights)
    results = schur.krs_checks(m, d if weights is None else None)
    results += schur.duality_checks(m, weights)
    results.append(schur.kernel_dimension_checks(d))
    results += [schur.tilting_character_check(d, e) for e in d.flats]
    results += identities.matroid_suite(m)
    results += identities.matroid_exterior_suite(m, weights)
    results += identities.exterior_suite(m.n, weights)
    return results


def cmd_identities(job: JobSpec) -> Report:
    report = _report(job)
    report.add_checks("identities", identity_results(job.matroid, job.weights))
    return report


def cmd_axioms(job: JobSpec) -> Report:
    report = _report(job)
    d = schur.build_datum(job.matroid, job.weights)
    report.add_checks("axioms", schur.check_axioms(d).results)
    return report


def cmd_dims(job: JobSpec) -> Report:
    report = _report(job)
    d = schur.build_datum(job.matroid, job.weights)
    dims = schur.algebra_dims(d)
    report.extra["dim_R"] = dims.dim_R
    report.extra["dim_Rc"] = dims.dim_Rc
    report.extra["dim_B"] = sum(pc.dim for pc in d.pieces.values())
    report.extra["R_table"] = {f"{fmt_set(e)}|{fmt_set(f)}": v for (e, f), v in sorted(dims.R_table.items()) if v}
    report.extra["Rc_table"] = {f"{fmt_set(e)}|{fmt_set(f)}": v for (e, f), v in sorted(dims.Rc_table.items()) if v}
    cap = job.cap if job.cap is not None else get_settings().dim_cap
    try:
        report.add_checks("axioms", schur.double_centralizer_checks(d, cap))
    except DimensionTooLarge as exc:
        log.warning("[dims] operator model skipped: %s", exc)
        report.extra["operator_model"] = f"skipped: {exc}"
    return report


def cmd_selftest(job: JobSpec) -> Report:
    from cli.selftest import run_selftest

    report = Report(matroid="selftest", weights=[])
    report.add_checks("identities", run_selftest())
    return report


HANDLERS: Dict[str, Callable[[JobSpec], Report]] = {
    "describe": cmd_describe,
    "characters": cmd_characters,
    "decomp": cmd_decomp,
    "semisimple": cmd_semisimple,
    "det": cmd_det,
    "jantzen": cmd_jantzen,
    "identities": cmd_identities,
    "axioms": cmd_axioms,
    "dims": cmd_dims,
    "selftest": cmd_selftest,
}

HELP = {
    "describe": "cyclic flats, Tutte polynomial and invariants",
    "characters": "standard characters, and simple characters for each --prime",
    "decomp": "decomposition numbers for each --prime",
    "semisimple": "bad primes and the semisimplicity criterion",
    "det": "Gram determinants against their predicted factorization",
    "jantzen": "Jantzen sums for --prime (and --flat)",
    "identities": "dimension, duality and exterior algebra identities",
    "axioms": "Ringel datum axioms over the rationals",
    "dims": "dimensions of both algebras and the double centralizer check",
    "selftest": "the full fixture suite",
}


# ------------------------- argparse -------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matroid", help="Built-in name (Mn:k, Mn*:k, K4, U:r,n), inline JSON or a JSON file.")
    common.add_argument("--weights", help="Comma separated nonzero integer weights, one per element.")
    common.add_argument("--prime", action="append", default=[], help="A prime; repeat for several.")
    common.add_argument("--flat", help="Comma separated elements of a cyclic flat.")
    common.add_argument("--json", dest="json_path", help="Also write the JSON report to this path.")
    common.add_argument("--cap", type=int, help="Largest dim B for the operator model (default SCHUR_DIM_CAP).")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")

    parser = argparse.ArgumentParser(prog="schur", description="Schur algebras of weighted matroids.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    json_path = Path(args.json_path) if args.json_path else None
    if args.command == "selftest":
        return JobSpec(command="selftest", matroid=None, json_path=json_path)
    if not args.matroid:
        raise InputError(f"The '{args.command}' command needs --matroid.")
    m = parsing.parse_matroid(args.matroid)
    return JobSpec(
        command=args.command,
        matroid=m,
        weights=parsing.parse_weights(args.weights, m.n),
        primes=parsing.parse_primes(args.prime),
        flat=parsing.parse_flat(args.flat, m),
        json_path=json_path,
        cap=args.cap,
    )


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    setup_logging(level_from_verbosity(args.verbose, get_settings().log_level))

    try:
        job = job_from_args(args)
        report = HANDLERS[args.command](job)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchurError as exc:
        log.exception("[run] %s failed", args.command)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAILED

    print(render_text(report))
    if job.output_format == "json":
        job.json_path.write_text(report.to_json() + "\n", encoding="utf-8")
        log.info("[run] wrote %s", job.json_path)
    return EXIT_OK if report.passed else EXIT_FAILED
