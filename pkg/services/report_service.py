# services/report_service.py
"""
Check verdicts and the serializable Report.

JSON output uses sorted keys; every rational is written as a "num/den" string
and read back as a Fraction, so parse(emit(report)) == report.
"""
from __future__ import annotations
import json
import logging
import re
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from services.log_service import log_check

log = logging.getLogger(__name__)

_RATIONAL = re.compile(r"^-?\d+/\d+$")
MAX_VIOLATIONS = 25


# ------------------------- verdicts -------------------------
@dataclass
class CheckResult:
    name: str
    passed: bool
    instances: int
    violations: List[str] = dc_field(default_factory=list)
    failures: Optional[int] = None  # every failure; violations keeps at most MAX_VIOLATIONS

    def __post_init__(self):
        if self.failures is None:
            self.failures = len(self.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "instances": self.instances, "failures": self.failures,
                "violations": list(self.violations)}

    @classmethod
    def from_dict(cls, name: str, data: Dict[str, Any]) -> "CheckResult":
        return cls(name=name, passed=bool(data["passed"]), instances=int(data["instances"]),
                   violations=list(data.get("violations", [])), failures=data.get("failures"))


class Tally:
    """Accumulates instances of one check; only the first violations are kept."""

    def __init__(self, name: str):
        self.name = name
        self.instances = 0
        self.failures = 0
        self.violations: List[str] = []

    def check(self, ok: bool, message) -> bool:
        self.instances += 1
        if not ok:
            self.failures += 1
            if len(self.violations) < MAX_VIOLATIONS:
                self.violations.append(message() if callable(message) else str(message))
        return ok

    def result(self) -> CheckResult:
        res = CheckResult(self.name, self.failures == 0, self.instances, self.violations, self.failures)
        log_check(res)
        return res


def all_passed(results: List[CheckResult]) -> bool:
    return all(r.passed for r in results)


# ------------------------- rationals -------------------------
def fraction_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _decode(value: Any) -> Any:
    if isinstance(value, str) and _RATIONAL.match(value):
        num, den = value.split("/")
        return Fraction(int(num), int(den))
    if isinstance(value, dict):
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


# ------------------------- report -------------------------
@dataclass
class Report:
    matroid: str
    weights: List[int]
    field: str = "Q"
    p: Optional[int] = None
    flats: List[List[int]] = dc_field(default_factory=list)
    standard_characters: Dict[str, Dict[str, int]] = dc_field(default_factory=dict)
    simple_characters: Dict[str, Dict[str, Dict[str, int]]] = dc_field(default_factory=dict)
    decomposition: List[Dict[str, Any]] = dc_field(default_factory=list)
    bad_primes: List[int] = dc_field(default_factory=list)
    determinants: List[Dict[str, Any]] = dc_field(default_factory=list)
    identities: Dict[str, Dict[str, Any]] = dc_field(default_factory=dict)
    axioms: Dict[str, Dict[str, Any]] = dc_field(default_factory=dict)
    extra: Dict[str, Any] = dc_field(default_factory=dict)

    def add_checks(self, section: str, results: List[CheckResult]) -> None:
        target = self.identities if section == "identities" else self.axioms
        for r in results:
            target[r.name] = r.to_dict()

    def checks(self) -> List[CheckResult]:
        out = [CheckResult.from_dict(k, v) for k, v in sorted(self.identities.items())]
        out += [CheckResult.from_dict(k, v) for k, v in sorted(self.axioms.items())]
        return out

    @property
    def passed(self) -> bool:
        return all_passed(self.checks())

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if data["p"] is None:
            del data["p"]
        if not data["extra"]:
            del data["extra"]
        return _encode(data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        return cls(**_decode(data))

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


# ------------------------- text -------------------------
def _fmt_char(char: Dict[str, int]) -> str:
    if not char:
        return "0"
    return " + ".join(f"{c}·e{k}" for k, c in char.items())


def render_text(report: Report) -> str:
    lines = [f"matroid: {report.matroid}", f"weights: {','.join(map(str, report.weights))}"]
    lines.append(f"field: {report.field}" + (f" (p={report.p})" if report.p is not None else ""))
    if report.flats:
        lines.append("cyclic flats: " + " ".join("{" + ",".join(map(str, f)) + "}" for f in report.flats))
    for key, value in sorted(report.extra.items()):
        lines.append(f"{key}: {_encode(value)}")
    if report.standard_characters:
        lines.append("standard characters:")
        for e, char in report.standard_characters.items():
            lines.append(f"  ch Δ({e}) = {_fmt_char(char)}")
    for p, table in sorted(report.simple_characters.items(), key=lambda kv: int(kv[0])):
        lines.append(f"simple characters (p={p}):")
        for e, char in table.items():
            lines.append(f"  ch L({e}) = {_fmt_char(char)}")
    if report.decomposition:
        lines.append("decomposition numbers [Δ(col):L(row)] (off-diagonal, nonzero):")
        for entry in report.decomposition:
            lines.append(f"  p={entry['p']} [Δ({entry['col']}):L({entry['row']})] = {entry['value']}")
    if report.bad_primes or "semisimple" in report.extra:
        lines.append("bad primes: " + (", ".join(map(str, report.bad_primes)) or "none"))
    for det in report.determinants:
        lines.append(
            f"det {det['minor']}: gram={_encode(det['gram_det'])} predicted={_encode(det['predicted'])}"
        )
        for fac in det.get("factors", []):
            lines.append(f"    flat {fac['flat']}: ({fac['base']})^{fac['exponent']}")
    for title, section in (("identities", report.identities), ("axioms", report.axioms)):
        for name, res in sorted(section.items()):
            verdict = "pass" if res["passed"] else "FAIL"
            lines.append(f"[{title}] {name}: {verdict} ({res['instances']} instances)")
            for v in res["violations"][:5]:
                lines.append(f"    - {v}")
    return "\n".join(lines)
