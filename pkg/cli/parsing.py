# cli/parsing.py
"""
Turn command-line text into validated inputs: matroids (built-in names or
JSON, from a file or inline), weight lists, primes and flats.

Built-in names:
  Mn:k    uniform(1, k), bases are the single elements
  Mn*:k   its dual, uniform(k-1, k)
  K4      cycle matroid of the complete graph on 4 vertices
  U:r,n   uniform(r, n)
"""
from __future__ import annotations
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Tuple

from sympy import isprime

from services import matroid as mat
from services.errors import InputError, NotPrime, SchemaError
from services.matroid import Matroid

log = logging.getLogger(__name__)

K4_EDGES: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
KINDS = ("bases", "graphic", "uniform", "dual")

_MN = re.compile(r"^Mn(\*)?:(\d+)$")
_U = re.compile(r"^U:(\d+),(\d+)$")


@dataclass
class JobSpec:
    command: str
    matroid: Optional[Matroid]
    weights: Optional[List[int]] = None
    primes: List[int] = field(default_factory=list)
    flat: Optional[int] = None
    json_path: Optional[Path] = None
    cap: Optional[int] = None

    @property
    def output_format(self) -> str:
        return "json" if self.json_path is not None else "text"


# ------------------------- matroids -------------------------
def builtin(name: str) -> Optional[Matroid]:
    """Resolve a built-in name, or None when the text is not one."""
    name = name.strip()
    if name == "K4":
        return mat.from_graph(4, K4_EDGES, name="K4")
    hit = _MN.match(name)
    if hit:
        n = int(hit.group(2))
        if n < 1:
            raise InputError(f"Mn needs at least one element, got {n}.")
        m = mat.uniform(1, n, name=f"M{n}")
        return mat.dual(m) if hit.group(1) else m
    hit = _U.match(name)
    if hit:
        return mat.uniform(int(hit.group(1)), int(hit.group(2)))
    return None


def _get(obj: dict, key: str, where: str, kind=int) -> Any:
    if key not in obj:
        raise SchemaError(f"missing required key '{key}'", where)
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"'{key}' must be an integer, got {value!r}", f"{where}.{key}")
    if kind is list and not isinstance(value, list):
        raise SchemaError(f"'{key}' must be a list, got {type(value).__name__}", f"{where}.{key}")
    if kind is dict and not isinstance(value, dict):
        raise SchemaError(f"'{key}' must be an object, got {type(value).__name__}", f"{where}.{key}")
    return value


def _int_list(items: Any, where: str) -> List[int]:
    if not isinstance(items, list):
        raise SchemaError(f"expected a list of integers, got {items!r}", where)
    for i, v in enumerate(items):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"expected an integer, got {v!r}", f"{where}[{i}]")
    return list(items)


def matroid_from_dict(obj: Any, where: str = "$") -> Matroid:
    """Build a matroid from the JSON object schema; 'dual' wraps recursively."""
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}", where)
    kind = obj.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"'kind' must be one of {', '.join(KINDS)}, got {kind!r}", f"{where}.kind")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("'name' must be a string", f"{where}.name")

    if kind == "bases":
        n = _get(obj, "n", where)
        raw = _get(obj, "bases", where, list)
        bases = [_int_list(b, f"{where}.bases[{i}]") for i, b in enumerate(raw)]
        for i, b in enumerate(bases):
            for j, x in enumerate(b):
                if not 0 <= x < n:
                    raise SchemaError(f"element {x} outside 0..{n - 1}", f"{where}.bases[{i}][{j}]")
        return mat.from_bases(n, bases, name=name)
    if kind == "graphic":
        vertices = _get(obj, "vertices", where)
        raw = _get(obj, "edges", where, list)
        edges = []
        for i, e in enumerate(raw):
            pair = _int_list(e, f"{where}.edges[{i}]")
            if len(pair) != 2:
                raise SchemaError(f"an edge has two endpoints, got {pair}", f"{where}.edges[{i}]")
            edges.append((pair[0], pair[1]))
        return mat.from_graph(vertices, edges, name=name)
    if kind == "uniform":
        return mat.uniform(_get(obj, "r", where), _get(obj, "n", where), name=name)
    inner = matroid_from_dict(_get(obj, "of", where, dict), f"{where}.of")
    out = mat.dual(inner)
    return Matroid(n=out.n, bases=out.bases, ground=out.ground, name=name) if name else out


def _loads(text: str, origin: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", f"{origin}:{exc.lineno}:{exc.colno}") from exc


def parse_matroid(source: str) -> Matroid:
    """Built-in name, inline JSON object, or path to a JSON file."""
    found = builtin(source)
    if found is not None:
        return found
    text = source.strip()
    if text.startswith("{"):
        return matroid_from_dict(_loads(text, "<inline>"))
    path = Path(source)
    if not path.is_file():
        raise InputError(f"'{source}' is neither a built-in matroid name nor a readable JSON file.")
    log.debug("[parse_matroid] reading %s", path)
    return matroid_from_dict(_loads(path.read_text(encoding="utf-8"), str(path)))


# ------------------------- scalars -------------------------
def _csv_ints(text: str, what: str) -> List[int]:
    out = []
    for pos, chunk in enumerate(text.split(","), start=1):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            out.append(int(chunk))
        except ValueError:
            raise SchemaError(f"{what} entry {chunk!r} is not an integer", f"{what}[{pos}]") from None
    return out


def parse_weights(text: Optional[str], n: int) -> Optional[List[int]]:
    if text is None:
        return None
    weights = _csv_ints(text, "weights")
    if len(weights) != n:
        raise InputError(f"Expected {n} weights, got {len(weights)}.")
    for i, v in enumerate(weights):
        if v == 0:
            raise InputError(f"Weight a({i}) is zero; weights must be nonzero.")
    return weights


def parse_prime(value: Any) -> int:
    try:
        p = int(value)
    except (TypeError, ValueError):
        raise NotPrime(f"{value!r} is not an integer, so not a prime.") from None
    if not isprime(p):
        raise NotPrime(f"{p} is not a prime.")
    return p


def parse_primes(values: Optional[List[Any]]) -> List[int]:
    return sorted({parse_prime(v) for v in values or []})


def parse_flat(text: Optional[str], m: Matroid) -> Optional[int]:
    """Comma separated elements; an empty string is the empty flat."""
    if text is None:
        return None
    elems = _csv_ints(text, "flat")
    for x in elems:
        if not 0 <= x < m.n:
            raise InputError(f"Flat element {x} is outside 0..{m.n - 1}.")
    return mat.mask_of(elems)
