# services/errors.py
from __future__ import annotations
from typing import Optional, Tuple


class SchurError(Exception):
    """Base class for everything this package raises on purpose."""


class InputError(SchurError, ValueError):
    """Bad user input: matroid data, weights, primes, flats, CLI arguments."""


class InconsistentSystem(SchurError):
    """An internal contradiction (a bug, not an input problem)."""


# ------------------------- matroid -------------------------
class EmptyBasisList(InputError):
    pass


class EqualCardinalityViolation(InputError):
    pass


class ExchangeViolation(InputError):
    def __init__(self, b1: int, b2: int, x: int):
        self.witness = (b1, b2, x)
        super().__init__(
            f"Basis exchange fails for B1={_fmt(b1)}, B2={_fmt(b2)}, x={x}: "
            f"no y in B2\\B1 makes B1-x+y a basis."
        )


class VertexOutOfRange(InputError):
    pass


class RankOutOfRange(InputError):
    pass


class MinorNotNested(InputError):
    pass


class NotABasis(InputError):
    pass


class EmptyGroundSet(InputError):
    pass


# ------------------------- exterior / linear algebra -------------------------
class OverlappingSets(InputError):
    pass


class InhomogeneousInput(InputError):
    pass


class NotSquare(InputError):
    pass


class ShapeMismatch(InputError):
    pass


# ------------------------- schur -------------------------
class WeightNotUnit(InputError):
    def __init__(self, p: int, i: int, value: int):
        self.p, self.i = p, i
        super().__init__(f"Weight a({i}) = {value} is divisible by p = {p}; weights must be units mod p.")


class FlatNotInPoset(InputError):
    pass


class ZeroWeightSum(InputError):
    def __init__(self, e: int, f: int):
        self.pair = (e, f)
        super().__init__(
            f"The weights sum to zero over {_fmt(f & ~e)}, the connected minor between {_fmt(e)} and {_fmt(f)}; "
            f"every prime divides it."
        )


class NonIntegerWeights(InputError):
    pass


class DimensionTooLarge(InputError):
    pass


# ------------------------- cli -------------------------
class NotPrime(InputError):
    pass


class SchemaError(InputError):
    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _fmt(mask: int) -> str:
    elems: Tuple[int, ...] = tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
    return "{" + ",".join(map(str, elems)) + "}"
