# tests/test_xalg.py
from fractions import Fraction

import numpy as np
import pytest
from sympy import QQ

from services import xalg
from services.errors import NotPrime, NotSquare, ShapeMismatch


def test_fields():
    assert xalg.field_for(None) == QQ
    assert xalg.characteristic(xalg.field_for(5)) == 5
    with pytest.raises(NotPrime):
        xalg.field_for(4)


def test_fraction_lands_in_gf_p():
    K = xalg.field_for(3)
    assert xalg.to_number(xalg.to_field(Fraction(1, 2), K), K) == 2
    assert xalg.to_number(xalg.to_field(-1, K), K) == 2


def test_rank_depends_on_characteristic():
    rows = [[2, 0], [0, 1]]
    assert xalg.rank_of(xalg.matrix(rows, QQ)) == 2
    assert xalg.rank_of(xalg.matrix(rows, xalg.field_for(2))) == 1
    assert xalg.rank_of(xalg.zeros(0, 3, QQ)) == 0


def test_kernel_basis():
    A = xalg.matrix([[1, 1, 1]], QQ)
    K = xalg.kernel_basis(A)
    assert K.shape == (3, 2)
    assert xalg.is_zero(xalg.mul(A, K))
    assert xalg.kernel_basis(xalg.zeros(0, 2, QQ)).shape == (2, 2)
    assert xalg.kernel_basis(xalg.matrix([[1, 0], [0, 1]], QQ)).shape == (2, 0)


def test_determinant():
    assert xalg.determinant(xalg.matrix([[2, 1], [1, 2]], QQ)) == 3
    assert xalg.determinant(xalg.zeros(0, 0, QQ)) == 1
    assert xalg.determinant(xalg.matrix([[Fraction(1, 2), 0], [0, 4]], QQ)) == 2
    with pytest.raises(NotSquare):
        xalg.determinant(xalg.matrix([[1, 2, 3], [4, 5, 6]], QQ))


def test_spans():
    A = xalg.from_columns([[1, 0, 0], [0, 1, 0]], QQ, 3)
    B = xalg.from_columns([[1, 1, 0], [1, -1, 0]], QQ, 3)
    C = xalg.from_columns([[0, 0, 1]], QQ, 3)
    assert xalg.same_span(A, B)
    assert not xalg.span_contains(A, C)
    assert xalg.span_contains(A, xalg.zeros(3, 0, QQ))


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        xalg.mul(xalg.identity(2, QQ), xalg.identity(3, QQ))


def test_integer_kernel_is_saturated():
    rows = [[2, 4, 6], [1, 1, 1]]
    basis = xalg.integer_kernel_saturated(rows)
    assert basis.shape == (3, 1)
    assert not np.any(np.array(rows, dtype=object) @ basis)
    assert xalg.is_saturated(basis)
    assert not xalg.is_saturated(np.array([[2], [0]], dtype=object))


def test_integer_kernel_of_empty_system():
    basis = xalg.integer_kernel_saturated([], ncols=3)
    assert basis.shape == (3, 3)
    assert xalg.is_saturated(basis)


def test_valuation():
    assert xalg.valuation(2, 12) == 2
    assert xalg.valuation(3, Fraction(1, 9)) == -2
    assert xalg.valuation(5, -7) == 0
    with pytest.raises(ValueError):
        xalg.valuation(2, 0)


def test_span_dimension_and_centralizer():
    e12 = xalg.matrix([[0, 1], [0, 0]], QQ)
    e21 = xalg.matrix([[0, 0], [1, 0]], QQ)
    assert xalg.span_dimension([e12]) == 1
    assert xalg.span_dimension([e12], closed_under_product=True) == 2
    assert xalg.span_dimension([e12, e21], closed_under_product=True) == 4
    assert xalg.centralizer_dimension([e12]) == 2
    assert xalg.centralizer_dimension([e12, e21]) == 1
    assert xalg.centralizer_dimension([], size=3) == 9


# ------------------------- seeded random matrices -------------------------
def _random_rows(rng, m, n, low=-3, high=3):
    rows = rng.integers(low, high + 1, size=(m, n)).tolist()
    if m >= 2:
        rows.append([x + y for x, y in zip(rows[0], rows[1])])
    return rows


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("p", [None, 3])
def test_rank_plus_kernel_width_is_column_count(seed, p):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 5)), int(rng.integers(1, 7))
    A = xalg.matrix(_random_rows(rng, m, n), xalg.field_for(p))
    K = xalg.kernel_basis(A)
    assert xalg.rank_of(A) + K.shape[1] == n
    assert xalg.is_zero(xalg.mul(A, K))


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("p", [None, 5])
def test_determinant_is_multiplicative_and_transpose_invariant(seed, p):
    rng = np.random.default_rng(100 + seed)
    F = xalg.field_for(p)
    A = xalg.matrix(rng.integers(-4, 5, size=(4, 4)).tolist(), F)
    B = xalg.matrix(rng.integers(-4, 5, size=(4, 4)).tolist(), F)
    det_a, det_b = xalg.determinant(A), xalg.determinant(B)
    product = det_a * det_b if p is None else det_a * det_b % p
    assert xalg.determinant(xalg.mul(A, B)) == product
    assert xalg.determinant(A.transpose()) == det_a


@pytest.mark.parametrize("seed", range(6))
def test_rank_mod_p_matches_rationals_away_from_elementary_divisors(seed):
    from sympy import ZZ
    from sympy.polys.matrices.normalforms import invariant_factors

    rng = np.random.default_rng(200 + seed)
    rows = _random_rows(rng, 3, 4, low=-6, high=6)
    rational = xalg.rank_of(xalg.matrix(rows, QQ))
    divisors = [int(f) for f in invariant_factors(xalg.matrix(rows, ZZ)) if f]
    assert len(divisors) == rational
    for p in (2, 3, 5, 7, 11, 13):
        modular = xalg.rank_of(xalg.matrix(rows, xalg.field_for(p)))
        if all(d % p for d in divisors):
            assert modular == rational
        else:
            assert modular < rational


@pytest.mark.parametrize("seed", range(4))
def test_algebra_dimension_ignores_generator_order(seed):
    rng = np.random.default_rng(300 + seed)
    gens = [xalg.matrix(rng.integers(0, 2, size=(3, 3)).tolist(), QQ) for _ in range(3)]
    gens.append(xalg.matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]], QQ))
    expected = xalg.span_dimension(gens, closed_under_product=True)
    for _ in range(3):
        shuffled = [gens[i] for i in rng.permutation(len(gens))]
        assert xalg.span_dimension(shuffled, closed_under_product=True) == expected


def test_integer_kernel_of_a_single_row():
    basis = xalg.integer_kernel_saturated([[2, -2]])
    assert basis.shape == (2, 1)
    assert basis[0, 0] == basis[1, 0]
    assert abs(basis[0, 0]) == 1
