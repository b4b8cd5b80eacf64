# tests/test_matroid.py
import pytest

from services import matroid as mat
from services.errors import (
    EmptyBasisList,
    EmptyGroundSet,
    EqualCardinalityViolation,
    ExchangeViolation,
    MinorNotNested,
    NotABasis,
    RankOutOfRange,
    VertexOutOfRange,
)
from services.matroid import TuttePoly, mask_of

TRIANGLES = (mask_of([0, 1, 3]), mask_of([0, 2, 4]), mask_of([1, 2, 5]), mask_of([3, 4, 5]))


def test_bit_helpers():
    assert mat.elements(0b10110) == [1, 2, 4]
    assert mat.mask_of([4, 1, 2]) == 0b10110
    assert sorted(mat.submasks(0b101)) == [0, 1, 4, 5]
    assert mat.fmt_set(0) == "{}"
    assert mat.fmt_set(0b101) == "{0,2}"


def test_uniform_basics(u24):
    assert len(u24.bases) == 6
    assert u24.r == 2
    assert mat.rank(u24, [0, 1, 2]) == 2
    assert mat.is_independent(u24, [1, 3])
    assert mat.is_basis(u24, [0, 3])
    assert not mat.is_basis(u24, [0])


def test_from_bases_rejects_bad_input():
    with pytest.raises(EmptyBasisList):
        mat.from_bases(3, [])
    with pytest.raises(EqualCardinalityViolation):
        mat.from_bases(3, [[0], [1, 2]])
    with pytest.raises(ExchangeViolation) as info:
        mat.from_bases(4, [[0, 1], [2, 3]])
    b1, b2, x = info.value.witness
    assert {b1, b2} == {0b0011, 0b1100}
    assert b1 >> x & 1


def test_from_graph_k4(k4):
    assert k4.n == 6
    assert k4.r == 3
    assert len(k4.bases) == 16
    with pytest.raises(VertexOutOfRange):
        mat.from_graph(3, [(0, 1), (1, 3)])


def test_uniform_rank_range():
    with pytest.raises(RankOutOfRange):
        mat.uniform(4, 3)


def test_dual_and_direct_sum():
    assert mat.dual(mat.uniform(1, 3)) == mat.uniform(2, 3)
    assert mat.dual(mat.dual(mat.uniform(2, 5))) == mat.uniform(2, 5)
    s = mat.direct_sum(mat.uniform(1, 2), mat.uniform(1, 2))
    assert s.n == 4 and len(s.bases) == 4
    assert mat.components(s) == [0b0011, 0b1100]
    assert not mat.is_connected(s)


def test_minor_relabels_and_keeps_ambient_labels(k4):
    mm = mat.minor(k4, mask_of([0]), TRIANGLES[0])
    assert mm.n == 2
    assert mm.ground == (1, 3)
    assert mm == mat.uniform(1, 2)
    assert mm.to_ambient(0b11) == mask_of([1, 3])
    assert mm.from_ambient(mask_of([3])) == 0b10
    with pytest.raises(MinorNotNested):
        mat.minor(k4, mask_of([5]), TRIANGLES[0])


def test_closure_and_flats(k4):
    assert mat.closure(k4, [0, 1]) == TRIANGLES[0]
    assert mat.closure(k4, [0, 5]) == mask_of([0, 5])
    # flats of K4 are the set partitions of its four vertices
    assert len(mat.flats(k4)) == 15


def test_cyclic_flats(k4):
    cf = mat.cyclic_flats(k4)
    assert set(cf) == {0, k4.full, *TRIANGLES}
    assert cf.one == 0 and cf.zero == k4.full
    assert set(mat.cyclic_flats(mat.uniform(1, 5))) == {0, 0b11111}
    # the empty flat under all six, each triangle under itself and I, I under itself
    assert len(cf.nested_pairs()) == 6 + 4 * 2 + 1
    assert sorted(cf.supersets(TRIANGLES[0])) == sorted([TRIANGLES[0], k4.full])


def test_loops_coloops_and_circuits(k4, u24):
    assert mat.coloops(mat.uniform(3, 3)) == 0b111
    assert mat.loops(mat.uniform(0, 2)) == 0b11
    assert mat.loops(k4) == 0 and mat.coloops(k4) == 0
    assert len(mat.circuits(u24)) == 4
    assert all(mat.popcount(c) == 3 for c in mat.circuits(u24))
    assert set(mat.circuits(k4)) >= set(TRIANGLES)
    assert len(mat.circuits(k4)) == 7


def test_tutte_k4(k4):
    expected = TuttePoly({(3, 0): 1, (2, 0): 3, (1, 0): 2, (1, 1): 4, (0, 1): 2, (0, 2): 3, (0, 3): 1})
    assert mat.tutte(k4) == expected
    assert mat.tutte_deletion_contraction(k4) == expected
    assert mat.beta(k4) == 2
    assert mat.mu_plus(k4) == 6
    assert mat.mu_plus_dual(k4) == 6
    assert mat.passive_counts(k4) == (6, 6)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_single_element_bases_invariants(n):
    m = mat.uniform(1, n)
    expected = TuttePoly({(1, 0): 1, **{(0, j): 1 for j in range(1, n)}})
    assert mat.tutte(m) == expected
    assert mat.beta(m) == 1
    assert mat.mu_plus(m) == 1
    assert mat.mu_plus_dual(m) == n - 1
    assert mat.tutte(mat.dual(m)) == expected.swapped()


def test_tutte_u24_matches_oracle(u24):
    expected = TuttePoly({(2, 0): 1, (1, 0): 2, (0, 1): 2, (0, 2): 1})
    assert mat.tutte(u24) == expected
    assert mat.tutte_deletion_contraction(u24) == expected
    assert mat.tutte(u24)(1, 1) == 6


def test_empty_matroid_conventions():
    empty = mat.uniform(0, 0)
    assert mat.tutte(empty) == TuttePoly.one()
    assert mat.beta(empty) == 0
    assert mat.mu_plus(empty) == 1
    with pytest.raises(EmptyGroundSet):
        mat.is_connected(empty)


def test_activities(u24):
    rec = mat.activities(u24, [0, 1])
    assert rec.internally_active == 0b11
    assert rec.externally_active == 0
    rec = mat.activities(u24, [2, 3])
    assert rec.internally_active == 0
    assert rec.externally_active == 0b11
    with pytest.raises(NotABasis):
        mat.activities(u24, [0, 1, 2])


def test_connectivity(k4, u24):
    assert mat.is_connected(k4)
    assert mat.is_connected(u24)
    assert mat.is_connected(mat.uniform(1, 1))
    assert not mat.is_connected(mat.uniform(2, 2))
