# tests/test_identities.py
import pytest

from services import identities
from services import matroid as mat


def _failures(results):
    return [(r.name, r.violations[:2]) for r in results if not r.passed]


def test_random_weights_are_nonzero_and_seeded():
    a = identities.random_weights(identities.make_rng(3), 50)
    assert len(a) == 50
    assert all(v != 0 and -5 <= v <= 5 for v in a)
    assert a == identities.random_weights(identities.make_rng(3), 50)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exterior_suite_exhaustive(n):
    results = identities.exterior_suite(n)
    assert not _failures(results)
    assert len(results) == 6
    assert all(r.instances > 0 for r in results)


def test_exterior_suite_with_given_weights():
    assert not _failures(identities.exterior_suite(3, a=[2, -1, 3]))


def test_exterior_suite_randomized():
    results = identities.exterior_suite(7, samples=25, seed=11)
    assert not _failures(results)
    assert results[0].instances == 50


@pytest.mark.slow
def test_exterior_suite_five_elements():
    assert not _failures(identities.exterior_suite(5))


def test_matroid_exterior_suite(small_library):
    for m in small_library:
        assert not _failures(identities.matroid_exterior_suite(m)), m


def test_matroid_exterior_suite_split_flats(k4):
    # a direct sum of two parallel pairs splits across a flat in both orders
    s = mat.direct_sum(mat.uniform(1, 2), mat.uniform(1, 2))
    assert not _failures(identities.matroid_exterior_suite(s, a=[1, 2, 3, 4]))
    assert not _failures(identities.matroid_exterior_suite(k4, seed=5))


def test_matroid_suite(small_library, k4):
    for m in [*small_library, k4]:
        assert not _failures(identities.matroid_suite(m, samples=30)), m
