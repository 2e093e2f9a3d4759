import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonsums.characters import Partition, partitions
from photonsums.linalg import random_upper_hessenberg
from photonsums.matfun import (
    conjugate_immanant_defects,
    determinant,
    determinant_naive,
    gray_code_flips,
    immanant,
    is_lower_hessenberg,
    is_upper_hessenberg,
    permanent,
    permanent_hessenberg,
    permanent_naive,
    permanent_ryser,
    rel_close,
    t_map,
)

from conftest import random_complex

seeds = st.integers(0, 2**32 - 1)


def test_small_permanents():
    assert permanent_naive([[1, 2], [3, 4]]) == 10
    assert permanent_ryser([[1, 2], [3, 4]]) == pytest.approx(10)
    assert permanent_ryser(np.ones((5, 5))) == pytest.approx(120)
    assert permanent_ryser([[7]]) == 7


def test_gray_code_visits_every_subset():
    flips = gray_code_flips(5)
    state, seen = 0, {0}
    for f in flips:
        state ^= 1 << int(f)
        seen.add(state)
    assert len(flips) == 31 and len(seen) == 32


@settings(max_examples=30)
@given(st.integers(1, 7), seeds)
def test_ryser_matches_naive(n, seed):
    m = random_complex(np.random.default_rng(seed), n)
    assert rel_close(permanent_ryser(m), permanent_naive(m), 1e-10)


@settings(max_examples=30)
@given(st.integers(2, 6), seeds)
def test_row_permutation_invariance(n, seed):
    rng = np.random.default_rng(seed)
    m = random_complex(rng, n)
    p = rng.permutation(n)
    assert rel_close(permanent_ryser(m[p]), permanent_ryser(m), 1e-10)
    assert rel_close(permanent_ryser(m[:, p]), permanent_ryser(m), 1e-10)
    sign = round(np.linalg.det(np.eye(n)[p]).real)
    assert rel_close(determinant(m[p]), sign * determinant(m), 1e-10)


@settings(max_examples=20)
@given(st.integers(1, 6), seeds)
def test_naive_determinant_matches_lapack(n, seed):
    m = random_complex(np.random.default_rng(seed), n)
    assert rel_close(determinant_naive(m), determinant(m), 1e-10)


@pytest.mark.parametrize("n", range(1, 6))
def test_extreme_immanants(n, rng):
    m = random_complex(rng, n)
    assert immanant(m, Partition(n)) == pytest.approx(permanent_naive(m))
    assert immanant(m, Partition(*[1] * n)) == pytest.approx(determinant(m))


def test_immanant_of_identity_is_dimension():
    for lam in partitions(5):
        assert immanant(np.eye(5), lam) == pytest.approx(
            {(5,): 1, (4, 1): 4, (3, 2): 5, (3, 1, 1): 6, (2, 2, 1): 5,
             (2, 1, 1, 1): 4, (1, 1, 1, 1, 1): 1}[lam.parts]
        )


def test_immanant_size_mismatch():
    with pytest.raises(ValueError):
        immanant(np.eye(3), Partition(2, 1, 1))


def test_hessenberg_predicates():
    h = random_upper_hessenberg(5, 0)
    assert is_upper_hessenberg(h) and not is_lower_hessenberg(h)
    assert is_lower_hessenberg(h.T)
    assert not is_upper_hessenberg(np.ones((4, 4)))


@given(seeds)
def test_t_map_involution(seed):
    h = random_upper_hessenberg(5, seed)
    assert np.array_equal(t_map(t_map(h)), h)


@settings(max_examples=30)
@given(st.integers(1, 8), seeds)
def test_hessenberg_permanent_is_determinant(n, seed):
    h = random_upper_hessenberg(n, seed)
    assert rel_close(permanent_hessenberg(h), permanent_naive(h), 1e-9)
    assert rel_close(permanent_hessenberg(h.T), permanent_naive(h), 1e-9)


def test_hessenberg_route_rejects_full():
    with pytest.raises(ValueError):
        permanent_hessenberg(np.ones((4, 4)))


def test_auto_route():
    h = random_upper_hessenberg(12, 3)
    assert rel_close(permanent(h), permanent_ryser(h), 1e-9)
    assert rel_close(permanent(np.ones((4, 4))), 24, 1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_conjugate_immanants_swap_under_t(n):
    h = random_upper_hessenberg(n, n)
    assert max(conjugate_immanant_defects(h).values()) < 1e-10


def test_naive_limit():
    with pytest.raises(ValueError):
        permanent_naive(np.ones((10, 10)))
    with pytest.raises(ValueError):
        permanent_naive(np.ones((2, 3)))
