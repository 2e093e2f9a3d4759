from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonsums.linalg import haar_unitary
from photonsums.matfun import permanent_naive
from photonsums.rates import (
    DelaySpec,
    PhotonConfig,
    rate,
    rate_indistinguishable,
    rate_oracle,
    rate_three_photon_partial,
    rate_two_photon,
    scattering_submatrix,
    three_photon_amplitudes,
)
from photonsums.sumrules import enumerate_all

BS = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
seeds = st.integers(0, 2**32 - 1)


def test_photon_config():
    cfg = PhotonConfig([3, 1, 3])
    assert cfg.multiplicities == {1: 1, 3: 2}
    assert cfg.c_factor == Fraction(1, 2)
    assert not cfg.distinct
    assert cfg.sorted().modes == (1, 3, 3)
    with pytest.raises(ValueError):
        PhotonConfig([0, 1])


def test_delay_spec_validation():
    with pytest.raises(ValueError):
        DelaySpec([0, 1], s=0)
    with pytest.raises(ValueError):
        DelaySpec([0, float("inf")])
    d = DelaySpec([0, 0, 2], s=0.5)
    assert not d.all_equal
    assert d.pair_visibility(0, 2) == pytest.approx(np.exp(-1.0))


def test_submatrix_rows_are_outputs():
    u = haar_unitary(4, 0)
    sub = scattering_submatrix(u, PhotonConfig([2, 3]), PhotonConfig([1, 1]))
    assert np.allclose(sub, [[u[0, 1], u[0, 2]], [u[0, 1], u[0, 2]]])
    with pytest.raises(ValueError):
        scattering_submatrix(u, PhotonConfig([1]), PhotonConfig([1, 2]))
    with pytest.raises(IndexError):
        scattering_submatrix(u, PhotonConfig([1, 5]), PhotonConfig([1, 2]))


@pytest.mark.parametrize("tau, expected", [(0.0, 0.0), (50.0, 0.5)])
def test_hom_dip(tau, expected):
    r = rate(BS, PhotonConfig([1, 2]), PhotonConfig([1, 2]), DelaySpec([0, tau]))
    assert r.value == pytest.approx(expected, abs=1e-12)


def test_hom_bunching():
    r = rate(BS, PhotonConfig([1, 2]), PhotonConfig([1, 1]))
    assert r.value == pytest.approx(0.5)


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(-3, 3), st.floats(0.2, 3))
def test_two_photon_matches_oracle(seed, tau, s):
    u = haar_unitary(4, seed)
    d = DelaySpec([0.0, tau], s)
    for out in ([1, 3], [2, 2]):
        inp, o = PhotonConfig([1, 4]), PhotonConfig(out)
        assert rate_two_photon(u, inp, o, d).value == pytest.approx(
            rate_oracle(u, inp, o, d), abs=1e-12
        )


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(0.1, 3), st.integers(0, 2))
def test_three_photon_matches_oracle(seed, dt, odd):
    u = haar_unitary(4, seed)
    taus = [0.0, 0.0, 0.0]
    taus[odd] = dt
    d = DelaySpec(taus)
    inp = PhotonConfig([1, 2, 4])
    for out in ([1, 2, 3], [2, 2, 4], [1, 4, 4], [3, 3, 3]):
        o = PhotonConfig(out)
        assert rate_three_photon_partial(u, inp, o, d).value == pytest.approx(
            rate_oracle(u, inp, o, d), abs=1e-12
        )


def test_three_photon_amplitudes_sum_to_permanent():
    sub = haar_unitary(3, 7)
    a, b, c = three_photon_amplitudes(sub)
    assert a + b + c == pytest.approx(permanent_naive(sub))


def test_three_photon_fallback_notice():
    u = haar_unitary(3, 1)
    with pytest.warns(UserWarning):
        r = rate_three_photon_partial(u, PhotonConfig([1, 2, 3]), PhotonConfig([1, 2, 3]),
                                      DelaySpec([0, 1, 2]))
    assert r.method == "oracle" and r.notice


@pytest.mark.parametrize("method", ["naive", "ryser", "auto"])
def test_indistinguishable_methods(method):
    u = haar_unitary(3, 2)
    inp, out = PhotonConfig([1, 1, 2]), PhotonConfig([2, 3, 3])
    expected = rate_oracle(u, inp, out, DelaySpec.coincident(3))
    assert rate_indistinguishable(u, inp, out, method=method).value == pytest.approx(expected)


@pytest.mark.parametrize("taus", [[0, 0, 0], [0, 0.4, 0.4], [0, 0.5, 1.7], [0, 9, 20]])
def test_total_probability(taus):
    u = haar_unitary(3, 4)
    inp = PhotonConfig([1, 1, 3])
    d = DelaySpec(taus)
    total = sum(rate(u, inp, out, d).value for out in enumerate_all(3, 3))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_negative_rounding_is_clamped():
    # a perfectly suppressed process can round slightly below zero
    r = rate(BS, PhotonConfig([1, 2]), PhotonConfig([1, 2]))
    assert r.value >= 0.0


def test_delay_count_mismatch():
    with pytest.raises(ValueError):
        rate(BS, PhotonConfig([1, 2]), PhotonConfig([1, 2]), DelaySpec([0, 0, 0]))
