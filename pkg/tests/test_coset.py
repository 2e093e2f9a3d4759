import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonsums.coset import (
    check_factorization,
    factor_input_coset,
    factor_output_coset,
    removed_elements,
    strip_elements,
)
from photonsums.linalg import ModeRotation, compose, haar_unitary, is_unitary
from photonsums.rates import PhotonConfig
from photonsums.sumrules import SumSpec, sum_over_inputs, sum_over_outputs

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), seeds, st.sampled_from(["output", "input"]))
def test_factorization_properties(n, seed, side):
    u = haar_unitary(n, seed)
    f = factor_output_coset(u) if side == "output" else factor_input_coset(u)
    rep = check_factorization(f, u)
    assert rep["reconstruction_error"] < 1e-12
    assert rep["max_eliminated"] < 1e-12
    assert rep["hessenberg"]
    assert not rep["touches_last_mode"]
    assert is_unitary(f.coset)
    assert f.removed_parameter_count == (n - 1) ** 2 - 1
    # surviving superdiagonal entries of the last column are real and >= 0
    tail = f.coset[:, -1] if side == "output" else f.coset[-1, :]
    assert abs(tail[-2].imag) < 1e-12 and tail[-2].real >= -1e-12


def test_n4_zero_pattern():
    f = factor_output_coset(haar_unitary(4, 11))
    assert f.eliminated_entries() == [(1, 3), (1, 4), (2, 4)]
    assert len(f.rotations) == 3
    assert factor_input_coset(haar_unitary(4, 11)).eliminated_entries() == [(3, 1), (4, 1), (4, 2)]


def test_identity_needs_no_mixing():
    f = factor_output_coset(np.eye(4))
    assert np.allclose(f.coset, np.eye(4))
    assert np.allclose(f.subgroup_matrix(), np.eye(4))


def test_swap_zero_row():
    u = haar_unitary(3, 5)
    f = factor_output_coset(u, swap_zero_row=True)
    rep = check_factorization(f, u)
    assert rep["reconstruction_error"] < 1e-12
    assert abs(f.coset[1, 2]) < 1e-12 and abs(f.coset[0, 2]) > 1e-6
    assert not rep["hessenberg"]


def test_nonunitary_warns_but_factorizes():
    u = 1.5 * haar_unitary(3, 1)
    with pytest.warns(UserWarning):
        f = factor_output_coset(u)
    assert f.nonunitary
    assert np.allclose(f.reconstruct(), u)


def test_rejects_tiny_and_ragged():
    with pytest.raises(ValueError):
        factor_output_coset(np.eye(1))
    with pytest.raises(ValueError):
        factor_output_coset(np.ones((2, 3)))


def _netlist(n, seed, count=10):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        i = int(rng.integers(1, n))
        out.append(ModeRotation(i, i + 1, *rng.uniform(-3, 3, 3)))
    return out


def test_removed_elements_output_side():
    n = 4
    net = [ModeRotation(1, 2, 0.1, 0.7, 0.2), ModeRotation(3, 4, 0.3, 1.2, -0.5),
           ModeRotation(2, 3, 0.4, 0.9, 1.1)] + _netlist(n, 2)
    u = compose(net, n)
    f = factor_output_coset(u)
    removed = removed_elements(f, net)
    assert removed[0] is net[0]
    assert net[1] not in removed
    stripped = compose(strip_elements(net, removed), n)
    inp = PhotonConfig([2, 3, 4])
    spec = SumSpec("output", n, 3)
    a = sum_over_outputs(u, inp, spec).sum_full
    b = sum_over_outputs(stripped, inp, spec).sum_full
    assert abs(a - b) < 1e-12


def test_removed_elements_input_side():
    n = 4
    net = _netlist(n, 3) + [ModeRotation(2, 3, 0.5, 1.0, 0.1), ModeRotation(1, 2, 0.2, 2.0, 0.3)]
    u = compose(net, n)
    f = factor_input_coset(u)
    removed = removed_elements(f, net)
    assert removed[-1] is net[-1]
    stripped = compose(strip_elements(net, removed), n)
    out = PhotonConfig([2, 3, 4])
    spec = SumSpec("input", n, 3)
    assert abs(sum_over_inputs(u, out, spec).sum_full
               - sum_over_inputs(stripped, out, spec).sum_full) < 1e-12


def test_removed_elements_mismatch():
    f = factor_output_coset(haar_unitary(3, 0))
    with pytest.raises(ValueError):
        removed_elements(f, _netlist(3, 1))
