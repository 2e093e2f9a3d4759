"""Factor a scattering matrix into a subgroup rotation and a Hessenberg coset.

Output side: ``U = R @ Ubar`` with ``R`` acting on modes ``1..n-1`` and
``Ubar`` upper Hessenberg (``Ubar[k, k+m] == 0`` for ``m >= 2``).
Input side: ``U = Utilde @ R`` with ``Utilde`` lower Hessenberg.

``R`` is built from two-mode rotations, one per eliminated entry, so every
elimination is directly an optical element. Elimination order: columns
``n`` down to ``3``; inside column ``j`` rows ``1..j-2`` top to bottom, each
using the row pair ``(i, i+1)``. Working downwards is what keeps earlier
zeros of the same column intact; the pair ``(j-2, j-1)`` is the lowest used,
so mode ``n`` is never touched.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .linalg import (
    ModeRotation,
    _require_square,
    compose,
    embed_rotation,
    unitarity_defect,
)
from .matfun import is_lower_hessenberg, is_upper_hessenberg

Side = Literal["output", "input"]

NONUNITARY_WARN = 1e-6
NETLIST_TOL = 1e-8


@dataclass(frozen=True)
class CosetFactorization:
    side: Side
    rotations: tuple[ModeRotation, ...]
    coset: np.ndarray
    removed_parameter_count: int
    nonunitary: bool = False
    zero_row_swapped: bool = field(default=False)

    @property
    def n(self) -> int:
        return self.coset.shape[0]

    def subgroup_matrix(self) -> np.ndarray:
        return compose(self.rotations, self.n)

    def reconstruct(self) -> np.ndarray:
        r = self.subgroup_matrix()
        return r @ self.coset if self.side == "output" else self.coset @ r

    def eliminated_entries(self) -> list[tuple[int, int]]:
        """1-based positions forced to zero by the factorization."""
        n = self.n
        upper = [(i, j) for j in range(3, n + 1) for i in range(1, j - 1)]
        if self.side == "output":
            return upper
        return [(j, i) for i, j in upper]


def _eliminate(u: np.ndarray) -> tuple[list[ModeRotation], np.ndarray]:
    """Left-multiply by two-mode rotations until ``u`` is upper Hessenberg.

    Returns the rotations ``R_k`` (already inverted) with
    ``u == compose(rotations) @ coset``.
    """
    v = u.copy()
    n = v.shape[0]
    rotations = []
    for j in range(n - 1, 1, -1):
        for i in range(0, j - 1):
            x, y = v[i, j], v[i + 1, j]
            r = np.hypot(abs(x), abs(y))
            # R @ [0, r] = [x, y] for R = [[a, -conj(b)], [b, conj(a)]]
            # leaves the surviving entry real and non-negative.
            if r == 0.0:
                a, b = 1.0 + 0j, 0j
            else:
                a, b = np.conj(y) / r, -np.conj(x) / r
            rot = ModeRotation.from_block(i + 1, i + 2, np.array([[a, -np.conj(b)], [b, np.conj(a)]]))
            g = rot.inverse().block()
            v[[i, i + 1], :] = g @ v[[i, i + 1], :]
            rotations.append(rot)
    return rotations, v


def _removed_count(n: int) -> int:
    # dimension of SU(n-1)
    return (n - 1) ** 2 - 1


def _check_input(u) -> tuple[np.ndarray, bool]:
    u = np.asarray(u, dtype=complex)
    n = _require_square(u)
    if n < 2:
        raise ValueError("coset factorization needs n >= 2")
    defect = unitarity_defect(u)
    flagged = defect > NONUNITARY_WARN
    if flagged:
        warnings.warn(
            f"input is not unitary (defect {defect:.3g}); the factorization still "
            "holds but the coset matrix is not unitary",
            stacklevel=3,
        )
    return u, flagged


def factor_output_coset(u, swap_zero_row: bool = False) -> CosetFactorization:
    """``U = compose(rotations) @ coset`` with ``coset`` upper Hessenberg.

    With ``swap_zero_row`` the coset is further multiplied by
    ``R_12(0, pi, 0)``, which moves the zero of the last column from the
    first row to the second (the coset is then no longer Hessenberg, but
    sums of rates are unchanged).
    """
    u, flagged = _check_input(u)
    n = u.shape[0]
    rotations, coset = _eliminate(u)
    if swap_zero_row:
        swap = ModeRotation(1, 2, 0.0, np.pi, 0.0)
        coset = embed_rotation(swap, n) @ coset
        rotations.append(swap.inverse())
    return CosetFactorization(
        "output", tuple(rotations), coset, _removed_count(n), flagged, swap_zero_row
    )


def _transpose_rotation(rot: ModeRotation) -> ModeRotation:
    return ModeRotation.from_block(rot.mode_i, rot.mode_j, rot.block().T)


def factor_input_coset(u) -> CosetFactorization:
    """``U = coset @ compose(rotations)`` with ``coset`` lower Hessenberg.

    Obtained from the output-side factorization of ``U.T``:
    ``U.T = R1 ... Rk @ C`` gives ``U = C.T @ Rk.T ... R1.T``.
    """
    u, flagged = _check_input(u)
    rotations, coset = _eliminate(u.T)
    rotations = [_transpose_rotation(r) for r in reversed(rotations)]
    return CosetFactorization(
        "input", tuple(rotations), coset.T.copy(), _removed_count(u.shape[0]), flagged
    )


def check_factorization(f: CosetFactorization, u, tol: float = 1e-10) -> dict:
    """Reconstruction error, zero-pattern residue and structural flags."""
    u = np.asarray(u, dtype=complex)
    n = f.n
    zeros = [abs(f.coset[i - 1, j - 1]) for i, j in f.eliminated_entries()]
    hess = is_upper_hessenberg if f.side == "output" else is_lower_hessenberg
    return {
        "reconstruction_error": float(np.max(np.abs(f.reconstruct() - u))),
        "max_eliminated": max(zeros, default=0.0),
        "hessenberg": hess(f.coset, tol) if not f.zero_row_swapped else False,
        "touches_last_mode": any(r.mode_j >= n for r in f.rotations),
    }


def _commutes(a: ModeRotation, b: ModeRotation) -> bool:
    return not set(a.modes) & set(b.modes)


def removed_elements(
    f: CosetFactorization, netlist: Sequence[ModeRotation], tol: float = NETLIST_TOL
) -> list[ModeRotation]:
    """Netlist elements that the sum rule of ``f.side`` makes irrelevant.

    ``netlist`` is in matrix order (``compose(netlist) == U``), so for
    output-side sums the removable elements are the leading ones acting on
    modes ``1..n-1`` (adjacent to the detectors), and for input-side sums
    the trailing ones (adjacent to the sources). Elements on disjoint modes
    commute, so an element further in also qualifies when every element it
    has to pass acts on different modes.
    """
    n = f.n
    target = f.reconstruct()
    if float(np.max(np.abs(compose(netlist, n) - target))) > tol:
        raise ValueError("netlist does not compose to the factorized matrix")
    seq = list(netlist) if f.side == "output" else list(reversed(netlist))
    kept: list[ModeRotation] = []
    removed: list[ModeRotation] = []
    for rot in seq:
        if rot.mode_j <= n - 1 and all(_commutes(rot, k) for k in kept):
            removed.append(rot)
        else:
            kept.append(rot)
    return removed if f.side == "output" else list(reversed(removed))


def strip_elements(
    netlist: Sequence[ModeRotation], removed: Sequence[ModeRotation]
) -> list[ModeRotation]:
    """``netlist`` with the (identity-compared) ``removed`` elements dropped."""
    drop = {id(r) for r in removed}
    return [r for r in netlist if id(r) not in drop]
