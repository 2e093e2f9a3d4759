"""Dense complex matrices, two-mode rotations and Haar sampling.

Matrices are plain ``numpy`` complex arrays. Mode labels in every public
function are 1-based, matching optical channel numbering; conversion to
0-based array indices happens internally.

Composition convention: ``compose([R1, R2, R3], n)`` returns ``R1 @ R2 @ R3``.
Read as an optical netlist, the *last* element acts first on the input
photons and the *first* element is adjacent to the detectors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

UNITARITY_TOL = 1e-10


def as_matrix(data) -> np.ndarray:
    """Return ``data`` as a 2-D complex array, rejecting NaN/Inf and empty input."""
    m = np.array(data, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _require_square(m: np.ndarray) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


@dataclass(frozen=True)
class ModeRotation:
    """SU(2) element mixing modes ``mode_i < mode_j`` (1-based).

    The 2x2 block is::

        [[ e^{-i(a+g)/2} cos(b/2), -e^{-i(a-g)/2} sin(b/2)],
         [ e^{-i(g-a)/2} sin(b/2),  e^{ i(a+g)/2} cos(b/2)]]

    with ``a, b, g = alpha, beta, gamma``.
    """

    mode_i: int
    mode_j: int
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not (1 <= self.mode_i < self.mode_j):
            raise ValueError(
                f"need 1 <= mode_i < mode_j, got ({self.mode_i}, {self.mode_j})"
            )

    @property
    def modes(self) -> tuple[int, int]:
        return (self.mode_i, self.mode_j)

    def block(self) -> np.ndarray:
        a, b, g = self.alpha, self.beta, self.gamma
        c, s = np.cos(b / 2), np.sin(b / 2)
        return np.array(
            [
                [np.exp(-0.5j * (a + g)) * c, -np.exp(-0.5j * (a - g)) * s],
                [np.exp(-0.5j * (g - a)) * s, np.exp(0.5j * (a + g)) * c],
            ]
        )

    def inverse(self) -> "ModeRotation":
        # R(a, b, g)^dagger == R(-g, -b, -a)
        return ModeRotation(self.mode_i, self.mode_j, -self.gamma, -self.beta, -self.alpha)

    @classmethod
    def from_block(cls, mode_i: int, mode_j: int, block) -> "ModeRotation":
        """Recover angles from an SU(2) block ``[[a, -conj(b)], [b, conj(a)]]``.

        ``beta`` lands in ``[0, pi]``; when one of ``a``, ``b`` vanishes the
        free phase is put to zero.
        """
        a, b = complex(block[0, 0]), complex(block[1, 0])
        beta = 2.0 * np.arctan2(abs(b), abs(a))
        pa = np.angle(a) if abs(a) > 0 else 0.0
        pb = np.angle(b) if abs(b) > 0 else 0.0
        if abs(a) == 0:
            pa = -pb
        if abs(b) == 0:
            pb = -pa
        # arg a = -(alpha + gamma)/2, arg b = (alpha - gamma)/2
        return cls(mode_i, mode_j, pb - pa, beta, -pa - pb)


def embed_rotation(rot: ModeRotation, n: int) -> np.ndarray:
    """Embed ``rot`` in an ``n``-mode identity."""
    if rot.mode_j > n:
        raise IndexError(f"rotation on modes {rot.modes} does not fit in {n} modes")
    out = np.eye(n, dtype=complex)
    i, j = rot.mode_i - 1, rot.mode_j - 1
    out[np.ix_([i, j], [i, j])] = rot.block()
    return out


def compose(seq: Iterable[ModeRotation], n: int) -> np.ndarray:
    """Matrix product of the embedded rotations, left to right as listed."""
    out = np.eye(n, dtype=complex)
    for rot in seq:
        if rot.mode_j > n:
            raise IndexError(f"rotation on modes {rot.modes} does not fit in {n} modes")
        i, j = rot.mode_i - 1, rot.mode_j - 1
        # right-multiplying mixes columns i and j only
        out[:, [i, j]] = out[:, [i, j]] @ rot.block()
    return out


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random ``n x n`` unitary from QR of a complex Ginibre matrix.

    The phases of R's diagonal are moved into Q so that the result is
    Haar distributed rather than biased by the QR sign convention.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def unitarity_defect(m: np.ndarray) -> float:
    """Max-norm of ``M^dagger M - I``."""
    n = _require_square(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(n))))


def is_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    return unitarity_defect(m) < tol


def random_upper_hessenberg(n: int, seed: int) -> np.ndarray:
    """Complex Gaussian matrix with zeros above the superdiagonal."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return np.tril(z, 1)


def random_angles(rng: np.random.Generator) -> tuple[float, float, float]:
    a, g = rng.uniform(0, 2 * np.pi, size=2)
    b = rng.uniform(0, np.pi)
    return float(a), float(b), float(g)


# JSON wire format: {"rows": n, "cols": m, "data": [[re, im], ...]} row-major.

def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
    vals = []
    for entry in data:
        if not isinstance(entry, Sequence) or len(entry) != 2:
            raise ValueError(f"entry {entry!r} is not a [re, im] pair")
        vals.append(complex(float(entry[0]), float(entry[1])))
    return as_matrix(np.array(vals).reshape(rows, cols))


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(m: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(m), fh)
