"""Permanents, determinants and immanants of complex matrices.

Three permanent routes are provided:

* ``permanent_naive``: the defining permutation sum, used as an oracle.
* ``permanent_ryser``: inclusion-exclusion over column subsets in
  Nijenhuis-Wilf form (2^(n-1) subsets) visited in binary-reflected Gray
  code order, so each step adds or removes a single column.
* ``permanent_hessenberg``: for upper-Hessenberg input the permanent equals
  the determinant of the superdiagonal-negated matrix, an O(n^3) route.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .characters import Partition, characters, cycle_type
from .linalg import _require_square

NAIVE_MAX_N = 9
RYSER_MAX_N = 30
HESSENBERG_TOL = 1e-10

# Gray-code steps are processed in blocks so the row-sum recurrence can use
# a vectorised cumulative sum; the visiting order is unchanged.
_GRAY_BLOCK = 1 << 12


def rel_close(a, b, tol: float) -> bool:
    """``|a - b| <= tol * max(1, |a|, |b|)``."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of ``range(n)`` and the sign of each."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    signs = np.array(
        [(-1) ** (n - len(cycle_type(p))) for p in perms], dtype=float
    )
    return perms, signs


@lru_cache(maxsize=None)
def _class_index(n: int) -> tuple[np.ndarray, tuple[Partition, ...]]:
    perms, _ = _perm_table(n)
    classes: dict[Partition, int] = {}
    idx = np.empty(len(perms), dtype=np.intp)
    for k, p in enumerate(perms):
        idx[k] = classes.setdefault(cycle_type(p), len(classes))
    return idx, tuple(classes)


def _terms(m: np.ndarray) -> np.ndarray:
    """Products prod_k M[sigma(k), k] for every permutation sigma."""
    n = m.shape[0]
    perms, _ = _perm_table(n)
    return np.prod(m[perms, np.arange(n)], axis=1)


def _check_naive(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    n = _require_square(m)
    if n > NAIVE_MAX_N:
        raise ValueError(f"permutation-sum evaluation limited to n <= {NAIVE_MAX_N}, got {n}")
    return m


def permanent_naive(m) -> complex:
    m = _check_naive(m)
    return complex(np.sum(_terms(m)))


def determinant_naive(m) -> complex:
    """Signed permutation sum; oracle for :func:`determinant`."""
    m = _check_naive(m)
    _, signs = _perm_table(m.shape[0])
    return complex(np.sum(signs * _terms(m)))


def determinant(m) -> complex:
    """LU (partial pivoting) determinant, via LAPACK."""
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    return complex(np.linalg.det(m))


def gray_code_flips(k: int) -> np.ndarray:
    """Index of the bit toggled at each step of the k-bit reflected Gray code.

    Step ``t`` (1-based) toggles the lowest set bit of ``t``.
    """
    t = np.arange(1, 1 << k, dtype=np.int64)
    return np.log2(t & -t).astype(np.intp)


def permanent_ryser(m) -> complex:
    """Ryser permanent, Gray-code ordered, with the Nijenhuis-Wilf halving.

    per(A) = (-1)^(n-1) 2 sum_{S in [n-1]} (-1)^|S| prod_i (x_i + sum_{j in S} a_ij)
    with x_i = a_in - (1/2) sum_j a_ij. Subsets are visited in reflected
    Gray-code order starting from the empty set.
    """
    m = np.asarray(m, dtype=complex)
    n = _require_square(m)
    if n > RYSER_MAX_N:
        raise ValueError(f"Ryser limited to n <= {RYSER_MAX_N}, got {n}")
    if n == 1:
        return complex(m[0, 0])
    x = m[:, -1] - 0.5 * m.sum(axis=1)
    total = np.prod(x)
    steps = (1 << (n - 1)) - 1
    rows = x.copy()
    parity = 0
    for start in range(0, steps, _GRAY_BLOCK):
        t = np.arange(start + 1, min(start + _GRAY_BLOCK, steps) + 1, dtype=np.int64)
        flips = np.log2(t & -t).astype(np.intp)
        # direction of each toggle: +1 when the column enters the subset
        gray = t ^ (t >> 1)
        entering = ((gray >> flips) & 1).astype(bool)
        deltas = m[:, flips].T * np.where(entering, 1.0, -1.0)[:, None]
        sums = rows + np.cumsum(deltas, axis=0)
        sizes = parity + np.cumsum(np.where(entering, 1, -1))
        total += np.sum(np.where(sizes % 2 == 0, 1.0, -1.0) * np.prod(sums, axis=1))
        rows = sums[-1]
        parity = int(sizes[-1])
    return complex((-1) ** (n - 1) * 2 * total)


def immanant(m, lam: Partition) -> complex:
    """sum_sigma chi^lam(sigma) prod_k M[sigma(k), k] by direct enumeration."""
    m = _check_naive(m)
    n = m.shape[0]
    if lam.n != n:
        raise ValueError(f"partition {lam} does not partition {n}")
    if n > 8:
        # character table generation stops at S_8; the two extreme shapes
        # only need the trivial and sign characters
        if lam.parts == (n,):
            return permanent_naive(m)
        if lam.parts == (1,) * n:
            return determinant_naive(m)
        raise ValueError("general immanants are limited to n <= 8")
    idx, classes = _class_index(n)
    table = characters(n)
    chi = np.array([table(lam, mu) for mu in classes], dtype=float)
    return complex(np.sum(chi[idx] * _terms(m)))


def is_upper_hessenberg(m, tol: float = HESSENBERG_TOL) -> bool:
    """True iff ``|M[i, i+k]| <= tol`` for every ``k >= 2``."""
    m = np.asarray(m)
    _require_square(m)
    return bool(np.all(np.abs(np.triu(m, 2)) <= tol))


def is_lower_hessenberg(m, tol: float = HESSENBERG_TOL) -> bool:
    return is_upper_hessenberg(np.asarray(m).T, tol)


def t_map(m) -> np.ndarray:
    """Copy of ``m`` with its superdiagonal negated."""
    out = np.array(m, dtype=complex)
    _require_square(out)
    k = np.arange(out.shape[0] - 1)
    out[k, k + 1] *= -1
    return out


def permanent_hessenberg(m, tol: float = HESSENBERG_TOL) -> complex:
    """Permanent of an upper- or lower-Hessenberg matrix as ``det(T(M))``."""
    m = np.asarray(m, dtype=complex)
    if is_upper_hessenberg(m, tol):
        return determinant(t_map(m))
    if is_lower_hessenberg(m, tol):
        return determinant(t_map(m.T))
    raise ValueError("matrix is not Hessenberg within tolerance")


def permanent(m) -> complex:
    """Permanent with automatic route choice (Hessenberg fast path, else Ryser)."""
    m = np.asarray(m, dtype=complex)
    n = _require_square(m)
    if n > 2 and (is_upper_hessenberg(m) or is_lower_hessenberg(m)):
        return permanent_hessenberg(m)
    return permanent_ryser(m)


def conjugate_immanant_defects(m) -> dict[Partition, float]:
    """``|Imm^lam(M) - Imm^lam*(T(M))|`` for every shape ``lam`` of ``n``.

    For upper-Hessenberg ``M`` every surviving permutation is a product of
    cycles on consecutive indices, each using ``len - 1`` superdiagonal
    entries, so T contributes exactly ``sgn(sigma)``; combined with
    ``chi^lam* = sgn * chi^lam`` every defect should sit at rounding level.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    tm = t_map(m)
    return {
        lam: abs(immanant(m, lam) - immanant(tm, lam.conjugate()))
        for lam in characters(n).irreps
    }
