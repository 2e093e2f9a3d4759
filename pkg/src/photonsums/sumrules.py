"""Sums of coincidence rates that are unchanged by the coset replacement.

Output side: with one photon always detected in a fixed mode ``f`` and the
remaining photons anywhere in the other modes, the weighted sum
``sum_x c_x R(xi -> x f)`` depends on ``U`` only through the coset matrix of
``U = R @ Ubar``. Input side: the plain sum over input configurations
``(q..., f)`` with a fixed output depends only on ``Utilde`` in
``U = Utilde @ R``.

The coset construction works for the last mode. Any other fixed mode is
handled by swapping it with the last mode before factorizing.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .coset import factor_input_coset, factor_output_coset
from .linalg import haar_unitary
from .matfun import (
    is_lower_hessenberg,
    is_upper_hessenberg,
    permanent_hessenberg,
    permanent_ryser,
)
from .rates import DelaySpec, PhotonConfig, rate, scattering_submatrix

SUM_TOL = 1e-9
TERM_WITNESS = 1e-3


@dataclass(frozen=True)
class SumSpec:
    side: Literal["output", "input"]
    n: int
    photon_number: int
    fixed_mode: int | None = None
    delays: DelaySpec | None = None

    def __post_init__(self):
        if self.side not in ("output", "input"):
            raise ValueError(f"side must be 'output' or 'input', got {self.side!r}")
        if self.photon_number < 1:
            raise ValueError("photon_number must be >= 1")
        if not 1 <= self.fixed <= self.n:
            raise IndexError(f"fixed mode {self.fixed} outside 1..{self.n}")
        if self.delays is not None and len(self.delays) != self.photon_number:
            raise ValueError("one delay per photon is required")

    @property
    def fixed(self) -> int:
        return self.n if self.fixed_mode is None else self.fixed_mode

    @property
    def varying_modes(self) -> tuple[int, ...]:
        return tuple(m for m in range(1, self.n + 1) if m != self.fixed)

    def delay_spec(self) -> DelaySpec:
        return self.delays or DelaySpec.coincident(self.photon_number)


@dataclass
class SumTerm:
    config: PhotonConfig
    rate_full: float
    rate_coset: float
    method: str


@dataclass
class SumReport:
    side: str
    sum_full: float
    sum_coset: float
    terms: list[SumTerm]
    method: str
    tolerance: float = SUM_TOL
    sum_coset_ryser: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def discrepancy(self) -> float:
        return abs(self.sum_full - self.sum_coset)

    @property
    def max_term_discrepancy(self) -> float:
        return max((abs(t.rate_full - t.rate_coset) for t in self.terms), default=0.0)

    @property
    def invariant(self) -> bool:
        ok = self.discrepancy <= self.tolerance * max(1.0, self.sum_full)
        if self.sum_coset_ryser is not None:
            ok = ok and abs(self.sum_coset_ryser - self.sum_coset) <= self.tolerance * max(
                1.0, self.sum_full
            )
        return ok

    @property
    def per_term_table(self) -> list[tuple[tuple[int, ...], float, float]]:
        return [(t.config.modes, t.rate_full, t.rate_coset) for t in self.terms]


def enumerate_outputs(n: int, photon_number: int, fixed_mode: int | None = None) -> list[PhotonConfig]:
    """Multisets of ``photon_number - 1`` modes (excluding the fixed one),
    each followed by the fixed mode, in lexicographic order."""
    fixed = n if fixed_mode is None else fixed_mode
    if not 1 <= fixed <= n:
        raise IndexError(f"fixed mode {fixed} outside 1..{n}")
    if photon_number < 1:
        raise ValueError("photon_number must be >= 1")
    others = [m for m in range(1, n + 1) if m != fixed]
    return [
        PhotonConfig(combo + (fixed,))
        for combo in itertools.combinations_with_replacement(others, photon_number - 1)
    ]


def enumerate_all(n: int, photon_number: int) -> list[PhotonConfig]:
    """Every multiset of ``photon_number`` modes out of ``n``."""
    return [
        PhotonConfig(c)
        for c in itertools.combinations_with_replacement(range(1, n + 1), photon_number)
    ]


def _swap_to_last(n: int, fixed: int) -> np.ndarray:
    perm = np.eye(n)
    perm[[fixed - 1, n - 1]] = perm[[n - 1, fixed - 1]]
    return perm


def _relabel(cfg: PhotonConfig, n: int, fixed: int) -> PhotonConfig:
    swap = {fixed: n, n: fixed}
    return PhotonConfig([swap.get(m, m) for m in cfg.modes])


def _summed(side: str, full, coset, fixed_cfg, family, delays, n, fixed, method, tol):
    terms = []
    ryser_terms = []
    use_det = method in ("auto", "both", "hessenberg_det") and delays.all_equal
    for cfg in family:
        # only the summed side was permuted; the fixed configuration is not
        moved = _relabel(cfg, n, fixed)
        if side == "output":
            args_full, args_coset = (fixed_cfg, cfg), (fixed_cfg, moved)
        else:
            args_full, args_coset = (cfg, fixed_cfg), (moved, fixed_cfg)
        r_full = rate(full, *args_full, delays, method="ryser").value
        if use_det:
            r_coset = rate(coset, *args_coset, delays, method="auto")
            ryser_terms.append(rate(coset, *args_coset, delays, method="ryser").value)
        else:
            r_coset = rate(coset, *args_coset, delays, method="ryser")
        terms.append(SumTerm(cfg, r_full, r_coset.value, r_coset.method))
    used = {t.method for t in terms}
    report = SumReport(
        side,
        math.fsum(t.rate_full for t in terms),
        math.fsum(t.rate_coset for t in terms),
        terms,
        "hessenberg_det" if "hessenberg_det" in used else (used.pop() if len(used) == 1 else "mixed"),
        tol,
    )
    if use_det:
        report.sum_coset_ryser = math.fsum(ryser_terms)
    return report


def sum_over_outputs(
    u, inp: PhotonConfig, spec: SumSpec, method: str = "auto", tol: float = SUM_TOL
) -> SumReport:
    """Weighted output sum for ``U`` and for its output-side coset matrix.

    With coincident photons and ``method`` ``"auto"``/``"both"`` each coset
    term uses the Hessenberg determinant route when its submatrix qualifies
    (recorded per term), and the all-Ryser coset sum is kept alongside in
    ``sum_coset_ryser``. ``method="ryser"`` forces Ryser everywhere.
    """
    if spec.side != "output":
        raise ValueError("spec.side must be 'output'")
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if len(inp) != spec.photon_number:
        raise ValueError("input photon number does not match SumSpec.photon_number")
    fixed = spec.fixed
    swap = _swap_to_last(n, fixed)
    f = factor_output_coset(swap @ u)
    family = enumerate_outputs(n, spec.photon_number, fixed)
    report = _summed(
        "output", u, f.coset, inp, family, spec.delay_spec(), n, fixed, method, tol
    )
    report.extra["rotations"] = len(f.rotations)
    return report


def sum_over_inputs(
    u, out: PhotonConfig, spec: SumSpec, method: str = "auto", tol: float = SUM_TOL
) -> SumReport:
    """Sum over input configurations ``(q..., f)`` into a fixed output.

    Delays are positional: ``taus[:-1]`` belong to the photons in the
    varying modes, ``taus[-1]`` to the photon in the fixed mode. Because a
    multiset of varying modes does not say which photon sits where, the
    varying photons must share one delay whenever there are two or more of
    them; otherwise the input states do not span a subgroup-invariant
    family and the request is rejected.
    """
    if spec.side != "input":
        raise ValueError("spec.side must be 'input'")
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if len(out) != spec.photon_number:
        raise ValueError("output photon number does not match SumSpec.photon_number")
    delays = spec.delay_spec()
    if len(set(delays.taus[:-1])) > 1:
        raise ValueError(
            "input-side sums need the same delay on every photon entering the "
            f"varying modes; got {delays.taus[:-1]}"
        )
    fixed = spec.fixed
    swap = _swap_to_last(n, fixed)
    f = factor_input_coset(u @ swap)
    family = enumerate_outputs(n, spec.photon_number, fixed)
    report = _summed("input", u, f.coset, out, family, delays, n, fixed, method, tol)
    report.extra["rotations"] = len(f.rotations)
    return report


@dataclass
class ScanSummary:
    n: int
    trials: int
    max_output_discrepancy: float | None = None
    max_input_discrepancy: float | None = None
    max_method_discrepancy: float | None = None
    draws_with_term_witness: int = 0
    ryser_seconds_per_term: float | None = None
    det_seconds_per_term: float | None = None
    input_side_skipped: str | None = None

    @property
    def max_discrepancy(self) -> float | None:
        vals = [v for v in (self.max_output_discrepancy, self.max_input_discrepancy) if v is not None]
        return max(vals) if vals else None


def _time_methods(coset: np.ndarray, inp: PhotonConfig, family, repeats: int = 3):
    """Per-term wall time of Ryser and Hessenberg-det on qualifying submatrices."""
    subs = []
    for cfg in family:
        m = scattering_submatrix(coset, inp, cfg)
        if m.shape[0] >= 3 and (is_upper_hessenberg(m) or is_lower_hessenberg(m)):
            subs.append(m)
    if not subs:
        return None, None
    out = []
    for fn in (permanent_ryser, permanent_hessenberg):
        t0 = time.perf_counter()
        for _ in range(repeats):
            for m in subs:
                fn(m)
        out.append((time.perf_counter() - t0) / (repeats * len(subs)))
    return out[0], out[1]


def invariance_scan(n: int, trials: int, seed: int, delays: DelaySpec | None = None) -> ScanSummary:
    """Output- and input-side sums on ``trials`` Haar matrices of size ``n``.

    Photons: ``n - 1`` of them entering modes ``2..n`` (output sums), and
    detected in modes ``2..n`` (input sums), with the last mode fixed.
    """
    if n not in (3, 4, 5, 6):
        raise ValueError("scan supports n in 3..6")
    summary = ScanSummary(n, trials)
    if trials <= 0:
        return summary
    n_p = n - 1
    delays = delays or DelaySpec.coincident(n_p)
    probe = PhotonConfig(range(2, n + 1))
    out_spec = SumSpec("output", n, n_p, delays=delays)
    in_spec = SumSpec("input", n, n_p, delays=delays)
    seeds = np.random.SeedSequence(seed).generate_state(trials)
    out_d, in_d, meth_d = [], [], []
    timings = []
    for s in seeds:
        u = haar_unitary(n, int(s))
        rep = sum_over_outputs(u, probe, out_spec)
        out_d.append(rep.discrepancy)
        if rep.sum_coset_ryser is not None:
            meth_d.append(abs(rep.sum_coset_ryser - rep.sum_coset))
            timings.append(
                _time_methods(factor_output_coset(u).coset, probe, enumerate_outputs(n, n_p))
            )
        if rep.max_term_discrepancy > TERM_WITNESS:
            summary.draws_with_term_witness += 1
        try:
            in_d.append(sum_over_inputs(u, probe, in_spec).discrepancy)
        except ValueError as exc:
            summary.input_side_skipped = str(exc)
    summary.max_output_discrepancy = max(out_d)
    summary.max_input_discrepancy = max(in_d) if in_d else None
    summary.max_method_discrepancy = max(meth_d) if meth_d else None
    timings = [t for t in timings if t[0] is not None]
    if timings:
        summary.ryser_seconds_per_term = float(np.mean([t[0] for t in timings]))
        summary.det_seconds_per_term = float(np.mean([t[1] for t in timings]))
    return summary
