"""Coincidence rates for photons scattered by a linear interferometer.

Photons carry Gaussian spectra of width ``s`` and arrival times ``tau``; two
photons with delays ``tau_a``, ``tau_b`` overlap with amplitude
``exp(-s^2 (tau_a - tau_b)^2 / 2)``. Mode labels are 1-based. Input modes are
kept in the order given, since delays are attached positionally to input
photons.

For an ``n_p``-photon process with submatrix ``M`` (row ``k`` = output
mode ``x_k``, column ``k`` = input photon ``k``) the rate is::

    c_out / N_in * sum_{sigma, rho} prod_k M[k, sigma(k)] conj(M[k, rho(k)])
                                          * g(tau_sigma(k), tau_rho(k))

where ``c_out = 1 / prod(multiplicity!)`` over output modes and ``N_in``
is the squared norm of the input state (``prod(multiplicity!)`` for
identical photons sharing an input mode, 1 for distinct input modes).
"""
from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Sequence

import numpy as np

from .characters import Partition
from .matfun import (
    _perm_table,
    immanant,
    is_lower_hessenberg,
    is_upper_hessenberg,
    permanent_hessenberg,
    permanent_naive,
    permanent_ryser,
)

ORACLE_MAX_PHOTONS = 7
INDISTINGUISHABLE_MAX_PHOTONS = 20
NEGATIVE_TOL = 1e-12
IMAG_TOL = 1e-12

_PER3 = Partition(3)
_MIXED = Partition(2, 1)


@dataclass(frozen=True)
class PhotonConfig:
    """Mode occupied by each photon (1-based), in photon order."""

    modes: tuple[int, ...]

    def __init__(self, modes: Sequence[int]):
        modes = tuple(int(m) for m in modes)
        if not modes:
            raise ValueError("a configuration needs at least one photon")
        if any(m < 1 for m in modes):
            raise ValueError(f"mode labels are 1-based, got {modes}")
        object.__setattr__(self, "modes", modes)

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.modes).items()))

    @property
    def c_factor(self) -> Fraction:
        denom = 1
        for k in Counter(self.modes).values():
            denom *= factorial(k)
        return Fraction(1, denom)

    @property
    def distinct(self) -> bool:
        return len(set(self.modes)) == len(self.modes)

    def sorted(self) -> "PhotonConfig":
        return PhotonConfig(sorted(self.modes))

    def __str__(self):
        return ",".join(map(str, self.modes))


def photons(*modes) -> PhotonConfig:
    if len(modes) == 1 and not isinstance(modes[0], int):
        return PhotonConfig(modes[0])
    return PhotonConfig(modes)


@dataclass(frozen=True)
class DelaySpec:
    taus: tuple[float, ...]
    s: float = 1.0

    def __init__(self, taus: Sequence[float], s: float = 1.0):
        taus = tuple(float(t) for t in taus)
        if not all(np.isfinite(taus)) or not np.isfinite(s):
            raise ValueError("delays and spectral width must be finite")
        if s <= 0:
            raise ValueError("spectral width s must be positive")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "s", float(s))

    @classmethod
    def coincident(cls, n_photons: int, s: float = 1.0) -> "DelaySpec":
        return cls((0.0,) * n_photons, s)

    def __len__(self):
        return len(self.taus)

    @property
    def all_equal(self) -> bool:
        return len(set(self.taus)) <= 1

    def overlap_matrix(self) -> np.ndarray:
        t = np.asarray(self.taus)
        return np.exp(-0.5 * self.s**2 * (t[:, None] - t[None, :]) ** 2)

    def pair_visibility(self, a: int, b: int) -> float:
        """``exp(-s^2 (tau_a - tau_b)^2)`` for 0-based photon indices."""
        return float(np.exp(-(self.s**2) * (self.taus[a] - self.taus[b]) ** 2))


@dataclass
class RateResult:
    value: float
    decomposition: dict[Any, complex] = field(default_factory=dict)
    method: str = ""
    clamped: bool = False
    notice: str | None = None

    def __float__(self):
        return self.value


def _finish(value: float, **kw) -> RateResult:
    clamped = False
    if value < 0:
        clamped = value < -NEGATIVE_TOL
        value = 0.0
    return RateResult(float(value), clamped=clamped, **kw)


def scattering_submatrix(u, inp: PhotonConfig, out: PhotonConfig) -> np.ndarray:
    """Rows ``out.modes`` and columns ``inp.modes`` of ``u``, duplicates kept."""
    u = np.asarray(u, dtype=complex)
    if len(inp) != len(out):
        raise ValueError(f"photon number mismatch: {len(inp)} in, {len(out)} out")
    n_rows, n_cols = u.shape
    if max(out.modes) > n_rows or max(inp.modes) > n_cols:
        raise IndexError(f"mode label out of range for a {n_rows}x{n_cols} matrix")
    rows = [m - 1 for m in out.modes]
    cols = [m - 1 for m in inp.modes]
    return u[np.ix_(rows, cols)]


def _check_delays(inp: PhotonConfig, delays: DelaySpec) -> None:
    if len(delays) != len(inp):
        raise ValueError(
            f"{len(delays)} delays given for {len(inp)} input photons; "
            "delays are positional and never broadcast"
        )


def input_norm(inp: PhotonConfig, delays: DelaySpec) -> float:
    """Squared norm of the input state: sum over photon relabelings that keep
    every photon in its mode of the product of wave-packet overlaps."""
    if inp.distinct:
        return 1.0
    _check_delays(inp, delays)
    g = delays.overlap_matrix()
    perms, _ = _perm_table(len(inp))
    modes = np.asarray(inp.modes)
    keep = np.all(modes[perms] == modes, axis=1)
    n = len(inp)
    return float(np.sum(np.prod(g[np.arange(n), perms[keep]], axis=1)))


def _oracle_raw(m: np.ndarray, g: np.ndarray, block: int = 128) -> complex:
    n = m.shape[0]
    perms, _ = _perm_table(n)
    k = np.arange(n)
    amps = np.prod(m[k, perms], axis=1)
    total = 0j
    for start in range(0, len(perms), block):
        p = perms[start : start + block]
        # w[s, r] = prod_k g[sigma_s(k), rho_r(k)]
        w = np.prod(g[p[:, None, :], perms[None, :, :]], axis=2)
        total += np.sum(amps[start : start + block] * (w @ amps.conj()))
    return complex(total)


def rate_oracle(u, inp: PhotonConfig, out: PhotonConfig, delays: DelaySpec) -> float:
    """Brute-force double permutation sum (see module docstring)."""
    n_p = len(inp)
    if n_p > ORACLE_MAX_PHOTONS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_PHOTONS} photons, got {n_p}")
    _check_delays(inp, delays)
    m = scattering_submatrix(u, inp, out)
    raw = _oracle_raw(m, delays.overlap_matrix())
    scale = max(1.0, abs(raw))
    if abs(raw.imag) > IMAG_TOL * scale:
        warnings.warn(f"oracle sum has imaginary part {raw.imag:.3g}", stacklevel=2)
    value = float(out.c_factor) * raw.real / input_norm(inp, delays)
    return max(value, 0.0) if value >= -NEGATIVE_TOL else value


def _permanent_route(m: np.ndarray, method: str) -> tuple[complex, str]:
    n = m.shape[0]
    if method == "naive":
        return permanent_naive(m), "naive"
    if method == "ryser":
        return permanent_ryser(m), "ryser"
    hess = n >= 3 and (is_upper_hessenberg(m) or is_lower_hessenberg(m))
    if method == "hessenberg_det":
        if not hess:
            raise ValueError("submatrix is not Hessenberg; det route unavailable")
        return permanent_hessenberg(m), "hessenberg_det"
    if method == "auto":
        if hess:
            return permanent_hessenberg(m), "hessenberg_det"
        return permanent_ryser(m), "ryser"
    raise ValueError(f"unknown permanent method {method!r}")


def rate_indistinguishable(
    u, inp: PhotonConfig, out: PhotonConfig, method: str = "auto"
) -> RateResult:
    """``c_out * c_in * |Per(M)|^2`` for perfectly overlapping photons.

    ``method`` is ``"auto"`` (Hessenberg determinant route when the
    submatrix qualifies, else Ryser), ``"ryser"``, ``"hessenberg_det"`` or
    ``"naive"``.
    """
    if len(inp) > INDISTINGUISHABLE_MAX_PHOTONS:
        raise ValueError(f"at most {INDISTINGUISHABLE_MAX_PHOTONS} photons supported")
    m = scattering_submatrix(u, inp, out)
    per, used = _permanent_route(m, method)
    value = float(out.c_factor * inp.c_factor) * abs(per) ** 2
    return _finish(value, decomposition={Partition(len(inp)): per}, method=used)


def rate_two_photon(
    u, inp: PhotonConfig, out: PhotonConfig, delays: DelaySpec
) -> RateResult:
    """Two photons from distinct inputs, delay ``tau_12``.

    ``c_out * [(1 + V)/2 |Per S|^2 + (1 - V)/2 |Det S|^2]`` with
    ``V = exp(-s^2 tau_12^2)``.
    """
    if len(inp) != 2 or not inp.distinct:
        raise ValueError("two-photon rate needs two photons in distinct input modes")
    _check_delays(inp, delays)
    sub = scattering_submatrix(u, inp, out)
    per = sub[0, 0] * sub[1, 1] + sub[0, 1] * sub[1, 0]
    det = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    vis = delays.pair_visibility(0, 1)
    value = float(out.c_factor) * (
        0.5 * (1 + vis) * abs(per) ** 2 + 0.5 * (1 - vis) * abs(det) ** 2
    )
    return _finish(
        value,
        decomposition={Partition(2): complex(per), Partition(1, 1): complex(det)},
        method="closed_form",
    )


# Column orders of the 3x3 submatrix named by the input modes they bring
# into first, second, third position, for input modes (2, 3, 4).
_ORDER = {
    "234": (0, 1, 2),
    "243": (0, 2, 1),
    "324": (1, 0, 2),
    "342": (1, 2, 0),
    "423": (2, 0, 1),
    "432": (2, 1, 0),
}


def three_photon_amplitudes(sub: np.ndarray) -> tuple[complex, complex, complex]:
    """Amplitudes ``(A, B, C)`` with the delayed (third) photon leaving
    through output row 2, row 1 and row 3 respectively.

    Each is a combination of the permanent and (2,1)-immanants of
    column-reordered copies of ``sub``::

        A = (Per - Imm[324] + Imm[342] - Imm[432]) / 3
        B = (Per - Imm[234] - Imm[243] - Imm[324] - Imm[342]) / 3
        C = (Per + Imm[234] + Imm[324]) / 3
    """
    per = permanent_naive(sub)
    imm = {k: immanant(sub[:, list(v)], _MIXED) for k, v in _ORDER.items()}
    a = (per - imm["324"] + imm["342"] - imm["432"]) / 3
    b = (per - imm["234"] - imm["243"] - imm["324"] - imm["342"]) / 3
    c = (per + imm["234"] + imm["324"]) / 3
    return a, b, c


def _split_delays(delays: DelaySpec) -> tuple[int, int, int] | None:
    """Photon order (equal, equal, odd) for a two-equal delay pattern."""
    t = delays.taus
    for odd in (2, 1, 0):
        pair = [k for k in range(3) if k != odd]
        if t[pair[0]] == t[pair[1]]:
            return (pair[0], pair[1], odd)
    return None


def rate_three_photon_partial(
    u, inp: PhotonConfig, out: PhotonConfig, delays: DelaySpec
) -> RateResult:
    """Three photons from distinct inputs, two of them coincident.

    Photons are reordered so the delayed one is last; ``V = exp(-s^2 dt^2)``
    with ``dt`` the delay between the coincident pair and the odd photon.

    Two photons detected in the same mode::

        c_out [ (1 + 2V)/3 |Per|^2 + 2(1 - V)/3 |Imm21|^2 ]

    (rows ordered so the doubled mode comes first). Three distinct output
    modes::

        |A|^2 + |B|^2 + |C|^2 + V [(A+B)* C + (B+C)* A + (C+A)* B]

    Any other delay pattern falls back to :func:`rate_oracle` with a notice.
    """
    if len(inp) != 3 or not inp.distinct:
        raise ValueError("three-photon rate needs three photons in distinct input modes")
    _check_delays(inp, delays)
    order = _split_delays(delays)
    if order is None:
        msg = "delay pattern has no coincident pair; using the permutation-sum oracle"
        warnings.warn(msg, stacklevel=2)
        return _finish(rate_oracle(u, inp, out, delays), method="oracle", notice=msg)
    inp = PhotonConfig([inp.modes[k] for k in order])
    delays = DelaySpec([delays.taus[k] for k in order], delays.s)
    vis = delays.pair_visibility(0, 2)
    c = float(out.c_factor)

    if out.distinct:
        sub = scattering_submatrix(u, inp, out)
        a, b, cc = three_photon_amplitudes(sub)
        cross = (np.conj(a + b) * cc + np.conj(b + cc) * a + np.conj(cc + a) * b).real
        value = abs(a) ** 2 + abs(b) ** 2 + abs(cc) ** 2 + vis * cross
        per = permanent_naive(sub)
        return _finish(
            c * value,
            decomposition={"A": a, "B": b, "C": cc, _PER3: per},
            method="closed_form",
        )

    counts = Counter(out.modes)
    doubled = max(counts, key=lambda k: (counts[k], -k))
    rest = [x for x in out.modes if x != doubled]
    out_rows = PhotonConfig([doubled, doubled] + (rest or [doubled]))
    sub = scattering_submatrix(u, inp, out_rows)
    per = permanent_naive(sub)
    imm = immanant(sub, _MIXED)
    value = c * (
        (1 + 2 * vis) / 3 * abs(per) ** 2 + 2 * (1 - vis) / 3 * abs(imm) ** 2
    )
    return _finish(value, decomposition={_PER3: per, _MIXED: imm}, method="closed_form")


def rate(
    u, inp: PhotonConfig, out: PhotonConfig, delays: DelaySpec | None = None,
    method: str = "auto",
) -> RateResult:
    """Dispatch to the cheapest exact rate formula for the delay pattern."""
    if delays is None:
        delays = DelaySpec.coincident(len(inp))
    _check_delays(inp, delays)
    if delays.all_equal:
        return rate_indistinguishable(u, inp, out, method=method)
    if inp.distinct and len(inp) == 2:
        return rate_two_photon(u, inp, out, delays)
    if inp.distinct and len(inp) == 3 and _split_delays(delays) is not None:
        return rate_three_photon_partial(u, inp, out, delays)
    return _finish(rate_oracle(u, inp, out, delays), method="oracle")
