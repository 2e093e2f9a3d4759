"""Exit criteria for the library, runnable from pytest and ``selftest``.

Each criterion is a function returning a :class:`Criterion`. Passing
``tol`` replaces the criterion's numeric bound(s), which is how the CLI
checks that an absurdly tight tolerance really does fail.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .characters import Partition, characters, class_size
from .coset import check_factorization, factor_output_coset
from .linalg import haar_unitary, random_upper_hessenberg
from .matfun import (
    determinant,
    immanant,
    permanent_hessenberg,
    permanent_naive,
    permanent_ryser,
    rel_close,
)
from .rates import (
    DelaySpec,
    PhotonConfig,
    rate_indistinguishable,
    rate_oracle,
    rate_three_photon_partial,
    rate_two_photon,
    scattering_submatrix,
)
from .sumrules import SumSpec, enumerate_all, sum_over_inputs, sum_over_outputs

BEAMSPLITTER = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
FAR_DELAY = 1e3


@dataclass
class Criterion:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.key:<18} {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _bound(default: float, tol: float | None) -> float:
    return default if tol is None else tol


def hom(tol=None) -> Criterion:
    b = _bound(1e-12, tol)
    inp, out = PhotonConfig((1, 2)), PhotonConfig((1, 2))
    dip = rate_two_photon(BEAMSPLITTER, inp, out, DelaySpec((0.0, 0.0))).value
    far = rate_two_photon(BEAMSPLITTER, inp, out, DelaySpec((0.0, FAR_DELAY))).value
    ok = abs(dip) < b and abs(far - 0.5) < b
    return Criterion("hom", "HOM dip", ok, f"R(0)={dip:.3g}, |R(inf)-1/2|={abs(far - 0.5):.3g}, bound {b:g}")


def two_photon_oracle(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    rng = np.random.default_rng(2)
    worst = 0.0
    inp = PhotonConfig((2, 3))
    for draw in range(200):
        u = haar_unitary(3, 1000 + draw)
        d = DelaySpec((0.0, rng.uniform(-3, 3)), s=rng.choice([0.5, 1.0, 2.0]))
        for out in enumerate_all(3, 2):
            closed = rate_two_photon(u, inp, out, d).value
            worst = max(worst, abs(closed - rate_oracle(u, inp, out, d)))
    return Criterion("two_photon_oracle", "two-photon closed form vs oracle", worst < b,
                     f"max diff {worst:.3g} over 200 draws x 6 outputs, bound {b:g}")


def _sum_criterion(side: str, b: float) -> tuple[float, int]:
    rng = np.random.default_rng(3 if side == "output" else 4)
    worst, witnessed = 0.0, 0
    fixed = PhotonConfig((2, 3))
    for draw in range(100):
        u = haar_unitary(3, 2000 + draw)
        witness = False
        for d in (DelaySpec((0.0, 0.0)), DelaySpec((0.0, rng.uniform(-3, 3)))):
            spec = SumSpec(side, 3, 2, delays=d)
            rep = (sum_over_outputs if side == "output" else sum_over_inputs)(u, fixed, spec)
            worst = max(worst, rep.discrepancy)
            witness |= rep.max_term_discrepancy > 1e-3
        witnessed += witness
    return worst, witnessed


def output_sum_n3(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    worst, witnessed = _sum_criterion("output", b)
    return Criterion("output_sum_n3", "output sum rule, 2 photons / 3 modes",
                     worst < b and witnessed >= 90,
                     f"max |sum U - sum Ubar| {worst:.3g} (bound {b:g}); term witness on {witnessed}/100")


def input_sum_n3(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    worst, witnessed = _sum_criterion("input", b)
    return Criterion("input_sum_n3", "input sum rule, 2 photons / 3 modes", worst < b,
                     f"max |sum U - sum Utilde| {worst:.3g} (bound {b:g}); term witness on {witnessed}/100")


def coset_pattern_n4(tol=None) -> Criterion:
    bz, br = _bound(1e-11, tol), _bound(1e-10, tol)
    zmax = rmax = 0.0
    for draw in range(100):
        u = haar_unitary(4, 3000 + draw)
        f = factor_output_coset(u)
        c = f.coset
        zmax = max(zmax, abs(c[0, 2]), abs(c[0, 3]), abs(c[1, 3]))
        rmax = max(rmax, check_factorization(f, u)["reconstruction_error"])
    return Criterion("coset_pattern_n4", "four-mode coset zero pattern", zmax < bz and rmax < br,
                     f"max |Ubar13|,|Ubar14|,|Ubar24| {zmax:.3g} (bound {bz:g}); reconstruction {rmax:.3g} (bound {br:g})")


def perm_det_sum(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    worst = 0.0
    inp = PhotonConfig((2, 3, 4))
    spec = SumSpec("output", 4, 3)
    t0 = time.perf_counter()
    for draw in range(50):
        u = haar_unitary(4, 4000 + draw)
        full = sum_over_outputs(u, inp, spec, method="ryser")
        mixed = sum_over_outputs(u, inp, spec, method="both")
        a, c_ryser, c_det = full.sum_full, full.sum_coset, mixed.sum_coset
        worst = max(worst, abs(a - c_ryser), abs(a - c_det), abs(c_ryser - c_det))
    secs = time.perf_counter() - t0
    return Criterion("perm_det_sum", "permanent sum = determinant sum", worst < b,
                     f"pairwise max {worst:.3g} (bound {b:g}), {secs:.2f}s for 50 draws")


def hessenberg_per_det(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    rng = np.random.default_rng(7)
    ok, worst = True, 0.0
    for k in range(100):
        n = 3 + k % 6
        h = random_upper_hessenberg(n, int(rng.integers(2**32)))
        fast = permanent_hessenberg(h)
        for ref in (permanent_naive(h), permanent_ryser(h)):
            ok &= rel_close(fast, ref, b)
            worst = max(worst, abs(fast - ref) / max(1.0, abs(ref)))
    return Criterion("hessenberg_per_det", "Hessenberg Per = Det(T)", ok,
                     f"max relative diff {worst:.3g}, bound {b:g}")


def three_photon(tol=None) -> Criterion:
    b, b0 = _bound(1e-9, tol), _bound(1e-11, tol)
    rng = np.random.default_rng(8)
    inp = PhotonConfig((2, 3, 4))
    doubled = distinct = collapse = 0.0
    outputs = enumerate_all(4, 3)
    for draw in range(100):
        u = haar_unitary(4, 5000 + draw)
        d = DelaySpec((0.0, 0.0, rng.uniform(-3, 3)))
        for out in outputs:
            diff = abs(rate_three_photon_partial(u, inp, out, d).value - rate_oracle(u, inp, out, d))
            if out.distinct:
                distinct = max(distinct, diff)
            else:
                doubled = max(doubled, diff)
            zero = rate_three_photon_partial(u, inp, out, DelaySpec((0.0, 0.0, 0.0))).value
            per = permanent_naive(scattering_submatrix(u, inp, out))
            collapse = max(collapse, abs(zero - float(out.c_factor) * abs(per) ** 2))
    ok = doubled < b and distinct < b and collapse < b0
    return Criterion("three_photon", "three-photon partial rates", ok,
                     f"doubled {doubled:.3g}, distinct (reconstructed) {distinct:.3g} (bound {b:g}); "
                     f"collapse {collapse:.3g} (bound {b0:g})")


S3_EXPECTED = {
    (3,): {(1, 1, 1): 1, (2, 1): 1, (3,): 1},
    (2, 1): {(1, 1, 1): 2, (2, 1): 0, (3,): -1},
    (1, 1, 1): {(1, 1, 1): 1, (2, 1): -1, (3,): 1},
}


def character_tables(tol=None) -> Criterion:
    t3 = characters(3)
    got = {lam.parts: {mu.parts: t3(lam, mu) for mu in t3.classes} for lam in t3.irreps}
    t4 = characters(4)
    ortho = all(
        t4.inner(a, c) == (24 if a == c else 0) for a in t4.irreps for c in t4.irreps
    )
    sizes = sum(class_size(mu) for mu in t4.classes) == 24
    ok = got == S3_EXPECTED and ortho and sizes
    return Criterion("characters", "S3 table and S4 orthogonality", ok,
                     f"S3 matches: {got == S3_EXPECTED}; S4 orthogonal: {ortho}")


def immanant_identities(tol=None) -> Criterion:
    b = _bound(1e-12, tol)
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(50):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        expansion = 2 * m[0, 0] * m[1, 1] * m[2, 2] - m[0, 1] * m[1, 2] * m[2, 0] - m[0, 2] * m[1, 0] * m[2, 1]
        worst = max(
            worst,
            abs(immanant(m, Partition(3)) - permanent_naive(m)),
            abs(immanant(m, Partition(1, 1, 1)) - determinant(m)),
            abs(immanant(m, Partition(2, 1)) - expansion),
        )
    return Criterion("immanants", "immanant identities for 3x3", worst < b,
                     f"max diff {worst:.3g}, bound {b:g}")


def ryser_naive(tol=None) -> Criterion:
    b = _bound(1e-10, tol)
    rng = np.random.default_rng(11)
    worst = 0.0
    ok = True
    for n in range(2, 8):
        for _ in range(50):
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            r, p = permanent_ryser(m), permanent_naive(m)
            ok &= rel_close(r, p, b)
            worst = max(worst, abs(r - p) / max(1.0, abs(p)))
    return Criterion("ryser_naive", "Ryser vs naive permanent", ok,
                     f"max relative diff {worst:.3g}, bound {b:g}")


def checksum(value: complex) -> str:
    """Six significant digits of ``|value|``, enough to tie timings to results."""
    return f"{abs(value):.6e}"


def _best_time(fn, arg, repeats: int) -> tuple[float, complex]:
    best, out = float("inf"), 0j
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(arg)
        best = min(best, time.perf_counter() - t0)
    return best, out


def performance(tol=None) -> Criterion:
    speedup_min = 100.0
    limit = 60.0
    h18 = random_upper_hessenberg(18, 18)
    t_ryser, v_ryser = _best_time(permanent_ryser, h18, 2)
    t_det, v_det = _best_time(permanent_hessenberg, h18, 20)
    speed = t_ryser / t_det
    same = checksum(v_ryser) == checksum(v_det)
    h20 = random_upper_hessenberg(20, 20)
    t20, v20 = _best_time(permanent_ryser, h20, 1)
    same20 = checksum(v20) == checksum(permanent_hessenberg(h20))
    ok = speed >= speedup_min and same and t20 < limit and same20
    return Criterion("performance", "determinant route vs Ryser", ok,
                     f"n=18 speedup {speed:.0f}x (need {speedup_min:g}x), checksums match {same}; "
                     f"Ryser n=20 {t20:.2f}s (limit {limit:g}s), checksum match {same20}")


def total_probability(tol=None) -> Criterion:
    b = _bound(1e-8, tol)
    worst = 0.0
    for n, n_p in itertools.product((4, 5), (2, 3)):
        u = haar_unitary(n, 6000 + 10 * n + n_p)
        inp = PhotonConfig(range(1, n_p + 1))
        total = sum(rate_indistinguishable(u, inp, out).value for out in enumerate_all(n, n_p))
        worst = max(worst, abs(total - 1.0))
    return Criterion("total_probability", "total probability", worst < b,
                     f"max |sum - 1| {worst:.3g}, bound {b:g}")


CRITERIA: dict[str, Callable[..., Criterion]] = {
    "hom": hom,
    "two_photon_oracle": two_photon_oracle,
    "output_sum_n3": output_sum_n3,
    "input_sum_n3": input_sum_n3,
    "coset_pattern_n4": coset_pattern_n4,
    "perm_det_sum": perm_det_sum,
    "hessenberg_per_det": hessenberg_per_det,
    "three_photon": three_photon,
    "characters": character_tables,
    "immanants": immanant_identities,
    "ryser_naive": ryser_naive,
    "performance": performance,
    "total_probability": total_probability,
}


def run_criterion(key: str, tol: float | None = None) -> Criterion:
    t0 = time.perf_counter()
    result = CRITERIA[key](tol)
    result.seconds = time.perf_counter() - t0
    return result


def run_all(filter_: str | None = None, tol: float | None = None) -> list[Criterion]:
    keys = [k for k in CRITERIA if filter_ is None or filter_ in k]
    return [run_criterion(k, tol) for k in keys]
