"""Command-line entry point: ``photonsums {factorize,rate,sumcheck,bench,selftest}``.

Exit codes: 0 success, 2 parse failure, 3 dimension error, 4 sum-rule
invariance failure (1 for a failed selftest).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import acceptance
from .coset import check_factorization, factor_input_coset, factor_output_coset
from .linalg import haar_unitary, load_matrix, matrix_to_json, random_upper_hessenberg
from .matfun import permanent_hessenberg, permanent_ryser
from .rates import DelaySpec, PhotonConfig, rate, rate_oracle
from .sumrules import SumSpec, sum_over_inputs, sum_over_outputs

EXIT_OK, EXIT_SELFTEST, EXIT_PARSE, EXIT_DIMENSION, EXIT_INVARIANCE = 0, 1, 2, 3, 4


class ParseError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {text!r}") from None


def _matrix(args) -> np.ndarray:
    if (args.matrix is None) == (args.haar is None):
        raise ParseError("give exactly one of --matrix or --haar")
    if args.haar is not None:
        return haar_unitary(args.haar, args.seed)
    try:
        return load_matrix(args.matrix)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise ParseError(f"cannot read matrix from {args.matrix}: {exc}") from None


def _delays(args, n_photons: int) -> DelaySpec:
    taus = _float_list(args.tau) if args.tau else [0.0] * n_photons
    if len(taus) != n_photons:
        raise ValueError(f"{len(taus)} delays for {n_photons} photons")
    return DelaySpec(taus, args.s)


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return value


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _complex(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def cmd_factorize(args) -> int:
    u = _matrix(args)
    if args.side == "output":
        f = factor_output_coset(u, swap_zero_row=args.swap_zero_row)
    else:
        f = factor_input_coset(u)
    report = check_factorization(f, u)
    rotations = [
        {"i": r.mode_i, "j": r.mode_j, "alpha": r.alpha, "beta": r.beta, "gamma": r.gamma}
        for r in f.rotations
    ]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "alpha", "beta", "gamma"])
        for r in rotations:
            w.writerow([r["i"], r["j"], repr(r["alpha"]), repr(r["beta"]), repr(r["gamma"])])
        sys.stdout.write(buf.getvalue())
        return EXIT_OK
    out = {
        "side": f.side,
        "n": f.n,
        "rotations": rotations,
        "coset": matrix_to_json(f.coset),
        "zero_pattern": {
            "entries": [
                {"i": i, "j": j, "abs": float(abs(f.coset[i - 1, j - 1]))}
                for i, j in f.eliminated_entries()
            ],
            "max_abs": report["max_eliminated"],
        },
        "reconstruction_error": report["reconstruction_error"],
        "removed_parameter_count": f.removed_parameter_count,
        "nonunitary": f.nonunitary,
    }
    print(_dump(out))
    return EXIT_OK


def cmd_rate(args) -> int:
    u = _matrix(args)
    inp, out = PhotonConfig(_int_list(args.input)), PhotonConfig(_int_list(args.output))
    delays = _delays(args, len(inp))
    if args.method == "oracle":
        result = {"value": rate_oracle(u, inp, out, delays), "method": "oracle"}
    else:
        r = rate(u, inp, out, delays, method=args.method)
        result = {
            "value": r.value,
            "method": r.method,
            "decomposition": {str(k): _complex(v) for k, v in r.decomposition.items()},
        }
    print(_dump(result))
    return EXIT_OK


def cmd_sumcheck(args) -> int:
    u = _matrix(args)
    n = u.shape[0]
    if args.side == "output":
        if not args.input:
            raise ParseError("--input is required for output-side sums")
        fixed_cfg = PhotonConfig(_int_list(args.input))
    else:
        if not args.output:
            raise ParseError("--output is required for input-side sums")
        fixed_cfg = PhotonConfig(_int_list(args.output))
    delays = _delays(args, len(fixed_cfg))
    spec = SumSpec(args.side, n, len(fixed_cfg), fixed_mode=args.fixed_mode, delays=delays)
    fn = sum_over_outputs if args.side == "output" else sum_over_inputs
    rep = fn(u, fixed_cfg, spec, method=args.method, tol=args.tolerance)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["config", "rate_full", "rate_coset", "method"])
        for t in rep.terms:
            w.writerow([" ".join(map(str, t.config.modes)), repr(t.rate_full), repr(t.rate_coset), t.method])
        sys.stdout.write(buf.getvalue())
    else:
        out = {
            "side": rep.side,
            "sum_full": rep.sum_full,
            "sum_coset": rep.sum_coset,
            "discrepancy": rep.discrepancy,
            "max_term_discrepancy": rep.max_term_discrepancy,
            "method": rep.method,
            "tolerance": rep.tolerance,
            "invariant": rep.invariant,
            "terms": [
                {"config": list(t.config.modes), "rate_full": t.rate_full,
                 "rate_coset": t.rate_coset, "method": t.method}
                for t in rep.terms
            ],
        }
        if rep.sum_coset_ryser is not None:
            out["sum_coset_ryser"] = rep.sum_coset_ryser
        print(_dump(out))
    return EXIT_OK if rep.invariant else EXIT_INVARIANCE


def bench_rows(n_min: int, n_max: int, repeats: int, seed: int) -> list[tuple]:
    rows = []
    for n in range(n_min, n_max + 1):
        h = random_upper_hessenberg(n, seed + n)
        for name, fn in (("ryser", permanent_ryser), ("hessenberg_det", permanent_hessenberg)):
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter_ns()
                value = fn(h)
                times.append(time.perf_counter_ns() - t0)
            rows.append((n, name, int(np.mean(times)), acceptance.checksum(value)))
    return rows


def cmd_bench(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "method", "mean_ns", "result_checksum"])
    for row in bench_rows(args.n_min, args.n_max, args.repeats, args.seed):
        w.writerow(row)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = acceptance.run_all(args.filter, args.tolerance)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST


def _add_matrix_source(p):
    p.add_argument("--matrix", help="matrix JSON file {rows, cols, data: [[re, im], ...]}")
    p.add_argument("--haar", type=int, metavar="N", help="Haar-random N x N unitary")
    p.add_argument("--seed", type=int, default=0, help="seed for --haar (default 0)")


def _add_delays(p):
    p.add_argument("--tau", help="comma-separated delay per input photon")
    p.add_argument("--s", type=float, default=1.0, help="spectral width (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonsums", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="coset factorization of a matrix")
    _add_matrix_source(p)
    p.add_argument("--side", choices=["output", "input"], default="output")
    p.add_argument("--swap-zero-row", action="store_true",
                   help="output side: move the last-column zero to row 2")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("rate", help="coincidence rate of one process")
    _add_matrix_source(p)
    p.add_argument("--input", required=True, help="input modes, e.g. 2,3")
    p.add_argument("--output", required=True, help="output modes, e.g. 1,3")
    _add_delays(p)
    p.add_argument("--method", choices=["auto", "ryser", "hessenberg_det", "naive", "oracle"],
                   default="auto")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sumcheck", help="compare a sum of rates for U and its coset matrix")
    _add_matrix_source(p)
    p.add_argument("--side", choices=["output", "input"], default="output")
    p.add_argument("--input", help="fixed input modes (output-side sums)")
    p.add_argument("--output", help="fixed output modes (input-side sums)")
    p.add_argument("--fixed-mode", type=int, default=None, help="always-occupied mode (default n)")
    _add_delays(p)
    p.add_argument("--method", choices=["auto", "ryser", "both"], default="auto")
    p.add_argument("--tolerance", type=_positive, default=1e-9)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_sumcheck)

    p = sub.add_parser("bench", help="Ryser vs Hessenberg-determinant timings (CSV)")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--filter", help="only criteria whose key contains this text")
    p.add_argument("--tolerance", type=_positive, default=None,
                   help="replace every numeric bound with this value")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION


if __name__ == "__main__":
    sys.exit(main())
