"""Command-line driver.

Subcommands construct point sets, verify the exponential-sum bounds,
estimate worst-case errors, evaluate the complexity bound, run convergence
experiments, and calibrate the prime-band density constants.  All numeric
defaults live in one place here and are echoed into every structured output
file, so runs are reproducible from their artifacts alone.

Exit codes: 0 success (and verification passed), 1 verification failure,
2 usage/domain error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CapacityError, DomainError
from .exposums import verify_corollary, verify_lemma
from .pointsets import composite_point_set, write_pointset
from .primes import DEFAULT_C_P, calibrate_density
from .testfns import convergence_experiment, load_integrand, write_experiment_csv
from .wce import info_complexity_bound, wce_csv_row, wce_truncated, wce_upper, WCE_CSV_HEADER

ENV_C_P = "KOROBOVQMC_CP"

DEFAULTS = {
    "c_p": DEFAULT_C_P,
    "K": 50,
    "m_max": 100_000,
    "sample": 1000,
    "seed": 0,
    "kmax": 10**6,
}


def _default_c_p() -> float:
    raw = os.environ.get(ENV_C_P)
    if raw is None:
        return DEFAULTS["c_p"]
    try:
        return float(raw)
    except ValueError as exc:
        raise DomainError(f"invalid {ENV_C_P}={raw!r}") from exc


def _int_list(text: str) -> list[int]:
    """Parse '8,16,32' or a range '3..101' into a list of ints."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok]


def _prime_list(text: str) -> list[int]:
    """Like _int_list, but a range means 'the primes in that range'."""
    values = _int_list(text)
    if ".." in text:
        from .primes import is_prime

        values = [p for p in values if is_prime(p)]
    return values


def _k_radius(text: str):
    return None if text.strip().lower() == "exhaustive" else int(text)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit(payload: dict, path) -> None:
    out, close = _open_out(path)
    try:
        out.write(json.dumps(payload, sort_keys=True, indent=2))
        out.write("\n")
    finally:
        if close:
            out.close()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="korobovqmc",
        description="Composite Korobov p-set QMC rules and their error bounds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ps = sub.add_parser("pointset", help="write a composite point set as text")
    ps.add_argument("--family", required=True, choices=("S", "T", "U"))
    ps.add_argument("--M", required=True, type=int)
    ps.add_argument("--d", required=True, type=int)
    ps.add_argument("-o", "--output", default=None)

    cal = sub.add_parser("calibrate", help="scan prime-band density ratios")
    cal.add_argument("--m-max", type=int, default=DEFAULTS["m_max"])
    cal.add_argument("-o", "--output", default=None)

    ver = sub.add_parser("verify", help="verify exponential-sum bounds")
    ver.add_argument(
        "--mode",
        required=True,
        choices=("lemma", "corollary_cp", "corollary_exact"),
    )
    ver.add_argument("--family", required=True, choices=("S", "T", "U"))
    ver.add_argument("--p", default=None, help="primes, e.g. 3..101 or 3,5,7")
    ver.add_argument("--M", default=None, help="band parameters, e.g. 8,16,32")
    ver.add_argument("--d", required=True, help="dimensions, e.g. 2 or 2,3")
    ver.add_argument(
        "--K",
        default="exhaustive",
        help="box radius (integer) or 'exhaustive' for K = p",
    )
    ver.add_argument("--kmax", type=int, default=DEFAULTS["kmax"])
    ver.add_argument("--sample", type=int, default=DEFAULTS["sample"])
    ver.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    ver.add_argument("--cp", type=float, default=None)
    ver.add_argument("-o", "--output", default=None)

    wc = sub.add_parser("wce", help="two-sided worst-case error estimate")
    wc.add_argument("--family", required=True, choices=("S", "T", "U"))
    wc.add_argument("--M", required=True, type=int)
    wc.add_argument("--d", required=True, type=int)
    wc.add_argument("--K", type=int, default=DEFAULTS["K"])
    wc.add_argument("--cp", type=float, default=None)
    wc.add_argument("--sample", type=int, default=None)
    wc.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    wc.add_argument("-o", "--output", default=None)
    wc.add_argument("--csv", default=None, help="also write the sweep CSV row")

    cx = sub.add_parser("complexity", help="information-complexity bound")
    cx.add_argument("--eps", required=True, type=float)
    cx.add_argument("--d", required=True, type=int)
    cx.add_argument("--cp", type=float, default=None)
    cx.add_argument("-o", "--output", default=None)

    cv = sub.add_parser("converge", help="convergence experiment CSV")
    cv.add_argument("--family", required=True, choices=("S", "T", "U"))
    cv.add_argument("--d", required=True, type=int)
    cv.add_argument("--M", required=True, help="ascending list, e.g. 8,16,32")
    cv.add_argument("--integrand", required=True, help="integrand JSON path")
    cv.add_argument("--cp", type=float, default=None)
    cv.add_argument("-o", "--output", default=None)

    return parser


def _cmd_pointset(args) -> int:
    cps = composite_point_set(args.family, args.M, args.d)
    out, close = _open_out(args.output)
    try:
        write_pointset(cps, out)
    finally:
        if close:
            out.close()
    return 0


def _cmd_calibrate(args) -> int:
    result = calibrate_density(args.m_max)
    config = {"subcommand": "calibrate", "m_max": args.m_max}
    _emit({"config": config, "result": result.to_json_dict()}, args.output)
    return 0


def _cmd_verify(args) -> int:
    c_p = args.cp if args.cp is not None else _default_c_p()
    if args.mode == "lemma":
        if args.p is None:
            raise DomainError("lemma mode needs --p")
        report = verify_lemma(
            args.family,
            _prime_list(args.p),
            _int_list(args.d),
            K=_k_radius(args.K),
            sample=args.sample,
            seed=args.seed,
        )
    else:
        if args.M is None:
            raise DomainError("corollary modes need --M")
        mode = "corollary_cP" if args.mode == "corollary_cp" else args.mode
        report = verify_corollary(
            args.family,
            _int_list(args.M),
            _int_list(args.d),
            mode=mode,
            kmax=args.kmax,
            sample=args.sample,
            seed=args.seed,
            c_P=c_p,
        )
    config = {
        "subcommand": "verify",
        "mode": args.mode,
        "family": args.family,
        "p": args.p,
        "M": args.M,
        "d": args.d,
        "K": args.K,
        "kmax": args.kmax,
        "sample": args.sample,
        "seed": args.seed,
        "c_p": c_p,
    }
    _emit({"config": config, "report": report.to_json_dict()}, args.output)
    return 0 if report.passed else 1


def _cmd_wce(args) -> int:
    c_p = args.cp if args.cp is not None else _default_c_p()
    bounds = wce_upper(args.family, args.M, args.d, c_p)
    cps = composite_point_set(args.family, args.M, args.d)
    estimate = wce_truncated(cps, args.K, sample=args.sample, seed=args.seed)
    config = {
        "subcommand": "wce",
        "family": args.family,
        "M": args.M,
        "d": args.d,
        "K": args.K,
        "c_p": c_p,
        "sample": args.sample,
        "seed": args.seed,
    }
    payload = {
        "config": config,
        "bounds": bounds.to_json_dict(),
        "estimate": estimate.to_json_dict(),
    }
    _emit(payload, args.output)
    if args.csv is not None:
        out, close = _open_out(args.csv)
        try:
            out.write(WCE_CSV_HEADER + "\n")
            out.write(wce_csv_row(bounds, estimate) + "\n")
        finally:
            if close:
                out.close()
    return 0


def _cmd_complexity(args) -> int:
    c_p = args.cp if args.cp is not None else _default_c_p()
    value = info_complexity_bound(args.eps, args.d, c_p)
    if args.output is None:
        print(value)
    else:
        config = {
            "subcommand": "complexity",
            "eps": args.eps,
            "d": args.d,
            "c_p": c_p,
        }
        _emit({"config": config, "bound": value}, args.output)
    return 0


def _cmd_converge(args) -> int:
    if not os.path.exists(args.integrand):
        raise DomainError(f"integrand file not found: {args.integrand}")
    c_p = args.cp if args.cp is not None else _default_c_p()
    f = load_integrand(args.integrand)
    rows = convergence_experiment(
        args.family, args.d, _int_list(args.M), f, c_P=c_p
    )
    out, close = _open_out(args.output)
    try:
        write_experiment_csv(rows, out)
    finally:
        if close:
            out.close()
    return 0


_HANDLERS = {
    "pointset": _cmd_pointset,
    "calibrate": _cmd_calibrate,
    "verify": _cmd_verify,
    "wce": _cmd_wce,
    "complexity": _cmd_complexity,
    "converge": _cmd_converge,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.subcommand](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
