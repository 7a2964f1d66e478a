"""Command-line interface.

Subcommands expose encoding, decoding, dimension computation, dimension
table grids, frequency-set dimensions, and Monte Carlo frequency
experiments. Every invocation is fully determined by its flags: with a
fixed seed the output is byte-identical across runs. Omitting the seed
randomizes it, and the chosen value is echoed in the output for replay.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from .codec import DigitWord, decode, encode
from .dimension import (
    DimensionResult,
    frequency_set_dimension,
    moran_dimension,
    moran_dimension_family,
)
from .distributions import Distribution, FrequencyTarget
from .errors import (
    ConvergenceError,
    DivergentSeriesError,
    PrecisionExhaustionError,
    TailExhaustionError,
    ValidationError,
)
from .stochastic import frequency_experiment

TABLE_PARAMS = {
    "geometric": (0.1, 0.25, 0.5, 0.75, 0.9),
    "poisson": (0.25, 0.5, 1.0, 2.0, 4.0),
    "zeta": (1.5, 2.0, 3.0, 4.0, 5.0),
}
TABLE_SIZES = (2, 3, 4, 5, 6)


def _dist_spec(text: str):
    """Parse 'family:param' into a constructor thunk; syntax errors only."""
    family, sep, param = text.partition(":")
    if not sep or not param:
        raise argparse.ArgumentTypeError(
            f"malformed dist spec {text!r}; expected family:param")
    if family in ("geometric", "poisson", "zeta"):
        try:
            value = float(param)
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"malformed dist spec {text!r}; parameter is not a number")
        ctor = {"geometric": Distribution.geometric,
                "poisson": Distribution.poisson,
                "zeta": Distribution.zeta}[family]
        return lambda: ctor(value)
    if family == "custom":
        def load():
            with open(param, "r", encoding="utf-8") as handle:
                return Distribution.from_json(handle.read())
        return load
    raise argparse.ArgumentTypeError(
        f"unknown family {family!r}; use geometric, poisson, zeta, or custom")


def _q_spec(text: str):
    kind, sep, param = text.partition(":")
    if kind == "self" and not sep:
        return ("self", None)
    if kind == "uniform" and sep:
        try:
            return ("uniform", int(param))
        except ValueError:
            pass
    if kind == "pointmass" and sep:
        try:
            return ("pointmass", int(param))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(
        f"malformed target spec {text!r}; expected uniform:<n>, "
        f"pointmass:<i>, or self")


def _fmt(value: float, digits: int | None) -> str:
    return repr(value) if digits is None else f"{value:.{digits}f}"


def _print_dimension(result: DimensionResult, args) -> None:
    if args.format == "json":
        print(json.dumps({
            "value": result.value,
            "bracket": list(result.bracket),
            "iterations": result.iterations,
            "residual": result.residual,
        }, sort_keys=True))
    else:
        print(f"value={_fmt(result.value, args.digits)} "
              f"bracket_lo={result.bracket[0]!r} bracket_hi={result.bracket[1]!r} "
              f"iterations={result.iterations} residual={result.residual!r}")


def _cmd_encode(args) -> int:
    dist = args.dist()
    word = encode(dist, args.x, args.k)
    interval = decode(dist, word)
    if args.format == "json":
        print(json.dumps({
            "digits": list(word.digits),
            "width": interval.width,
            "complete": len(word) == args.k,
        }, sort_keys=True))
    else:
        print(str(word))
        print(f"width={_fmt(interval.width, args.digits)}")
    return 0


def _cmd_decode(args) -> int:
    dist = args.dist()
    word = DigitWord.parse(args.word)
    interval = decode(dist, word)
    if args.format == "json":
        print(json.dumps({
            "lo": interval.lo,
            "width": interval.width,
            "upper": interval.upper,
        }, sort_keys=True))
    else:
        print(f"lo={_fmt(interval.lo, args.digits)} "
              f"width={_fmt(interval.width, args.digits)}")
    return 0


def _cmd_dim(args) -> int:
    dist = args.dist()
    if args.digit_set is not None:
        digits = [int(part) for part in args.digit_set.split(",") if part]
        result = moran_dimension(dist, digits, args.tol)
    else:
        result = moran_dimension_family(dist, args.n, args.tol)
    _print_dimension(result, args)
    return 0


def _cmd_tables(args) -> int:
    params = TABLE_PARAMS[args.family]
    ctor = {"geometric": Distribution.geometric,
            "poisson": Distribution.poisson,
            "zeta": Distribution.zeta}[args.family]
    rows = []
    for n in TABLE_SIZES:
        row = [moran_dimension_family(ctor(param), n).value for param in params]
        rows.append(row)
    if args.format == "json":
        records = [
            {"n": n, **{repr(p): round(v, 5) for p, v in zip(params, row)}}
            for n, row in zip(TABLE_SIZES, rows)
        ]
        print(json.dumps(records, sort_keys=True))
    else:
        print("n," + ",".join(repr(p) for p in params))
        for n, row in zip(TABLE_SIZES, rows):
            print(f"{n}," + ",".join(f"{v:.5f}" for v in row))
    return 0


def _cmd_freqdim(args) -> int:
    dist = args.dist()
    kind, param = args.q
    if kind == "self":
        target = FrequencyTarget.from_distribution(dist)
    elif kind == "uniform":
        target = FrequencyTarget.uniform(param)
    else:
        target = FrequencyTarget.point_mass(param)
    result = frequency_set_dimension(dist, target)
    _print_dimension(result, args)
    return 0


def _cmd_experiment(args) -> int:
    dist = args.dist()
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    report = frequency_experiment(dist, args.samples, args.k,
                                  digit_horizon=args.horizon, seed=seed)
    if args.format == "json":
        print(json.dumps({
            "seed": seed,
            "samples": report.samples,
            "k": report.k,
            "digit_horizon": report.digit_horizon,
            "total_digits": report.total_digits,
            "max_digit": report.max_digit,
            "out_of_horizon": report.out_of_horizon,
            "truncated_orbits": report.truncated_orbits,
            "exhausted_orbits": report.exhausted_orbits,
            "digits": [
                {"digit": n, "target_p": t, "empirical": f, "abs_deviation": abs(f - t)}
                for n, (t, f) in enumerate(
                    zip(report.targets, report.frequencies), start=1)
            ],
        }, sort_keys=True))
    else:
        print(f"# seed={seed}")
        print(f"# samples={report.samples} k={report.k} "
              f"total_digits={report.total_digits} max_digit={report.max_digit}")
        print(report.to_csv(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probdigits",
        description="Digit representations of reals induced by probability "
                    "distributions on the positive integers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_dist=True, formats=("plain", "json")):
        if with_dist:
            p.add_argument("--dist", type=_dist_spec, required=True,
                           help="distribution spec: geometric:<p>, poisson:<lambda>, "
                                "zeta:<s>, or custom:<path.json>")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--digits", type=int, default=None,
                       help="fixed decimal places (default: shortest round-trip)")

    p = sub.add_parser("encode", help="digits of a real in [0, 1)")
    add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="cylinder interval of a digit word")
    add_common(p)
    p.add_argument("--word", required=True,
                   help="comma-separated digits, empty string for the unit interval")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("dim", help="dimension of a digit-restricted set")
    add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="digit set {1..n}")
    group.add_argument("--set", dest="digit_set",
                       help="explicit digit set, comma-separated")
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("tables", help="dimension grid over n = 2..6 and the "
                                      "standard parameter values")
    add_common(p, with_dist=False, formats=("csv", "json"))
    p.add_argument("--family", choices=tuple(TABLE_PARAMS), required=True)
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("freqdim", help="dimension of a prescribed-frequency set")
    add_common(p)
    p.add_argument("--q", type=_q_spec, required=True,
                   help="target spec: uniform:<n>, pointmass:<i>, or self")
    p.set_defaults(func=_cmd_freqdim)

    p = sub.add_parser("experiment", help="Monte Carlo digit-frequency check")
    add_common(p, formats=("csv", "json"))
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DivergentSeriesError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValidationError, TailExhaustionError, PrecisionExhaustionError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
