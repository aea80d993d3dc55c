"""Batch command-line interface.

Exit status: 0 success, 1 data or numerical failure, 2 usage error.
Numbers in results are printed with 12 significant digits; generated
datasets are written with the shortest exact round-trip representation.
"""

import argparse
import io
import json
import math
import sys

from . import __version__
from .corr import DegenerateRule, PrefixPolicy
from .data import SignPattern, add_noise, gen_fc, gen_fu, read_csv, write_csv
from .exceptions import ExtCorrError, ParameterError, UnknownColumnError
from .rho import RhoMode, lambda_trace, noise_report, rank_subsets, rho_extended

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def fmt(x):
    """12 significant digits, trailing zeros dropped."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _json_number(x):
    if isinstance(x, float):
        return None if math.isnan(x) else float(fmt(x))
    return x


def _dump_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv_lines(header, rows):
    out = [",".join(header)]
    out.extend(",".join(fmt(v) if not isinstance(v, str) else v for v in row) for row in rows)
    return "\n".join(out) + "\n"


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _policy(args):
    try:
        return PrefixPolicy(args.min_prefix, getattr(args, "degenerate", "skip"))
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def cmd_gen(args):
    if args.vars < 2:
        raise UsageError("--vars must be >= 2")
    if args.kind == "fc":
        text = args.pattern if args.pattern is not None else "+" * args.vars
        try:
            pattern = SignPattern.parse(text)
        except ParameterError as exc:
            raise UsageError(f"--pattern: {exc}") from None
        if len(pattern) != args.vars:
            raise UsageError(f"--pattern has {len(pattern)} signs but --vars is {args.vars}")
        if args.rows < 3:
            raise UsageError("--rows must be >= 3 for fc")
        data = gen_fc(pattern, args.rows, args.seed)
    else:
        if args.pattern is not None:
            raise UsageError("--pattern only applies to fc")
        if args.rows <= args.vars:
            raise UsageError("--rows must exceed --vars for fu")
        data = gen_fu(args.vars, args.rows, args.seed)
    if args.noise:
        noise_seed = args.noise_seed if args.noise_seed is not None else (args.seed + 1) % 2**64
        columns = args.noise_columns.split(",") if args.noise_columns else None
        data = add_noise(data, args.noise, noise_seed, columns)
    buf = io.StringIO()
    write_csv(data, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_corr(args):
    data = read_csv(args.input)
    result = rho_extended(data, RhoMode(args.mode), _policy(args))
    d = result.as_dict()
    if args.format == "json":
        text = _dump_json({"schema_version": SCHEMA_VERSION, **{k: _json_number(v) for k, v in d.items()}})
    else:
        text = _csv_lines(list(d), [list(d.values())])
    _emit(text, args.out)
    return EXIT_OK


def cmd_eigen_trace(args):
    data = read_csv(args.input)
    trace = lambda_trace(data, _policy(args))
    valid = trace.valid()
    mean = trace.mean_lambda() if valid else math.nan
    if args.format == "json":
        text = _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "n_vars": trace.n_vars,
                "entries": [
                    {
                        "prefix_length": e.prefix_length,
                        "lambda_max": _json_number(e.lambda_max),
                        "degenerate": e.degenerate,
                    }
                    for e in trace.entries
                ],
                "summary": {"mean": _json_number(mean), "count": len(valid)},
            }
        )
    else:
        text = _csv_lines(
            ["prefix_length", "lambda_max", "degenerate"],
            [[e.prefix_length, e.lambda_max, e.degenerate] for e in trace.entries],
        )
        text += f"# summary: mean={fmt(mean)} count={len(valid)}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_noise(args):
    data = read_csv(args.input)
    report = noise_report(data, args.target, RhoMode(args.mode), _policy(args))
    d = report.as_dict()
    if args.format == "json":
        text = _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "target": args.target,
                "mode": RhoMode(args.mode).value,
                **{k: _json_number(v) for k, v in d.items()},
            }
        )
    else:
        text = _csv_lines(list(d), [list(d.values())])
    _emit(text, args.out)
    return EXIT_OK


def cmd_rank(args):
    data = read_csv(args.input)
    ranking = rank_subsets(data, args.target, args.k, RhoMode(args.mode), _policy(args))
    if args.format == "json":
        text = _dump_json(
            {
                "schema_version": SCHEMA_VERSION,
                "target": args.target,
                "k": args.k,
                "mode": RhoMode(args.mode).value,
                "rows": [
                    {
                        "subset": list(s.subset),
                        "rho": _json_number(s.rho),
                        "predictor_noise": _json_number(s.predictor_noise),
                    }
                    for s in ranking
                ],
            }
        )
    else:
        text = _csv_lines(
            ["subset", "rho", "predictor_noise"],
            [["|".join(s.subset), s.rho, s.predictor_noise] for s in ranking],
        )
    _emit(text, args.out)
    return EXIT_OK


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _amplitude(text):
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError("must be a finite number >= 0")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="extcorr",
        description="Extended multivariable correlation from correlation-matrix spectra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add_out(p, formats=None, default=None):
        if formats:
            p.add_argument("--format", choices=formats, default=default,
                           help=f"output format (default: {default})")
        p.add_argument("--out", metavar="PATH", default=None,
                       help="output file (default: standard output)")

    def add_mode(p):
        p.add_argument("--mode", choices=[m.value for m in RhoMode], default="instant",
                       help="instant: full-table matrix; rolling: mean over prefixes "
                            "(default: instant)")

    def add_prefix(p):
        p.add_argument("--min-prefix", type=int, default=None, metavar="K",
                       help="first prefix length for rolling traces (default: n_vars + 1)")

    p = sub.add_parser("gen", help="generate a synthetic FC or FU dataset as CSV")
    p.add_argument("kind", choices=["fc", "fu"])
    p.add_argument("--vars", type=_positive_int, required=True, help="number of variables")
    p.add_argument("--rows", type=_positive_int, required=True, help="number of samples")
    p.add_argument("--pattern", default=None,
                   help="fc sign pattern over {+,-}, starting with + (default: all +)")
    p.add_argument("--seed", type=_seed, required=True, help="64-bit generator seed")
    p.add_argument("--noise", type=_amplitude, default=0.0, metavar="A",
                   help="add uniform noise on [-A, A] to every cell (default: 0)")
    p.add_argument("--noise-seed", type=_seed, default=None,
                   help="seed for the noise stream (default: seed + 1)")
    p.add_argument("--noise-columns", default=None, metavar="COLS",
                   help="comma-separated columns receiving noise (default: all)")
    add_out(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("corr", help="extended correlation coefficient of a CSV dataset")
    p.add_argument("input", help="input CSV file")
    add_mode(p)
    add_prefix(p)
    add_out(p, ["json", "csv"], "json")
    p.set_defaults(func=cmd_corr)

    p = sub.add_parser("eigen-trace", help="largest eigenvalue of every prefix correlation matrix")
    p.add_argument("input", help="input CSV file")
    add_prefix(p)
    p.add_argument("--degenerate", choices=[r.value for r in DegenerateRule], default="skip",
                   help="zero-variance prefixes: skip (flag them) or fail (default: skip)")
    add_out(p, ["csv", "json"], "csv")
    p.set_defaults(func=cmd_eigen_trace)

    p = sub.add_parser("noise", help="total, predictor and labeling noise for a target column")
    p.add_argument("input", help="input CSV file")
    p.add_argument("--target", required=True, help="label column")
    add_mode(p)
    add_prefix(p)
    add_out(p, ["json", "csv"], "json")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("rank", help="rank predictor subsets by correlation with a target")
    p.add_argument("input", help="input CSV file")
    p.add_argument("--target", required=True, help="label column")
    p.add_argument("--k", type=int, required=True, help="subset size")
    add_mode(p)
    add_prefix(p)
    add_out(p, ["csv", "json"], "csv")
    p.set_defaults(func=cmd_rank)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, UnknownColumnError, ParameterError) as exc:
        print(f"extcorr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExtCorrError, OSError) as exc:
        print(f"extcorr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - keep the exit-status contract
        print(f"extcorr {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
