"""Command-line front end.

Subcommands: bm, ou, ou-td, growth, gbm, reproduce.  Boundaries and
time-dependent coefficients are given as expressions in t (see expr.py);
output is JSON (default), CSV, or plot-data samples of the original and
transformed boundaries.

Exit codes: 0 success, 2 argument/parse error, 3 numeric failure,
4 invalid boundary or band.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .boundary import GeneralBoundary, uniform_partition
from .errors import (
    BcpError,
    EvaluationError,
    ExprSyntaxError,
    InvalidBoundariesError,
    InvalidDomainError,
    NumericFailureError,
    StartOutsideBandError,
)
from .expr import parse_boundary
from .kernels import SeriesConfig
from .mc import McConfig, estimate_bcp_bracketed
from .transforms import (
    GBMSpec,
    GrowthSpec,
    OUSpec,
    ReducedProblem,
    TimeVaryingOUSpec,
    reduce,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_BAND = 4


@dataclass(frozen=True)
class RunReport:
    request: dict
    results: dict
    timing_ms: float
    version: str
    curves: dict | None = None  # t/value samples for plot-data output

    def to_dict(self) -> dict:
        return {
            "request": self.request,
            "results": self.results,
            "timing_ms": self.timing_ms,
            "version": self.version,
        }


_CSV_FIELDS = [
    "process",
    "lower",
    "upper",
    "T",
    "n",
    "paths",
    "seed",
    "series_terms",
    "envelope_samples",
    "mean",
    "std_error",
    "bracket_lower",
    "bracket_upper",
    "bracket_width",
    "timing_ms",
    "version",
]


def emit(report: RunReport, fmt: str = "json") -> bytes:
    """Serialize a report; field order is fixed per format."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode()
    if fmt == "csv":
        row = {
            "process": report.request.get("process"),
            "lower": report.request.get("lower"),
            "upper": report.request.get("upper"),
            "T": report.request.get("T"),
            "n": report.request.get("n"),
            "paths": report.request.get("paths"),
            "seed": report.request.get("seed"),
            "series_terms": report.request.get("series_terms"),
            "envelope_samples": report.request.get("envelope_samples"),
            "mean": report.results.get("mean"),
            "std_error": report.results.get("std_error"),
            "bracket_lower": report.results.get("lower"),
            "bracket_upper": report.results.get("upper"),
            "bracket_width": report.results.get("bracket_width"),
            "timing_ms": report.timing_ms,
            "version": report.version,
        }
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerow(row)
        return buf.getvalue().encode()
    if fmt == "plot-data":
        lines = []
        for name, (ts, vs) in (report.curves or {}).items():
            lines.append(f"# {name}")
            lines.append("t,value")
            for t, v in zip(ts, vs):
                lines.append(f"{t!r},{v!r}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown output format {fmt!r}")


def _boundary_from_text(text: str, side: str, T: float) -> GeneralBoundary | None:
    expr = parse_boundary(text)
    if expr.is_constant_inf:
        v = expr(0.0)
        want = -math.inf if side == "lower" else math.inf
        if v != want:
            raise InvalidBoundariesError(
                f"{side} boundary cannot be {'+' if v > 0 else '-'}inf"
            )
        return None
    return GeneralBoundary(expr, side, T, finite=True)


def _curve_samples(gb: GeneralBoundary | None, T: float, points: int = 129):
    ts = np.linspace(0.0, T, points)
    if gb is None:
        return None
    return [float(t) for t in ts], [gb(float(t)) for t in ts]


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lower", default="-inf", help="lower boundary expression in t")
    p.add_argument("--upper", default="inf", help="upper boundary expression in t")
    p.add_argument("--T", type=float, required=True, help="time horizon")
    p.add_argument("--n", type=int, default=128, help="partition subintervals")
    p.add_argument("--paths", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, required=True, help="RNG seed (no silent entropy)")
    p.add_argument("--series-terms", type=int, default=6)
    p.add_argument("--envelope-samples", type=int, default=50)
    p.add_argument("--chunk-size", type=int, default=4_096)
    p.add_argument("--antithetic", action="store_true")
    p.add_argument("--format", choices=["json", "csv", "plot-data"], default="json")
    p.add_argument("--output", default="-", help="output file, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcp",
        description="Boundary crossing probabilities for Brownian motion "
        "and reducible diffusions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bm = sub.add_parser("bm", help="standard Brownian motion")
    _common_flags(p_bm)

    p_ou = sub.add_parser("ou", help="mean-reverting process, constant coefficients")
    _common_flags(p_ou)
    p_ou.add_argument("--kappa", type=float, required=True)
    p_ou.add_argument("--alpha", type=float, required=True)
    p_ou.add_argument("--sigma2", type=float, required=True, help="diffusion variance")
    p_ou.add_argument("--x0", type=float, required=True)

    p_outd = sub.add_parser("ou-td", help="mean reversion with t-dependent coefficients")
    _common_flags(p_outd)
    p_outd.add_argument("--kappa-fn", required=True, help="expression in t")
    p_outd.add_argument("--alpha-fn", required=True, help="expression in t")
    p_outd.add_argument("--sigma-fn", required=True, help="expression in t")
    p_outd.add_argument("--x0", type=float, required=True)

    p_gr = sub.add_parser("growth", help="Gompertz-type growth process")
    _common_flags(p_gr)
    p_gr.add_argument("--alpha", type=float, required=True)
    p_gr.add_argument("--beta", type=float, required=True)
    p_gr.add_argument("--sigma", type=float, required=True)
    p_gr.add_argument("--x0", type=float, required=True)

    p_gbm = sub.add_parser("gbm", help="geometric Brownian motion")
    _common_flags(p_gbm)
    p_gbm.add_argument("--sigma", type=float, required=True)
    p_gbm.add_argument("--rate", required=True, help="rate expression in t, or a number")
    p_gbm.add_argument("--x0", type=float, required=True)

    p_rep = sub.add_parser("reproduce", help="rerun the published benchmark table")
    p_rep.add_argument("table", choices=["paper7"])
    p_rep.add_argument("--paths", type=int, default=1_000_000)
    p_rep.add_argument("--seed", type=int, default=1)
    p_rep.add_argument("--format", choices=["json", "table"], default="table")
    return parser


def _build_spec(args: argparse.Namespace):
    if args.command == "ou":
        return OUSpec(
            x0=args.x0,
            kappa=args.kappa,
            alpha=args.alpha,
            sigma=math.sqrt(args.sigma2),
        )
    if args.command == "ou-td":
        return TimeVaryingOUSpec(
            x0=args.x0,
            kappa=parse_boundary(args.kappa_fn),
            alpha=parse_boundary(args.alpha_fn),
            sigma=parse_boundary(args.sigma_fn),
        )
    if args.command == "growth":
        return GrowthSpec(x0=args.x0, alpha=args.alpha, beta=args.beta, sigma=args.sigma)
    if args.command == "gbm":
        try:
            rate = float(args.rate)
        except ValueError:
            rate = parse_boundary(args.rate)
        return GBMSpec(x0=args.x0, sigma=args.sigma, rate=rate)
    return None  # plain Brownian motion


def run_request(args: argparse.Namespace) -> RunReport:
    start = time.perf_counter()
    a = _boundary_from_text(args.lower, "lower", args.T)
    b = _boundary_from_text(args.upper, "upper", args.T)
    if a is None and b is None:
        raise InvalidBoundariesError(
            "upper boundary must be finite or the problem is trivial "
            "(P=1 when both boundaries are infinite)"
        )
    spec = _build_spec(args)
    if spec is None:
        reduced = ReducedProblem(
            lower=a if a is not None else GeneralBoundary.infinite("lower", args.T),
            upper=b if b is not None else GeneralBoundary.infinite("upper", args.T),
            horizon=args.T,
            time_map=lambda s: s,
            provenance={"family": "bm", "T": args.T},
        )
    else:
        reduced = reduce(spec, a, b, args.T)

    p = uniform_partition(reduced.horizon, args.n)
    cfg = McConfig(
        paths=args.paths,
        seed=args.seed,
        chunk_size=args.chunk_size,
        series=SeriesConfig(max_terms=args.series_terms),
        antithetic=args.antithetic,
    )
    lower = reduced.lower if reduced.lower.finite else None
    upper = reduced.upper if reduced.upper.finite else None
    est = estimate_bcp_bracketed(lower, upper, p, args.envelope_samples, cfg)

    elapsed_ms = (time.perf_counter() - start) * 1e3
    request = {
        "process": args.command,
        "lower": args.lower,
        "upper": args.upper,
        "T": args.T,
        "n": args.n,
        "paths": args.paths,
        "seed": args.seed,
        "series_terms": args.series_terms,
        "envelope_samples": args.envelope_samples,
        "chunk_size": args.chunk_size,
        "antithetic": args.antithetic,
    }
    for name in ("kappa", "alpha", "beta", "sigma", "sigma2", "x0", "rate",
                 "kappa_fn", "alpha_fn", "sigma_fn"):
        if hasattr(args, name.replace("-", "_")):
            request[name] = getattr(args, name.replace("-", "_"))
    results = {
        "mean": est.mean,
        "std_error": est.std_error,
        "lower": est.bracket[0],
        "upper": est.bracket[1],
        "bracket_width": est.bracket_width,
    }
    if est.series_cap_hit:
        results["series_cap_hit"] = True
    curves = {}
    for name, gb in (("original_lower", a), ("original_upper", b)):
        s = _curve_samples(gb, args.T)
        if s:
            curves[name] = s
    for name, gb in (
        ("transformed_lower", lower),
        ("transformed_upper", upper),
    ):
        s = _curve_samples(gb, reduced.horizon)
        if s:
            curves[name] = s
    return RunReport(
        request=request,
        results=results,
        timing_ms=elapsed_ms,
        version=__version__,
        curves=curves,
    )


# The four published benchmark runs: process, argument vector.
_PAPER7_CASES = [
    (
        "mean-reverting, constant barrier",
        ["ou", "--kappa", "0.5", "--alpha", "0", "--sigma2", "1", "--x0", "0",
         "--upper", "1", "--T", "1"],
        0.721463,
    ),
    (
        "growth, constant barrier",
        ["growth", "--alpha", "0.5", "--beta", "0.5", "--sigma", "1", "--x0", "1",
         "--upper", "exp(1)", "--T", "1"],
        0.721463,
    ),
    (
        "geometric BM, knock-in barrier",
        ["gbm", "--sigma", "0.1", "--rate", "0.1+0.05*exp(-t)", "--x0", "10",
         "--upper", "12", "--T", "1"],
        0.603728,
    ),
    (
        "Brownian motion, Daniels barrier",
        ["bm", "--upper", "0.5 - t*log(0.25+0.25*sqrt(1+8*exp(-1/t)))", "--T", "1"],
        0.520251,
    ),
]


def run_reproduce(args: argparse.Namespace, out) -> int:
    parser = build_parser()
    rows = []
    for label, argv, reference in _PAPER7_CASES:
        sub_args = parser.parse_args(
            argv + ["--n", "128", "--paths", str(args.paths), "--seed", str(args.seed),
                    "--series-terms", "6"]
        )
        report = run_request(sub_args)
        rows.append((label, report, reference))
    if args.format == "json":
        payload = [
            {"case": label, "reference": ref, **report.to_dict()}
            for label, report, ref in rows
        ]
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(
            f"{'case':<36}{'lower':>10}{'upper':>10}{'mean':>10}"
            f"{'std_err':>10}{'reference':>11}\n"
        )
        for label, report, ref in rows:
            r = report.results
            out.write(
                f"{label:<36}{r['lower']:>10.6f}{r['upper']:>10.6f}"
                f"{r['mean']:>10.6f}{r['std_error']:>10.6f}{ref:>11.6f}\n"
            )
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "reproduce":
            return run_reproduce(args, sys.stdout)
        report = run_request(args)
        payload = emit(report, args.format)
        if args.output == "-":
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        else:
            with open(args.output, "wb") as fh:
                fh.write(payload)
        return EXIT_OK
    except ExprSyntaxError as exc:
        print(f"bcp: boundary expression error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"bcp: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailureError as exc:
        print(f"bcp: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidBoundariesError, StartOutsideBandError, EvaluationError,
            InvalidDomainError) as exc:
        print(f"bcp: invalid boundary: {exc}", file=sys.stderr)
        return EXIT_BAND
    except BcpError as exc:  # any remaining domain error
        print(f"bcp: error: {exc}", file=sys.stderr)
        return EXIT_BAND


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
