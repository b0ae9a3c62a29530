"""Command-line interface: ``dagum-qr {fit,analyze,simulate,sample}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dagum import DagumParams
from .estimation import EstimationError, FitResult, Method, fit, summarize
from .gof import KsResult, ks_test
from .ratio import DegenerateRatioError, QuantilePair, RatioCI, confidence_interval, sample_ratio
from .simulation import DEFAULT_A_GRID, DEFAULT_R_GRID, SimConfig, run_study

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

_FIELD_SEP = re.compile(r"[,;\t ]+")


class DataError(ValueError):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _g(x: float) -> str:
    return f"{x:.6g}"


# --- input -------------------------------------------------------------------


def read_incomes(path) -> np.ndarray:
    """Incomes from a text/CSV file, one per line (first column if several).

    A non-numeric first token on the first non-blank line is taken as a
    header.  Any other bad line raises ``DataError`` naming the line.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    values = []
    seen_first = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token = _FIELD_SEP.split(line, maxsplit=1)[0].strip('"')
        try:
            val = float(token)
        except ValueError:
            if not seen_first:
                seen_first = True
                continue
            raise DataError(f"line {lineno}: cannot parse {token!r} as a number") from None
        seen_first = True
        if not math.isfinite(val) or val <= 0:
            raise DataError(f"line {lineno}: income must be a positive finite number, got {token!r}")
        values.append(val)
    if len(values) < 3:
        raise DataError(f"too few observations: {len(values)} (need at least 3)")
    return np.asarray(values)


# --- analysis ----------------------------------------------------------------


@dataclass
class AnalysisReport:
    n: int
    fit: FitResult
    ks: KsResult
    ratio_ci: RatioCI
    histogram: list[dict]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "fit": self.fit.to_dict(),
            "ks": self.ks.to_dict(),
            "ratio_ci": self.ratio_ci.to_dict(),
            "histogram": self.histogram,
        }


def histogram_data(sorted_sample, params: DagumParams, bins: int | None = None) -> list[dict]:
    """Equal-width histogram (Sturges' rule by default) with the fitted density."""
    x = np.asarray(sorted_sample, dtype=float)
    counts, edges = np.histogram(x, bins=bins if bins else "sturges")
    mids = 0.5 * (edges[:-1] + edges[1:])
    dens = params.pdf(mids)
    return [
        {"bin_lo": float(lo), "bin_hi": float(hi), "count": int(c), "fitted_density_at_midpoint": float(d)}
        for lo, hi, c, d in zip(edges[:-1], edges[1:], counts, np.atleast_1d(dens))
    ]


def analyze(data, qp: QuantilePair, level: float, method: Method, bins: int | None = None) -> AnalysisReport:
    s = summarize(data)
    fitted = fit(s, method)
    ks = ks_test(s.sorted, fitted.params)
    r_star = sample_ratio(s.sorted, qp)
    ci = confidence_interval(r_star, s.n, fitted.params.a, qp, level)
    return AnalysisReport(s.n, fitted, ks, ci, histogram_data(s.sorted, fitted.params, bins))


def _summary_text(rep: AnalysisReport, qp: QuantilePair) -> str:
    p = rep.fit.params
    ci = rep.ratio_ci
    return "\n".join([
        f"observations:        {rep.n}",
        f"fit ({rep.fit.method.value.upper()}):           a={_g(p.a)}  v={_g(p.v)}  lambda={_g(p.lam)}"
        f"  (residual {_g(rep.fit.residual_norm)}, {rep.fit.iterations} iterations)",
        f"Kolmogorov-Smirnov:  D={_g(rep.ks.d_stat)}  p-value={_g(rep.ks.p_value)}",
        f"sample ratio r*({_g(qp.alpha)},{_g(qp.beta)}): {_g(ci.estimate)}",
        f"{_g(100 * ci.level)}% confidence interval: ({_g(ci.lower)}, {_g(ci.upper)})",
    ])


# --- commands ----------------------------------------------------------------


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_fit(args) -> int:
    data = read_incomes(args.input)
    result = fit(summarize(data), Method(args.method))
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    qp = QuantilePair(args.alpha, args.beta)
    data = read_incomes(args.input)
    rep = analyze(data, qp, args.level, Method(args.method), args.bins)
    payload = json.dumps(rep.to_dict(), indent=2) + "\n"
    if args.format == "json":
        sys.stdout.write(payload)
    else:
        sys.stdout.write(_summary_text(rep, qp) + "\n")
    if args.output:
        Path(args.output).write_text(payload)
    return EXIT_OK


def _sim_config(args, method: Method) -> SimConfig:
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot load config {args.config}: {exc}") from exc
        if "qp" in base:
            base["qp"] = QuantilePair(**base["qp"])
        base.pop("method", None)
    for key in ("n", "reps", "seed", "level"):
        val = getattr(args, key)
        if val is not None:
            base[key] = val
    if args.alpha is not None or args.beta is not None:
        base["qp"] = QuantilePair(args.alpha or 0.2, args.beta or 0.8)
    if args.a_grid:
        base["a_grid"] = args.a_grid
    if args.r_grid:
        base["r_grid"] = args.r_grid
    try:
        return SimConfig(method=method, **base)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid simulation config: {exc}") from exc


def cmd_simulate(args) -> int:
    methods = [Method.MM, Method.PWM] if args.method == "both" else [Method(args.method)]
    for method in methods:
        cfg = _sim_config(args, method)
        report = run_study(cfg)
        if args.output:
            stem = args.output if len(methods) == 1 else f"{args.output}_{method.value}"
            Path(f"{stem}.tsv").write_text(report.to_tsv())
            Path(f"{stem}.json").write_text(report.to_json() + "\n")
        if args.format == "tsv":
            sys.stdout.write(report.to_tsv())
        elif args.format == "json":
            sys.stdout.write(report.to_json() + "\n")
        else:
            sys.stdout.write(report.format_tables() + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    try:
        params = DagumParams(args.a, args.v, args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.count < 0:
        raise UsageError("count must be non-negative")
    draws = params.sample(np.random.default_rng(args.seed), args.count)
    _emit("".join(f"{x!r}\n" for x in draws.tolist()), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dagum-qr", description="Dagum quantile-ratio confidence intervals")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_method="pwm", methods=("mm", "pwm")):
        p.add_argument("--method", choices=methods, default=default_method)
        p.add_argument("--output", help="output path")

    p = sub.add_parser("fit", help="fit a Dagum distribution to incomes")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("analyze", help="fit, K-S test, quantile ratio and its confidence interval")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=0.8)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--bins", type=int, default=None, help="histogram bins (default: Sturges)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo coverage study")
    p.add_argument("--config", help="JSON file with SimConfig fields")
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--a-grid", type=float, nargs="+", help=f"default {DEFAULT_A_GRID}")
    p.add_argument("--r-grid", type=float, nargs="+", help=f"default {DEFAULT_R_GRID}")
    p.add_argument("--format", choices=("table", "tsv", "json"), default="table")
    common(p, default_method="both", methods=("mm", "pwm", "both"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="draw Dagum variates")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "alpha", None) is not None and args.command == "analyze":
            QuantilePair(args.alpha, args.beta)
            if not (0 < args.level < 1):
                raise UsageError("level must lie in (0, 1)")
        return args.func(args)
    except UsageError as exc:
        print(f"dagum-qr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"dagum-qr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EstimationError, DegenerateRatioError) as exc:
        print(f"dagum-qr: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # QuantilePair and friends validate user-supplied settings
        print(f"dagum-qr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
