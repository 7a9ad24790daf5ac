"""Command-line surface: one-shot estimation, weight inspection, simulation runs.

Output is machine-readable by construction: ``key=value`` lines for
`estimate` and `weights`, CSV for `simulate`.  Floating-point values are
printed with 17 significant digits so they round-trip exactly.

Exit codes: 0 success, 1 usage or input error, 2 insufficient data.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .bayes import LikelihoodSpec, PriorBelief, VarianceSource, posterior
from .bootstrap import bootstrap_variance, bootstrap_weights
from .errors import DomainError, InsufficientSamples, TailquantError
from .estimators import ProbabilityLevel, Sample, quantile_rank, sample_quantile, sort_ascending
from .experiment import ExperimentConfig, Method, read_config, run_experiment

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INSUFFICIENT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors by default; the stable
    # contract here reserves 2 for insufficient data.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read_observations(path: str) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise DomainError(f"malformed input at line {lineno}: {line!r}") from None
    if not values:
        raise DomainError(f"no observations found in {path}")
    return values


def _cmd_estimate(args) -> int:
    if (args.prior_mean is None) != (args.prior_var is None):
        raise DomainError("--prior-mean and --prior-var must be given together")
    level = ProbabilityLevel(args.p_value)
    sorted_sample = sort_ascending(Sample(_read_observations(args.data)))
    estimate = sample_quantile(sorted_sample, level)

    print(f"n={estimate.n}")
    print(f"p={_fmt(level.p)}")
    print(f"rank={estimate.rank}")
    print(f"quantile={_fmt(estimate.value)}")

    want_variance = args.variance_mode == "bootstrap"
    need_variance = want_variance or args.prior_mean is not None
    if need_variance:
        variance = bootstrap_variance(sorted_sample, level)
        if want_variance:
            print(f"bootstrap_variance={_fmt(variance.value)}")
    if args.prior_mean is not None:
        prior = PriorBelief(args.prior_mean, args.prior_var)
        likelihood = LikelihoodSpec(variance.value, VarianceSource.BOOTSTRAPPED)
        belief = posterior(prior, estimate, likelihood)
        print(f"posterior_mean={_fmt(belief.mean)}")
        print(f"posterior_variance={_fmt(belief.variance)}")
        print(f"prior_weight={_fmt(belief.prior_weight)}")
    return EXIT_OK


def _cmd_weights(args) -> int:
    rank = quantile_rank(args.n, ProbabilityLevel(args.p_value))
    weights = bootstrap_weights(args.n, rank)
    for i, w in enumerate(weights.w, start=1):
        print(f"{i},{_fmt(w)}")
    print(f"sum={_fmt(weights.w.sum())}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = read_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.p is not None:
        overrides["p_values"] = tuple(args.p)
    if args.n is not None:
        overrides["sample_sizes"] = tuple(args.n)
    if args.sigma2 is not None:
        overrides["prior_variances"] = tuple(args.sigma2)
    if args.prior_mean is not None:
        overrides["prior_mean"] = args.prior_mean
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.methods is not None:
        overrides["methods"] = tuple(Method(m) for m in args.methods)
    if overrides:
        config = dataclasses.replace(config, **overrides)

    table = run_experiment(config, workers=args.workers)
    table.write_csv(args.out)

    by_cell: dict[tuple, list] = {}
    for row in table.rows:
        by_cell.setdefault((row.p, row.n, row.sigma2), []).append(row)
    for (p, n, s2), rows in by_cell.items():
        parts = " ".join(f"{r.method.value}={r.rmse:.6g}" for r in rows)
        print(f"p={p:g} n={n} sigma2={s2:g} trials={config.trials}: {parts}")
    print(f"wrote {args.out} ({len(table.rows)} rows)")
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tailquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser(
        "estimate", help="estimate a low quantile from a data file",
        description="Estimate the p-quantile of newline-separated observations; "
        "optionally fuse with a normal prior using the analytic bootstrap variance.",
    )
    est.add_argument("data", help="UTF-8 text file, one number per line, # comments allowed")
    est.add_argument("--p-value", type=float, required=True, dest="p_value")
    est.add_argument("--prior-mean", type=float, default=None, dest="prior_mean")
    est.add_argument("--prior-var", type=float, default=None, dest="prior_var")
    est.add_argument(
        "--variance-mode", choices=("bootstrap", "none"), default="none",
        dest="variance_mode", help="print the analytic bootstrap variance (default: none)",
    )
    est.set_defaults(func=_cmd_estimate)

    wts = sub.add_parser(
        "weights", help="print analytic bootstrap weights for (n, p)",
        description="Print the infinite-resample weights of the rank-floor(n*p) "
        "order statistic, one 'i,w' line per observation, then their sum.",
    )
    wts.add_argument("--n", type=int, required=True)
    wts.add_argument("--p-value", type=float, required=True, dest="p_value")
    wts.set_defaults(func=_cmd_weights)

    sim = sub.add_parser(
        "simulate", help="run the Monte Carlo comparison and write a CSV table",
        description="Run seeded trials over a (p, n, sigma^2) grid and write "
        "per-cell, per-method RMSE as CSV.  Flags override config-file keys.",
    )
    sim.add_argument("--config", default=None, help="key=value config file")
    sim.add_argument("--p", type=_float_list, default=None, help="comma-separated p-values")
    sim.add_argument("--n", type=_int_list, default=None, help="comma-separated sample sizes")
    sim.add_argument("--sigma2", type=_float_list, default=None, help="comma-separated prior variances")
    sim.add_argument("--prior-mean", type=float, default=None, dest="prior_mean")
    sim.add_argument("--trials", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument(
        "--methods", type=_str_list, default=None,
        help="comma-separated subset of sample,bayes_known,bayes_bootstrap",
    )
    sim.add_argument("--workers", type=int, default=1, help="concurrent grid cells")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InsufficientSamples as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (TailquantError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
