"""Command-line front end.

Subcommands: ``fit``, ``xreg``, ``simulate``, ``gini`` and ``convert``. Reports
go to ``--output`` (stdout by default) as ``key,value`` lines or JSON; plot-ready
tables go to ``--plot-data``. Diagnostics go to stderr and any error gives a
non-zero exit status.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import allocsim, dataset, econ
from .errors import ExpincError
from .expofit import TruncationConfig, fit

EXIT_ERROR = 2


def _g(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _emit_report(args, record: dict, extra_json: dict | None = None) -> None:
    with _sink(args.output) as out:
        if args.format == "json":
            payload = dict(record)
            payload.update(extra_json or {})
            out.write(json.dumps(payload, indent=2) + "\n")
        else:
            out.write("field,value\n")
            for k, v in record.items():
                if isinstance(v, (list, tuple)):
                    v = ";".join(_g(x) for x in v)
                out.write(f"{k},{_g(v)}\n")


def _write_table(path, header: list[str], rows) -> None:
    with _sink(path) as out:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")


# fit ------------------------------------------------------------------------

def _load_sample(args):
    sample = dataset.read_sample(args.input, period_tag=args.period)
    if args.rate != 1.0 or args.period != "annual":
        rec = dataset.CountryRecord(
            code=args.code, year=args.year, lcu_rate=args.rate, period_factor=dataset.PERIOD_FACTORS[args.period]
        )
        sample = dataset.normalize(sample, rec, currency_tag=args.currency)
    return sample


def cmd_fit(args) -> int:
    sample = _load_sample(args)
    cfg = TruncationConfig(
        min_points=args.min_points,
        max_upper_drop_frac=args.max_drop_frac,
        max_iterations=args.max_iterations,
        mode=args.mode.replace("-", "_"),
        gamma=args.gamma,
        upper_drop=args.upper_drop,
    )
    res = fit(sample, cfg)
    record = res.report()
    record.update(
        mode=args.mode,
        n_points=len(sample),
        n_retained=res.n_retained,
        lower_index=res.lower_index,
        upper_drop_count=res.upper_drop_count,
        pearson_r=res.summary.pearson_r,
        r2=res.summary.r2,
        iterations=res.iterations,
        mu_history=list(res.mu_history),
    )

    x, p = sample.thresholds, sample.fractions
    lo, hi = res.lower_index, len(sample) - res.upper_drop_count
    theta = res.law.theta
    fitted = np.exp(res.summary.predict(x))
    plot_rows = [
        (float(xi), float(xi / theta), float(100 * pi), float(100 * fi), int(lo <= i < hi))
        for i, (xi, pi, fi) in enumerate(zip(x, p, fitted))
    ]
    header = ["threshold", "x_over_theta", "pct_at_or_above", "fitted_pct", "retained"]
    _emit_report(args, record, {"plot": [dict(zip(header, r)) for r in plot_rows]})
    if args.plot_data:
        _write_table(args.plot_data, header, plot_rows)
    return 0


# xreg -----------------------------------------------------------------------

def cmd_xreg(args) -> int:
    rows = econ.load_rows(args.data)
    picked = econ.rows_for_year(rows, args.year)
    s = econ.cross_country_regression(picked, args.year)
    record = {"year": args.year}
    record.update(s.as_dict())
    scatter = [(r.code, r.uc_adjusted, r.mu, float(s.predict(r.uc_adjusted))) for r in picked]
    header = ["code", "uc_adjusted", "mu", "fitted_mu"]
    _emit_report(args, record, {"scatter": [dict(zip(header, r)) for r in scatter]})
    if args.plot_data:
        _write_table(args.plot_data, header, scatter)
    return 0


# simulate -------------------------------------------------------------------

def _occ_str(occ: allocsim.Occupancy) -> str:
    return ";".join(f"{lv}:{c}" for lv, c in occ.counts.items())


def cmd_simulate(args) -> int:
    space = allocsim.AllocationSpace(args.agents, args.income)
    with _sink(args.output) as out:
        if args.mode == "enumerate":
            occs = list(allocsim.iter_occupancies(space))
            total = allocsim.count_allocations(space)
            if args.format == "json":
                out.write(json.dumps({
                    "agents": args.agents,
                    "income": args.income,
                    "allocations": total,
                    "occupancies": [
                        {"counts": {str(k): v for k, v in o.counts.items()},
                         "multiplicity": o.multiplicity, "entropy": o.entropy}
                        for o in occs
                    ],
                }, indent=2) + "\n")
            else:
                out.write(f"# agents={args.agents} income={args.income} allocations={total}\n")
                out.write("occupancy,multiplicity,entropy\n")
                for o in occs:
                    out.write(f"{_occ_str(o)},{o.multiplicity},{o.entropy!r}\n")
        elif args.mode == "argmax":
            occ = allocsim.argmax_occupancy(space)
            if args.format == "json":
                out.write(json.dumps({
                    "agents": args.agents,
                    "income": args.income,
                    "counts": {str(k): v for k, v in occ.counts.items()},
                    "multiplicity": occ.multiplicity,
                    "entropy": occ.entropy,
                }, indent=2) + "\n")
            else:
                out.write(f"# multiplicity={occ.multiplicity} entropy={occ.entropy!r}\n")
                out.write("level,count\n")
                for lv, c in occ.counts.items():
                    out.write(f"{lv},{c}\n")
        else:
            draws = allocsim.sample_uniform_array(space, args.seed, args.draws)
            hist = allocsim.empirical_distribution(draws)
            mean = float(draws.mean())
            if args.format == "json":
                out.write(json.dumps({
                    "agents": args.agents,
                    "income": args.income,
                    "draws": args.draws,
                    "seed": args.seed,
                    "mean_income": mean,
                    "histogram": {str(k): v for k, v in hist.items()},
                }, indent=2) + "\n")
            else:
                out.write(f"# draws={args.draws} seed={args.seed} mean_income={mean!r}\n")
                out.write("level,fraction\n")
                for lv, f in hist.items():
                    out.write(f"{lv},{f!r}\n")
    return 0


# gini / convert -------------------------------------------------------------

def cmd_gini(args) -> int:
    g = econ.gini(args.theta, args.mu)
    with _sink(args.output) as out:
        if args.format == "json":
            out.write(json.dumps({"theta": args.theta, "mu": args.mu, "gini": g}) + "\n")
        else:
            out.write(f"{g:.6f}\n")
    return 0


def cmd_convert(args) -> int:
    sample = _load_sample(args)
    with _sink(args.output) as out:
        out.write(dataset.dumps(sample))
    return 0


# parser ---------------------------------------------------------------------

def _add_sample_flags(p):
    p.add_argument("input", help="canonical or percentile-table CSV file")
    p.add_argument("--rate", type=float, default=1.0, help="local currency units per target unit")
    p.add_argument("--period", choices=dataset.PERIODS, default="annual", help="reporting period of the input")
    p.add_argument("--code", default="XXX", help="country code recorded with the conversion")
    p.add_argument("--year", type=int, default=0)
    p.add_argument("--currency", default=None, help="currency tag after conversion")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="report destination (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="expinc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit the shifted exponential law to a quantile table")
    _add_sample_flags(p)
    p.add_argument("--mode", choices=("two-stage", "corollary1"), default="two-stage")
    p.add_argument("--min-points", type=int, default=5)
    p.add_argument("--max-drop-frac", type=float, default=0.5)
    p.add_argument("--max-iterations", type=int, default=20)
    p.add_argument("--upper-drop", type=int, default=None, help="fix the number of top points dropped")
    p.add_argument("--gamma", type=float, default=0.0, help="correlation margin for corollary1")
    p.add_argument("--plot-data", default=None, help="write per-point plot table here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("xreg", parents=[common], help="cross-country regression of mu on unemployment compensation")
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--data", default=None, help="code,year,mu,uc_adjusted file (bundled table by default)")
    p.add_argument("--plot-data", default=None, help="write the scatter table here")
    p.set_defaults(func=cmd_xreg)

    p = sub.add_parser("simulate", parents=[common], help="enumerate or sample equilibrium income allocations")
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--income", type=int, required=True)
    p.add_argument("--mode", choices=("enumerate", "argmax", "sample"), default="enumerate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=1000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gini", parents=[common], help="Gini coefficient of a fitted law")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("convert", parents=[common], help="normalize a table to annual income in the target currency")
    _add_sample_flags(p)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExpincError, OSError) as exc:
        print(f"expinc {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
