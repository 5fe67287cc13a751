"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict
from typing import Sequence

import numpy as np

from . import core, plots, properties
from .competitors import ALL_MODELS, DISPLAY_NAMES, fit_model, model_pmf, model_sf
from .core import EdlidParams
from .datasets import DataError, builtin, load_counts
from .estimation import DEFAULT_SIZES, simulation_study
from .gof import POOL_RULES, expected_frequencies, gof_report
from .tables import TABLE_IDS, reproduce_table

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 2, 3, 4
DEFAULT_SEED = 2019


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Six significant digits; integers and strings pass through."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        return f"{float(v):.6g}"
    return str(v)


def _emit(header: Sequence[str], rows: Sequence[Sequence], fmt_name: str, stream) -> None:
    if fmt_name == "json":
        recs = [{h: (None if isinstance(v, float) and math.isnan(v) else v) for h, v in zip(header, r)} for r in rows]
        recs = [{k: (float(fmt(v)) if isinstance(v, (float, np.floating)) else v) for k, v in rec.items()} for rec in recs]
        json.dump(recs, stream, indent=2)
        stream.write("\n")
    else:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def _write(out: str | None, name: str, header, rows, fmt_name: str) -> None:
    if out is None:
        return
    ext = "json" if fmt_name == "json" else "csv"
    with open(os.path.join(out, f"{name}.{ext}"), "w", newline="", encoding="utf-8") as fh:
        _emit(header, rows, fmt_name, fh)


def _prepare_out(out: str | None) -> str | None:
    if out is None:
        return None
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out!r}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise UsageError(f"output directory {out!r} is not writable")
    return out


def _load(src: str):
    if src.startswith("builtin:"):
        return builtin(src).data
    if not os.path.exists(src):
        raise DataError(f"data file {src!r} not found")
    return load_counts(src)


def _models(text: str) -> list[str]:
    names = [m.strip().lower() for m in text.split(",") if m.strip()]
    if not names:
        raise UsageError("empty model list")
    if names == ["all"]:
        return list(ALL_MODELS)
    bad = [m for m in names if m not in ALL_MODELS]
    if bad:
        raise UsageError(f"unknown model(s) {', '.join(bad)}; choose from {', '.join(ALL_MODELS)} or 'all'")
    return list(dict.fromkeys(names))


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 2 for v in vals):
        raise UsageError("sample sizes must be integers >= 2")
    return vals


def _params(a: float, b: float) -> EdlidParams:
    try:
        return EdlidParams(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_fit(args) -> int:
    data = _load(args.data)
    models = _models(args.models)
    out = _prepare_out(args.out)
    reports, fits = [], {}
    for m in models:
        fit = fit_model(m, data)
        fits[m] = fit
        try:
            reports.append(gof_report(fit, data, args.pool))
        except ValueError as exc:
            print(f"warning: {m}: {exc}", file=sys.stderr)
    if not reports:
        raise DataError("no model could be assessed on these data")
    reports.sort(key=lambda r: r.aic)
    header = ["rank", "model", "params", "neg_log_lik", "aic", "caic", "bic", "hqic", "chi2", "dof", "p_value", "converged"]
    rows = [
        [i + 1, DISPLAY_NAMES[r.model], " ".join(fmt(v) for v in r.params), r.neg_log_lik,
         r.aic, r.caic, r.bic, r.hqic, r.chi2, r.dof, r.p_value, r.converged]
        for i, r in enumerate(reports)
    ]
    _emit(header, rows, args.format, sys.stdout)
    if out is not None:
        _write(out, "fit_summary", header, rows, args.format)
        with open(os.path.join(out, "fit_report.json"), "w", encoding="utf-8") as fh:
            json.dump([_report_dict(r, fits[r.model]) for r in reports], fh, indent=2)
            fh.write("\n")
        last = data.max
        x = np.arange(last + 1)
        obs = np.zeros(last + 1)
        obs[data.values] = data.freqs
        fitted = {
            DISPLAY_NAMES[r.model]: expected_frequencies(
                lambda v, d=fits[r.model].dist: model_pmf(d, v),
                lambda v, d=fits[r.model].dist: model_sf(d, v),
                data.n, last,
            )
            for r in reports
        }
        plots.plot_fitted(x, obs, fitted, "fitted frequencies", os.path.join(out, "fitted.svg"))

    bad = [m for m, f in fits.items() if not f.converged]
    if bad:
        print(f"warning: no interior optimum found for {', '.join(bad)}", file=sys.stderr)
        if not args.allow_nonconverged:
            return EXIT_CONVERGENCE
    return EXIT_OK


def _report_dict(r, fit) -> dict:
    d = asdict(r)
    d["param_names"] = list(fit.param_names)
    d["se"] = None if fit.se is None else list(fit.se)
    d["iterations"] = fit.iterations
    d["gradient_norm"] = fit.gradient_norm
    for k, v in list(d.items()):
        if isinstance(v, float):
            d[k] = float(fmt(v)) if math.isfinite(v) else None
    d["params"] = [float(fmt(v)) for v in r.params]
    d["expected"] = [[c, float(fmt(v))] for c, v in r.expected]
    d["observed"] = [[c, int(v)] for c, v in r.observed]
    if d["se"] is not None:
        d["se"] = [float(fmt(v)) for v in d["se"]]
    return d


def cmd_properties(args) -> int:
    p = _params(args.a, args.b)
    if args.max_x < 0:
        raise UsageError("--max-x must be >= 0")
    out = _prepare_out(args.out)
    x = np.arange(args.max_x + 1)
    pmf = np.atleast_1d(core.pmf(p, x))
    cdf = np.atleast_1d(core.cdf(p, x))
    sf = np.atleast_1d(core.survival(p, x))
    haz = np.where(sf > 0, pmf / np.where(sf > 0, sf, 1.0), np.nan)
    rh = np.atleast_1d(core.reversed_hazard(p, x))
    horizon = args.horizon

    def _mrl(i: int) -> float:
        try:
            return properties.mrl(p, i, horizon=None if horizon is None else max(horizon, i + 1))
        except ZeroDivisionError:
            return math.nan  # conditioning event has zero probability in floating point

    mrl = [_mrl(int(i)) for i in x]
    mpl = [properties.mpl(p, int(i)) for i in x]
    header = ["x", "pmf", "cdf", "survival", "hazard", "reversed_hazard", "mrl", "mpl"]
    rows = [[int(xi), pmf[k], cdf[k], sf[k], haz[k], rh[k], mrl[k], mpl[k]] for k, xi in enumerate(x)]
    _emit(header, rows, args.format, sys.stdout)

    s = properties.moment_summary(p)
    lm = properties.l_moments(p)
    sheader = ["quantity", "value"]
    srows = [
        ["mean", s.mean], ["variance", s.variance], ["skewness", s.skewness], ["kurtosis", s.kurtosis],
        ["l1", lm.l1], ["l2", lm.l2], ["l3", lm.l3], ["l4", lm.l4],
        ["l_cv", lm.lm_cv], ["l_skewness", lm.lm_sk], ["l_kurtosis", lm.lm_ku],
    ]
    if args.format == "csv":
        sys.stdout.write("\n")
    _emit(sheader, srows, args.format, sys.stdout)
    if out is not None:
        _write(out, "properties", header, rows, args.format)
        _write(out, "moments", sheader, srows, args.format)
        title = f"a={fmt(p.a)}, b={fmt(p.b)}"
        plots.plot_pmf_cdf(x, pmf, cdf, title, os.path.join(out, "pmf_cdf.svg"))
        plots.plot_rates(x, haz, rh, title, os.path.join(out, "rates.svg"))
    return EXIT_OK


def cmd_simulate(args) -> int:
    p = _params(args.a, args.b)
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    sizes = _int_list(args.sizes) if args.sizes else list(DEFAULT_SIZES)
    out = _prepare_out(args.out)
    rows_ = simulation_study(p, sizes, replicates=args.m, seed=args.seed, workers=args.workers)
    header = ["n", "bias_a", "bias_b", "mse_a", "mse_b", "replicates", "failed"]
    rows = [[r.n, r.bias_a, r.bias_b, r.mse_a, r.mse_b, r.replicates, r.failed] for r in rows_]
    _emit(header, rows, args.format, sys.stdout)
    if out is not None:
        _write(out, "simulation", header, rows, args.format)
        series = {
            "bias(a)": [r.bias_a for r in rows_], "bias(b)": [r.bias_b for r in rows_],
            "mse(a)": [r.mse_a for r in rows_], "mse(b)": [r.mse_b for r in rows_],
        }
        plots.plot_simulation(sizes, series, os.path.join(out, "simulation.svg"))
    if any(r.replicates == 0 for r in rows_):
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_reproduce(args) -> int:
    out = _prepare_out(args.out)
    comp = reproduce_table(args.table, args.pool)
    header = ["key", "computed", "reference", "deviation", "tolerance", "status"]
    rows = []
    for r in comp.rows:
        status = "flagged" if r.flagged else ("ok" if r.ok else "outside")
        rows.append([r.key, r.computed, r.reference, r.deviation, r.tol, status])
    _emit(header, rows, args.format, sys.stdout)
    print(
        f"# table {comp.table} ({comp.title}): max |deviation| {fmt(comp.max_deviation)} "
        f"outside flagged cells; {len(comp.failures)} cell(s) outside tolerance",
        file=sys.stderr,
    )
    _write(out, f"table{comp.table}", header, rows, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(sp) -> None:
    sp.add_argument("--out", help="output directory for report, CSV and SVG files")
    sp.add_argument("--format", choices=("csv", "json"), default="csv", help="table format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edlid", description="Exponentiated discrete Lindley toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fit", help="fit and compare count models")
    f.add_argument("--data", required=True, help="CSV path, builtin:I or builtin:II")
    f.add_argument("--models", default="edlid", help="comma-separated list or 'all'")
    f.add_argument("--pool", choices=POOL_RULES, default="observed", help="chi-square cell pooling rule")
    f.add_argument("--allow-nonconverged", action="store_true", help="exit 0 even if some fit has no interior optimum")
    f.add_argument("--seed", type=int, default=DEFAULT_SEED, help=argparse.SUPPRESS)
    _common(f)
    f.set_defaults(func=cmd_fit)

    p = sub.add_parser("properties", help="distributional properties for given parameters")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--max-x", type=int, default=20)
    p.add_argument("--horizon", type=int, default=None, help="truncation point for the mean residual life sum")
    _common(p)
    p.set_defaults(func=cmd_properties)

    s = sub.add_parser("simulate", help="bias and MSE of the MLE by simulation")
    s.add_argument("--a", type=float, default=0.8)
    s.add_argument("--b", type=float, default=0.9)
    s.add_argument("--m", type=int, default=1000, help="replicates per sample size")
    s.add_argument("--sizes", default=None, help="comma-separated sample sizes")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--workers", type=int, default=None, help="process count (default: EDLID_THREADS or all cores)")
    _common(s)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce", help="recompute a reference table and compare")
    r.add_argument("--table", type=int, required=True, choices=TABLE_IDS)
    r.add_argument("--pool", choices=POOL_RULES, default="observed")
    _common(r)
    r.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
