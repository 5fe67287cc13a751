"""Acceptance criteria, each at its stated tolerance.

Every test records a single PASS/FAIL line that is printed in the terminal
summary.  Failing criteria are reported as failures, not skipped.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from edlid import core, properties as pr
from edlid import reference as ref
from edlid.competitors import KINDS, CompetitorModel, competitor_pmf, competitor_sf, fit_model
from edlid.core import EdlidParams
from edlid.datasets import CountData, dataset_I, dataset_II
from edlid.estimation import fit_mle, log_likelihood, score, simulation_study
from edlid.gof import gof_report, pool_cells

from .conftest import record

MODELS_I = ["edlid", "dge2", "dw", "dli", "dpa", "poisson"]
MODELS_II = ["edlid", "dw", "dbxii", "dlo", "geo", "dli", "poisson", "dr"]


def brute_mean_variance(p):
    x = np.arange(0, core.tail_cutoff(p, 1e-18) + 1, dtype=float)
    f = core.pmf(p, x)
    m = math.fsum(x * f)
    return m, math.fsum((x - m) ** 2 * f)


def _grid_misses(tids, attrs, tol):
    misses = []
    flagged_checks = []
    for tid, attr in zip(tids, attrs):
        for bi, b in enumerate(ref.GRID_B):
            for ai, a in enumerate(ref.GRID_A):
                p = EdlidParams(a, b)
                val = getattr(pr.moment_summary(p), attr)
                want = ref.GRIDS[tid][bi][ai]
                if (a, b) in ref.FLAGGED_GRID_CELLS[tid]:
                    oracle = brute_mean_variance(p)[0 if attr == "mean" else 1]
                    flagged_checks.append((tid, a, b, val, oracle))
                elif abs(val - want) > tol:
                    misses.append(f"table {tid} (a={a}, b={b}): {val:.4f} vs {want}")
    return misses, flagged_checks


def test_criterion_1_moment_tables():
    t0 = time.perf_counter()
    misses, flagged = _grid_misses((1, 2), ("mean", "variance"), 0.002)
    flag_bad = [f for f in flagged if abs(f[3] - f[4]) > 1e-6]
    elapsed = time.perf_counter() - t0
    ok = not misses and not flag_bad and len(flagged) == 1 and elapsed < 5
    detail = (
        f"mean/variance grids within 0.002 ({64 - len(flagged) - len(misses)}/{64 - len(flagged)} cells); "
        f"flagged cell vs direct sum |diff| {max(abs(f[3] - f[4]) for f in flagged):.1e}; {elapsed:.2f}s"
    )
    if misses:
        detail += "; outside: " + "; ".join(misses)
    record(1, ok, detail)
    assert ok, detail


def test_criterion_2_shape_tables():
    t0 = time.perf_counter()
    misses, _ = _grid_misses((3, 4), ("skewness", "kurtosis"), 0.02)
    elapsed = time.perf_counter() - t0
    ok = not misses and elapsed < 10
    detail = f"skewness/kurtosis grids within 0.02 ({64 - len(misses)}/64 cells); {elapsed:.2f}s"
    if misses:
        detail += "; outside: " + "; ".join(misses)
    record(2, ok, detail)
    assert ok, detail


def _fit_checks(data, checks):
    t0 = time.perf_counter()
    fit = fit_mle(data)
    rep = gof_report(fit, data)
    elapsed = time.perf_counter() - t0
    vals = {
        "a": fit.params[0], "b": fit.params[1], "-L": fit.neg_log_lik, "AIC": rep.aic,
        "BIC": rep.bic, "chi2": rep.chi2, "dof": rep.dof, "p": rep.p_value,
    }
    bad = [f"{k}={vals[k]:.4f} (want {w}±{t})" for k, (w, t) in checks.items() if abs(vals[k] - w) > t]
    return fit, vals, bad, elapsed


def test_criterion_3_dataset_I_fit():
    checks = {
        "a": (0.263, 0.005), "b": (0.693, 0.01), "-L": (591.9, 0.1), "AIC": (1187.8, 0.2),
        "BIC": (1196.8, 0.2), "chi2": (3.084, 0.05), "dof": (2, 0), "p": (0.214, 0.005),
    }
    fit, vals, bad, elapsed = _fit_checks(dataset_I().data, checks)
    ok = not bad and fit.converged and elapsed < 2
    detail = (
        f"a={vals['a']:.4f} b={vals['b']:.4f} -L={vals['-L']:.3f} AIC={vals['AIC']:.2f} BIC={vals['BIC']:.2f} "
        f"chi2={vals['chi2']:.3f} dof={vals['dof']} p={vals['p']:.4f}; {elapsed:.2f}s"
    )
    if bad:
        detail += "; outside: " + ", ".join(bad)
    record(3, ok, detail)
    assert ok, detail


def test_criterion_4_dataset_II_fit():
    checks = {
        "a": (0.672, 0.005), "b": (0.264, 0.01), "-L": (166.9, 0.1), "AIC": (337.9, 0.2),
        "chi2": (0.507, 0.05), "dof": (3, 0),
    }
    fit, vals, bad, elapsed = _fit_checks(dataset_II().data, checks)
    ok = not bad and fit.converged and elapsed < 2
    detail = (
        f"a={vals['a']:.4f} b={vals['b']:.4f} -L={vals['-L']:.3f} AIC={vals['AIC']:.2f} "
        f"chi2={vals['chi2']:.3f} dof={vals['dof']}; {elapsed:.2f}s"
    )
    if bad:
        detail += "; outside: " + ", ".join(bad)
    record(4, ok, detail)
    assert ok, detail


def test_criterion_5_competitor_anchors():
    misses, ranks = [], []
    for name, models, table, data in (
        ("I", MODELS_I, ref.GOF_I, dataset_I().data),
        ("II", MODELS_II, ref.GOF_II, dataset_II().data),
    ):
        reports = {}
        for m in models:
            fit = fit_model(m, data)
            reports[m] = gof_report(fit, data)
            want = table[m]["neg_log_lik"]
            if m != "edlid" and abs(fit.neg_log_lik - want) > 0.3:
                misses.append(f"{m} on {name}: -L {fit.neg_log_lik:.3f} vs {want}")
        best = min(reports, key=lambda k: reports[k].aic)
        ranks.append(f"{name}: lowest AIC among compared models {best}")
        if best != "edlid":
            misses.append(f"dataset {name}: {best} beats edlid on AIC")
        # informational: the ranking over every implemented model
        for m in KINDS:
            if m not in reports:
                reports[m] = gof_report(fit_model(m, data), data)
        best_all = min(reports, key=lambda k: reports[k].aic)
        if best_all != best:
            ranks.append(f"{name}: {best_all} has lower AIC when all models are included")
    ok = not misses
    detail = "; ".join(ranks) + ("; outside ±0.3: " + "; ".join(misses) if misses else "; all anchors within ±0.3")
    record(5, ok, detail)
    assert ok, detail


def test_criterion_6_degrees_of_freedom():
    misses = []
    for name, models, table, data in (
        ("I", MODELS_I, ref.GOF_I, dataset_I().data),
        ("II", MODELS_II, ref.GOF_II, dataset_II().data),
    ):
        for m in models:
            rep = gof_report(fit_model(m, data), data)
            if rep.dof != table[m]["dof"]:
                misses.append(f"{m} on {name}: {rep.dof} vs {table[m]['dof']}")
    ok = not misses
    detail = "14 d.f entries under cell pooling" + ("; mismatched: " + "; ".join(misses) if misses else "; all match")
    record(6, ok, detail)
    assert ok, detail


def test_criterion_7_property_suite():
    failures = []
    grid = [EdlidParams(a, b) for a in (0.1, 0.3, 0.5, 0.7, 0.9) for b in (0.5, 1.0, 2.0, 4.0)]

    # normalization of every PMF
    worst = 0.0
    for p in grid:
        x = np.arange(core.tail_cutoff(p, 1e-15) + 1)
        worst = max(worst, abs(math.fsum(core.pmf(p, x)) - 1.0))
    for kind in KINDS:
        m = CompetitorModel(kind, {"poisson": (1.3,), "geo": (0.6,), "dli": (0.45,), "dr": (0.9,),
                                   "dpa": (0.3,), "dw": (0.4, 0.7), "dge2": (0.7, 0.4),
                                   "dbxii": (0.2, 1.5, 0.8), "dlo": (0.15, 1.8)}[kind])
        x = np.arange(0, 3000)
        worst = max(worst, abs(math.fsum(competitor_pmf(m, x)) + competitor_sf(m, 2999) - 1.0))
    if worst > 1e-10:
        failures.append(f"normalization {worst:.1e}")

    # b = 1 reduction and discretization identity
    y = np.arange(0, 80)
    red = ident = 0.0
    for a in (0.05, 0.2, 0.5, 0.8, 0.95):
        red = max(red, float(np.max(np.abs(core.pmf(EdlidParams(a, 1.0), y) - core.dlid_pmf(a, y)))))
        ident = max(ident, float(np.max(np.abs(core.dlid_cdf(a, y) - core.lindley_cdf(-math.log(a), y + 1.0)))))
    if red > 1e-14:
        failures.append(f"b=1 reduction {red:.1e}")
    if ident > 1e-14:
        failures.append(f"discretization identity {ident:.1e}")

    # mean decomposition, reversed hazard identity, mpl bound
    l1 = l2 = 0.0
    mpl_ok = True
    for p in grid:
        for i in range(0, 51):
            l1 = max(l1, abs(pr.mean_decomposition_residual(p, i)))
            if i >= 1:
                mi, mn = pr.mpl(p, i), pr.mpl(p, i + 1)
                l2 = max(l2, abs(core.reversed_hazard(p, i) - (1.0 - mn + mi) / mi))
                mpl_ok &= mi <= i + 1e-12
    if l1 > 1e-8:
        failures.append(f"mean decomposition {l1:.1e}")
    if l2 > 1e-10:
        failures.append(f"reversed-hazard identity {l2:.1e}")
    if not mpl_ok:
        failures.append("mpl(i) > i")

    # score against finite differences
    rel = 0.0
    for p in grid[::3]:
        d = CountData.from_values(core.sample(p, 80, seed=17))
        g = score(d, p)
        for j, (h_a, h_b) in enumerate([(1e-6 * min(p.a, 1 - p.a), 0.0), (0.0, 1e-6 * p.b)]):
            up = log_likelihood(d, EdlidParams(p.a + h_a, p.b + h_b))
            dn = log_likelihood(d, EdlidParams(p.a - h_a, p.b - h_b))
            fd = (up - dn) / (2 * (h_a + h_b))
            rel = max(rel, abs(g[j] - fd) / max(abs(fd), 1.0))
    if rel > 1e-6:
        failures.append(f"score vs finite differences {rel:.1e}")

    # stress-strength against a double sum
    ss = 0.0
    for p1, p2 in [(EdlidParams(0.3, 2.0), EdlidParams(0.5, 1.5)), (EdlidParams(0.7, 0.5), EdlidParams(0.2, 3.0))]:
        x1 = np.arange(core.tail_cutoff(p1, 1e-17) + 1)
        x2 = np.arange(core.tail_cutoff(p2, 1e-17) + 1)
        brute = float(np.sum(np.outer(core.pmf(p1, x1), core.pmf(p2, x2)) * (x1[:, None] <= x2[None, :])))
        ss = max(ss, abs(pr.stress_strength(p1, p2) - brute))
    if ss > 1e-9:
        failures.append(f"stress-strength {ss:.1e}")

    # first L-moment and order-statistic identities
    lm = os_err = 0.0
    for p in grid[::4]:
        mean = pr.raw_moment(p, 1)
        lm = max(lm, abs(pr.l_moments(p, order=1).l1 - mean))
        os_err = max(os_err, abs(pr.os_moment(p, 1, 1) - mean))
        for n in (2, 3, 5):
            os_err = max(os_err, abs(math.fsum(pr.os_moment(p, i, n) for i in range(1, n + 1)) - n * mean))
    if lm > 1e-9:
        failures.append(f"first L-moment {lm:.1e}")
    if os_err > 1e-8:
        failures.append(f"order statistics {os_err:.1e}")

    ok = not failures
    detail = (
        f"normalization {worst:.1e}, b=1 {red:.1e}, identity {ident:.1e}, mean decomposition {l1:.1e}, "
        f"reversed hazard {l2:.1e}, score {rel:.1e}, stress-strength {ss:.1e}, L1 {lm:.1e}, os {os_err:.1e}"
    )
    record(7, ok, detail)
    assert ok, detail


def test_criterion_8_simulation_study():
    t0 = time.perf_counter()
    rows = simulation_study(EdlidParams(0.8, 0.9), sizes=(25, 100, 400), replicates=200, seed=2019)
    elapsed = time.perf_counter() - t0
    mse_a = [r.mse_a for r in rows]
    mse_b = [r.mse_b for r in rows]
    ok = (
        mse_a[0] > mse_a[1] > mse_a[2]
        and mse_b[0] > mse_b[1] > mse_b[2]
        and abs(rows[2].bias_a) < abs(rows[0].bias_a)
        and abs(rows[2].bias_b) < abs(rows[0].bias_b)
        and elapsed < 300
    )
    detail = (
        "MSE(a) " + " > ".join(f"{v:.2e}" for v in mse_a) + "; MSE(b) " + " > ".join(f"{v:.2e}" for v in mse_b)
        + f"; |bias| n=25 vs 400: a {abs(rows[0].bias_a):.1e}/{abs(rows[2].bias_a):.1e},"
        + f" b {abs(rows[0].bias_b):.1e}/{abs(rows[2].bias_b):.1e}; {elapsed:.1f}s"
    )
    record(8, ok, detail)
    assert ok, detail


def _binned(counts, expected):
    groups = pool_cells(expected, expected, "expected")
    obs = np.array([counts[i : j + 1].sum() for i, j in groups], dtype=float)
    exp = np.array([expected[i : j + 1].sum() for i, j in groups], dtype=float)
    return groups, obs, exp


@pytest.mark.parametrize("p", [EdlidParams(0.5, 2.0)], ids=str)
def test_criterion_9_sampler(p):
    n = 1_000_000
    inv = core.sample(p, n, seed=101)
    top = int(inv.max())
    counts = np.bincount(inv, minlength=top + 1).astype(float)
    exp = n * np.asarray(core.pmf(p, np.arange(top + 1)))
    exp[-1] = n * core.survival(p, top - 1)
    groups, o, e = _binned(counts, exp)
    chi = float(np.sum((o - e) ** 2 / e))
    p_gof = float(stats.chi2.sf(chi, len(groups) - 1))

    cont = core.sample(p, n, seed=202, method="continuous")
    counts2 = np.bincount(np.minimum(cont, top), minlength=top + 1).astype(float)
    table = np.vstack([[counts[i : j + 1].sum() for i, j in groups], [counts2[i : j + 1].sum() for i, j in groups]])
    _, p_two, _, _ = stats.chi2_contingency(table)
    ok = p_gof > 0.001 and p_two > 0.001
    detail = f"10^6 inverse draws GOF p={p_gof:.3f}; inverse vs continuous two-sample p={p_two:.3f}"
    record(9, ok, detail)
    assert ok, detail
