"""Competing count distributions used in the model comparisons.

Parameterizations (``P(X >= x)`` written as ``G(x)``):

==========  =====================================  ================================
kind        parameters                             law
==========  =====================================  ================================
poisson     lam > 0                                exp(-lam) lam**x / x!
geo         p in (0,1)                             (1 - p) p**x
dli         a in (0,1)                             discrete Lindley
dr          q in (0,1)                             G(x) = q**(x**2)
dpa         a in (0,1)                             G(x) = a**ln(1 + x)
dw          q in (0,1), beta > 0                   G(x) = q**(x**beta)
dge2        p in (0,1), alpha > 0                  F(x) = (1 - p**(x+1))**alpha
dbxii       a in (0,1), s > 0, c > 0               G(x) = a**ln(1 + (x/s)**c)
dlo         a in (0,1), s > 0                      G(x) = a**ln(1 + x/s)
==========  =====================================  ================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats
from scipy.special import expit, gammaln, logit

from . import core
from .core import EdlidParams
from .datasets import CountData
from .estimation import FitResult, default_init, fit_mle, maximize

__all__ = [
    "CompetitorModel",
    "KINDS",
    "ALL_MODELS",
    "DISPLAY_NAMES",
    "competitor_pmf",
    "competitor_sf",
    "competitor_fit",
    "model_pmf",
    "model_sf",
    "fit_model",
]

UNIT, POS = "unit", "pos"


def _log1mexp(d: np.ndarray) -> np.ndarray:
    """``log(1 - exp(d))`` for ``d <= 0``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d > -math.log(2.0), np.log(-np.expm1(d)), np.log1p(-np.exp(d)))


def _from_log_ge(log_ge: Callable[..., np.ndarray]):
    def log_pmf(x, *th):
        g0 = log_ge(x, *th)
        g1 = log_ge(x + 1.0, *th)
        return g0 + _log1mexp(g1 - g0)

    def sf(x, *th):
        return np.exp(log_ge(x + 1.0, *th))

    return log_pmf, sf


def _dge2_log_pmf(x, p, alpha):
    hi = alpha * np.log1p(-p ** (x + 1.0))
    lo = alpha * np.log1p(-p**x)  # -inf at x = 0
    return hi + _log1mexp(lo - hi)


def _dge2_sf(x, p, alpha):
    return -np.expm1(alpha * np.log1p(-p ** (x + 1.0)))


@dataclass(frozen=True)
class _Kind:
    label: str
    names: tuple[str, ...]
    domains: tuple[str, ...]
    log_pmf: Callable[..., np.ndarray]
    sf: Callable[..., np.ndarray]


_dw = _from_log_ge(lambda x, q, beta: x**beta * math.log(q))
_dr = _from_log_ge(lambda x, q: x * x * math.log(q))
_dpa = _from_log_ge(lambda x, a: math.log(a) * np.log1p(x))
_dlo = _from_log_ge(lambda x, a, s: math.log(a) * np.log1p(x / s))
_dbxii = _from_log_ge(lambda x, a, s, c: math.log(a) * np.log1p((x / s) ** c))

KINDS: dict[str, _Kind] = {
    "poisson": _Kind(
        "P", ("lam",), (POS,),
        lambda x, lam: -lam + x * math.log(lam) - gammaln(x + 1.0),
        lambda x, lam: stats.poisson.sf(x, lam),
    ),
    "geo": _Kind(
        "Geo", ("p",), (UNIT,),
        lambda x, p: math.log1p(-p) + x * math.log(p),
        lambda x, p: p ** (x + 1.0),
    ),
    "dli": _Kind(
        "DLi", ("a",), (UNIT,),
        lambda x, a: np.asarray(core.log_pmf(EdlidParams(a, 1.0), x)),
        lambda x, a: np.asarray(core.survival(EdlidParams(a, 1.0), x)),
    ),
    "dr": _Kind("DR", ("q",), (UNIT,), *_dr),
    "dpa": _Kind("DPa", ("a",), (UNIT,), *_dpa),
    "dw": _Kind("DW", ("q", "beta"), (UNIT, POS), *_dw),
    "dge2": _Kind("DGE2", ("p", "alpha"), (UNIT, POS), _dge2_log_pmf, _dge2_sf),
    "dbxii": _Kind("DB-XII", ("a", "s", "c"), (UNIT, POS, POS), *_dbxii),
    "dlo": _Kind("DLo", ("a", "s"), (UNIT, POS), *_dlo),
}

ALL_MODELS = ("edlid", "dw", "dge2", "dbxii", "dlo", "geo", "dli", "poisson", "dr", "dpa")
DISPLAY_NAMES = {"edlid": "EDLi", **{k: v.label for k, v in KINDS.items()}}


@dataclass(frozen=True)
class CompetitorModel:
    kind: str
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown competitor kind {self.kind!r}")
        kd = KINDS[self.kind]
        params = tuple(float(v) for v in self.params)
        if len(params) != len(kd.names):
            raise ValueError(f"{self.kind} takes {len(kd.names)} parameter(s), got {len(params)}")
        for name, dom, val in zip(kd.names, kd.domains, params):
            ok = (0.0 < val < 1.0) if dom == UNIT else (0.0 < val < math.inf)
            if not ok:
                raise ValueError(f"{self.kind}: parameter {name}={val!r} outside its domain")
        object.__setattr__(self, "params", params)


def _xs(x) -> np.ndarray:
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0) or np.any(xx != np.floor(xx)):
        raise ValueError("support points must be non-negative integers")
    return xx


def _wrap(res, like):
    return float(res) if np.ndim(like) == 0 else np.asarray(res, dtype=float)


def competitor_log_pmf(m: CompetitorModel, x):
    xx = _xs(x)
    with np.errstate(divide="ignore", invalid="ignore", under="ignore", over="ignore"):
        return _wrap(KINDS[m.kind].log_pmf(xx, *m.params), x)


def competitor_pmf(m: CompetitorModel, x):
    """PMF of a competitor model at non-negative integers ``x``."""
    with np.errstate(under="ignore"):
        return _wrap(np.exp(competitor_log_pmf(m, x)), x)


def competitor_sf(m: CompetitorModel, x):
    """``P(X > x)`` of a competitor model."""
    xx = _xs(x)
    with np.errstate(under="ignore", over="ignore"):
        return _wrap(KINDS[m.kind].sf(xx, *m.params), x)


def model_pmf(dist, x):
    if isinstance(dist, EdlidParams):
        return core.pmf(dist, x)
    return competitor_pmf(dist, x)


def model_sf(dist, x):
    if isinstance(dist, EdlidParams):
        return core.survival(dist, x)
    return competitor_sf(dist, x)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


def _forward(domains, theta):
    out = []
    for d, t in zip(domains, theta):
        out.append(float(expit(t)) if d == UNIT else math.exp(min(t, 700.0)))
    return tuple(out)


def _inverse(domains, params):
    return np.array([logit(v) if d == UNIT else math.log(v) for d, v in zip(domains, params)])


def _init(kind: str, data: CountData) -> tuple[float, ...]:
    p0 = data.frequency(0) / data.n
    p0 = min(max(p0, 0.02), 0.98)
    xbar = max(data.mean, 1e-3)
    if kind == "dli":
        return (default_init(data).a,)
    if kind in ("dw", "dr"):
        return (1.0 - p0, 1.0)[: len(KINDS[kind].names)]
    if kind == "dge2":
        return (xbar / (1.0 + xbar), 1.0)
    # a**ln 2 = P(X >= 1)
    a0 = (1.0 - p0) ** (1.0 / math.log(2.0))
    if kind == "dpa":
        return (a0,)
    if kind == "dlo":
        return (a0, 1.0)
    if kind == "dbxii":
        return (a0, 1.0, 1.0)
    raise ValueError(kind)


def _nll_fn(kind: str, data: CountData):
    kd = KINDS[kind]
    x = data.values.astype(float)
    f = data.freqs.astype(float)

    def nll(theta):
        try:
            m = CompetitorModel(kind, _forward(kd.domains, theta))
        except ValueError:
            return math.inf
        lp = competitor_log_pmf(m, x)
        if not np.all(np.isfinite(lp)):
            return math.inf
        return -float(np.dot(f, lp))

    return nll


def competitor_fit(kind: str, data: CountData, init: tuple[float, ...] | None = None, compute_se: bool = True) -> FitResult:
    """Maximum-likelihood fit of a competitor model.

    Poisson and geometric estimates are closed-form functions of the sample
    mean; the others are found numerically on a logit/log scale.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown competitor kind {kind!r}")
    kd = KINDS[kind]
    nll = _nll_fn(kind, data)
    xbar = data.mean
    closed = None
    if kind == "poisson" and xbar > 0:
        closed = (xbar,)
    elif kind == "geo" and xbar > 0:
        closed = (xbar / (1.0 + xbar),)

    if closed is not None:
        theta = _inverse(kd.domains, closed)
        opt = maximize(nll, theta, compute_cov=compute_se, max_rounds=0)
        opt.theta = theta
        opt.nll = nll(theta)
        opt.converged = True
    else:
        theta0 = _inverse(kd.domains, init if init is not None else _init(kind, data))
        opt = maximize(nll, theta0, compute_cov=compute_se)

    params = _forward(kd.domains, opt.theta)
    se = None
    if compute_se and opt.cov_theta is not None:
        jac = np.diag([v * (1.0 - v) if d == UNIT else v for d, v in zip(kd.domains, params)])
        cov = jac @ opt.cov_theta @ jac
        diag = np.diag(cov)
        if np.all(diag >= 0):
            se = tuple(float(s) for s in np.sqrt(diag))
    return FitResult(
        model=kind,
        dist=CompetitorModel(kind, params),
        params=params,
        param_names=kd.names,
        se=se,
        neg_log_lik=float(opt.nll),
        converged=bool(opt.converged),
        iterations=opt.iterations,
        gradient_norm=float(np.linalg.norm(opt.grad)),
        n_obs=data.n,
        message=opt.message,
    )


def fit_model(kind: str, data: CountData, compute_se: bool = True) -> FitResult:
    """Fit any supported model, the EDLiD included."""
    if kind == "edlid":
        return fit_mle(data, compute_se=compute_se)
    return competitor_fit(kind, data, compute_se=compute_se)
