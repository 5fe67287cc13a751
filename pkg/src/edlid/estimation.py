"""Maximum-likelihood fitting of the EDLiD and the bias/MSE simulation study."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.special import expit, logit

from . import core
from .core import EdlidParams
from .datasets import CountData

__all__ = [
    "FitResult",
    "SimStudyRow",
    "log_likelihood",
    "score",
    "v1",
    "v2",
    "dlid_mean",
    "default_init",
    "fit_mle",
    "maximize",
    "simulation_study",
    "DEFAULT_SIZES",
]

GRAD_TOL = 1e-6
DEFAULT_SIZES = (25, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500, 550, 600, 650, 700, 750)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a maximum-likelihood fit.

    ``dist`` is the fitted distribution object (``EdlidParams`` for the EDLiD,
    a ``CompetitorModel`` otherwise).  ``se`` is ``None`` when the observed
    information matrix is not positive definite.
    """

    model: str
    dist: object
    params: tuple[float, ...]
    param_names: tuple[str, ...]
    se: tuple[float, ...] | None
    neg_log_lik: float
    converged: bool
    iterations: int
    gradient_norm: float
    n_obs: int
    message: str = ""

    @property
    def k(self) -> int:
        return len(self.params)

    @property
    def log_lik(self) -> float:
        return -self.neg_log_lik

    @property
    def se_a(self) -> float | None:
        return None if self.se is None else self.se[0]

    @property
    def se_b(self) -> float | None:
        return None if self.se is None or len(self.se) < 2 else self.se[1]


@dataclass(frozen=True)
class SimStudyRow:
    n: int
    bias_a: float
    bias_b: float
    mse_a: float
    mse_b: float
    replicates: int
    failed: int = 0


# ---------------------------------------------------------------------------
# likelihood and score
# ---------------------------------------------------------------------------


def _censor_mask(data: CountData, censor_at: int | None) -> np.ndarray:
    if censor_at is None:
        return np.zeros(data.values.shape, dtype=bool)
    return data.values >= censor_at


def log_likelihood(data: CountData, p: EdlidParams, censor_at: int | None = None) -> float:
    """Log-likelihood of ``p`` for the (value, frequency) sample.

    With ``censor_at = t`` observations recorded at ``t`` or above enter as
    ``P(X >= t)`` instead of ``P(X = t)`` (top-coded cell).  Returns ``-inf``
    when some observation has zero probability in floating point.
    """
    x = data.values.astype(float)
    lp = np.asarray(core.log_pmf(p, x), dtype=float)
    cens = _censor_mask(data, censor_at)
    if np.any(cens):
        with np.errstate(divide="ignore"):
            lp[cens] = np.log(np.asarray(core.survival(p, x[cens] - 1.0)))
    if np.any(np.isneginf(lp)):
        return -math.inf
    return float(np.dot(data.freqs, lp))


def v1(x, a: float) -> np.ndarray:
    """``1 - a**x + ((1+x) a**x - 1) ln a``, the base of ``Lambda``."""
    xx = np.asarray(x, dtype=float)
    la = math.log(a)
    with np.errstate(under="ignore"):
        return np.exp(core._log_w(a, xx - 1.0) + math.log1p(-la))


def v2(x, a: float) -> np.ndarray:
    """Derivative of :func:`v1` with respect to ``a``."""
    xx = np.asarray(x, dtype=float)
    la = math.log(a)
    with np.errstate(under="ignore"):
        axm1 = np.exp((xx - 1.0) * la)
        return xx * (xx + 1.0) * axm1 * la - xx * axm1 + ((1.0 + xx) * axm1 * a - 1.0) / a


def score(data: CountData, p: EdlidParams) -> tuple[float, float]:
    """Gradient ``(dL/da, dL/db)`` of :func:`log_likelihood` (uncensored).

    Each observation contributes the ratio of the ``a``- or ``b``-derivative of
    ``Lambda(x+1) - Lambda(x)`` to that difference; dividing through by
    ``Lambda(x+1)`` expresses both in terms of ``rho = Lambda(x)/Lambda(x+1)``.
    """
    a, b = p.a, p.b
    x = data.values.astype(float)
    f = data.freqs.astype(float)
    n = float(f.sum())
    la = math.log(a)
    one_minus_rho = np.asarray(core.reversed_hazard(p, x))
    rho = 1.0 - one_minus_rho
    v1_hi, v1_lo = v1(x + 1.0, a), v1(x, a)
    v2_hi, v2_lo = v2(x + 1.0, a), v2(x, a)
    lo_ok = x > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_lo = np.where(lo_ok, v2_lo / v1_lo, 0.0)
        log_lo = np.where(lo_ok, np.log(v1_lo), 0.0)
    da_terms = (v2_hi / v1_hi - rho * ratio_lo) / one_minus_rho
    db_terms = (np.log(v1_hi) - rho * log_lo) / one_minus_rho
    d_a = n * b / (a * (1.0 - la)) + b * float(np.dot(f, da_terms))
    d_b = -n * math.log1p(-la) + float(np.dot(f, db_terms))
    return d_a, d_b


def dlid_mean(a: float) -> float:
    """Closed-form mean of the discrete Lindley law (``b = 1``)."""
    la = math.log(a)
    g = a / (1.0 - a)
    return (g - la * (g / (1.0 - a) + g)) / (1.0 - la)


def default_init(data: CountData) -> EdlidParams:
    """Match the sample mean with ``b = 1`` by bisection on the DLiD mean."""
    target = data.mean
    lo, hi = 1e-9, 1.0 - 1e-9
    if target <= dlid_mean(lo):
        return EdlidParams(1e-3, 1.0)
    if target >= dlid_mean(hi):
        return EdlidParams(hi, 1.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dlid_mean(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return EdlidParams(min(max(0.5 * (lo + hi), 1e-6), 1 - 1e-9), 1.0)


# ---------------------------------------------------------------------------
# generic optimizer on an unconstrained parameterization
# ---------------------------------------------------------------------------


def _hessian(grad: Callable[[np.ndarray], np.ndarray], theta: np.ndarray) -> np.ndarray:
    k = theta.size
    h = np.empty((k, k))
    for j in range(k):
        step = 1e-5 * max(1.0, abs(theta[j]))
        e = np.zeros(k)
        e[j] = step
        with np.errstate(invalid="ignore"):
            h[:, j] = (grad(theta + e) - grad(theta - e)) / (2.0 * step)
    return 0.5 * (h + h.T)


def _num_grad(fun: Callable[[np.ndarray], float], theta: np.ndarray) -> np.ndarray:
    g = np.empty(theta.size)
    for j in range(theta.size):
        step = 1e-6 * max(1.0, abs(theta[j]))
        e = np.zeros(theta.size)
        e[j] = step
        g[j] = (fun(theta + e) - fun(theta - e)) / (2.0 * step)
    return g


@dataclass
class _Optimum:
    theta: np.ndarray
    nll: float
    grad: np.ndarray
    iterations: int
    converged: bool
    message: str
    cov_theta: np.ndarray | None = field(default=None)


def maximize(
    nll: Callable[[np.ndarray], float],
    theta0: np.ndarray,
    grad: Callable[[np.ndarray], np.ndarray] | None = None,
    compute_cov: bool = True,
    max_rounds: int = 4,
) -> _Optimum:
    """Minimize a negative log-likelihood over an unconstrained vector.

    Line-searched BFGS is run first; if it stalls short of the gradient
    tolerance the best point is handed to Nelder-Mead and BFGS is restarted.
    A few Newton steps with a finite-difference Hessian polish the optimum.
    """
    if grad is None:
        grad = lambda th: _num_grad(nll, th)  # noqa: E731

    def fun(th):
        v = nll(th)
        if not np.isfinite(v):
            return math.inf, np.zeros_like(th)
        return v, grad(th)

    theta = np.asarray(theta0, dtype=float)
    best = nll(theta)
    iters = 0
    message = ""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for _ in range(max_rounds):
            res = optimize.minimize(fun, theta, jac=True, method="BFGS", options={"gtol": GRAD_TOL, "maxiter": 500})
            iters += int(res.nit)
            if np.isfinite(res.fun) and res.fun <= best:
                theta, best = res.x, float(res.fun)
            message = str(res.message)
            g = grad(theta)
            if np.linalg.norm(g) < GRAD_TOL:
                break
            nm = optimize.minimize(
                nll, theta, method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000},
            )
            iters += int(nm.nit)
            if np.isfinite(nm.fun) and nm.fun <= best:
                theta, best = nm.x, float(nm.fun)

        for _ in range(8):
            g = grad(theta)
            if np.linalg.norm(g) < GRAD_TOL * 1e-2:
                break
            hess = _hessian(grad, theta)
            try:
                step = np.linalg.solve(hess, g)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            cand = theta - step
            val = nll(cand)
            if np.isfinite(val) and val <= best + 1e-12 * max(1.0, abs(best)):
                theta, best = cand, float(val)
                iters += 1
            else:
                break

    g = grad(theta)
    gnorm = float(np.linalg.norm(g))
    out = _Optimum(theta, best, g, iters, gnorm < GRAD_TOL, message)
    if compute_cov:
        # observed information = Hessian of the negative log-likelihood
        info = _hessian(grad, theta)
        try:
            if not np.all(np.isfinite(info)):
                raise np.linalg.LinAlgError("non-finite information matrix")
            np.linalg.cholesky(info)
            out.cov_theta = np.linalg.inv(info)
        except np.linalg.LinAlgError:
            out.cov_theta = None
    return out


# ---------------------------------------------------------------------------
# EDLiD fit
# ---------------------------------------------------------------------------


def _to_params(theta: np.ndarray) -> EdlidParams | None:
    a = float(expit(theta[0]))
    b = math.exp(min(theta[1], 700.0))
    if not (0.0 < a < 1.0) or not (0.0 < b < math.inf):
        return None
    return EdlidParams(a, b)


def fit_mle(
    data: CountData,
    init: EdlidParams | None = None,
    compute_se: bool = True,
    censor_at: int | None = None,
) -> FitResult:
    """Maximum-likelihood estimate of ``(a, b)``.

    The search runs over ``(logit a, log b)`` with the analytic score mapped
    through the chain rule.  Standard errors come from the inverse observed
    information, transferred back to ``(a, b)`` by the delta method.

    Parameters
    ----------
    data : CountData
    init : EdlidParams, optional
        Starting point; defaults to :func:`default_init`.
    compute_se : bool
        Skip the information matrix when only point estimates are needed.
    censor_at : int, optional
        Treat observations ``>= censor_at`` as right-censored at that value.
    """
    start = init if init is not None else default_init(data)
    theta0 = np.array([logit(start.a), math.log(start.b)])

    def nll(th):
        p = _to_params(th)
        if p is None:
            return math.inf
        return -log_likelihood(data, p, censor_at)

    if censor_at is None:

        def grad(th):
            p = _to_params(th)
            if p is None:
                return np.zeros(2)
            d_a, d_b = score(data, p)
            return -np.array([d_a * p.a * (1.0 - p.a), d_b * p.b])

    else:
        grad = None

    opt = maximize(nll, theta0, grad, compute_cov=compute_se)
    p = _to_params(opt.theta)
    se = None
    if compute_se and opt.cov_theta is not None:
        jac = np.diag([p.a * (1.0 - p.a), p.b])
        cov = jac @ opt.cov_theta @ jac
        se = tuple(float(s) for s in np.sqrt(np.diag(cov)))
    return FitResult(
        model="edlid",
        dist=p,
        params=(p.a, p.b),
        param_names=("a", "b"),
        se=se,
        neg_log_lik=opt.nll,
        converged=opt.converged,
        iterations=opt.iterations,
        gradient_norm=float(np.linalg.norm(opt.grad)),
        n_obs=data.n,
        message=opt.message,
    )


# ---------------------------------------------------------------------------
# simulation study
# ---------------------------------------------------------------------------


def _replicate_block(args) -> list[tuple[float, float, bool]]:
    a, b, n, seed, reps, method = args
    p = EdlidParams(a, b)
    out = []
    for r in reps:
        rng = np.random.default_rng(np.random.SeedSequence([seed, n, r]))
        draws = core.sample(p, n, rng, method=method)
        fit = fit_mle(CountData.from_values(draws), compute_se=False)
        out.append((fit.params[0], fit.params[1], fit.converged))
    return out


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    cap = os.environ.get("EDLID_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def simulation_study(
    true_params: EdlidParams = EdlidParams(0.8, 0.9),
    sizes: Sequence[int] = DEFAULT_SIZES,
    replicates: int = 1000,
    seed: int = 2019,
    workers: int | None = None,
    method: str = "inverse",
) -> list[SimStudyRow]:
    """Average bias and MSE of the MLE over repeated simulated samples.

    Replicate ``r`` at size ``n`` draws from a generator seeded with
    ``(seed, n, r)``, so results do not depend on scheduling or worker count.
    Fits that fail to converge are excluded and counted in ``failed``.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    if not sizes:
        raise ValueError("sizes must be non-empty")
    nworkers = _worker_count(workers)
    blocks = []
    chunk = max(1, math.ceil(replicates / (4 * nworkers)))
    for n in sizes:
        for start in range(0, replicates, chunk):
            reps = tuple(range(start, min(start + chunk, replicates)))
            blocks.append((true_params.a, true_params.b, int(n), int(seed), reps, method))
    if nworkers == 1:
        results = [_replicate_block(bl) for bl in blocks]
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as ex:
            results = list(ex.map(_replicate_block, blocks))

    by_n: dict[int, list[tuple[float, float, bool]]] = {int(n): [] for n in sizes}
    for bl, res in zip(blocks, results):
        by_n[bl[2]].extend(res)

    rows = []
    for n in sizes:
        est = by_n[int(n)]
        good = np.array([(ah, bh) for ah, bh, ok in est if ok], dtype=float).reshape(-1, 2)
        failed = len(est) - len(good)
        if len(good) == 0:
            rows.append(SimStudyRow(int(n), math.nan, math.nan, math.nan, math.nan, 0, failed))
            continue
        err = good - np.array([true_params.a, true_params.b])
        bias = err.mean(axis=0)
        mse = (err**2).mean(axis=0)
        rows.append(
            SimStudyRow(int(n), float(bias[0]), float(bias[1]), float(mse[0]), float(mse[1]), len(good), failed)
        )
    return rows
