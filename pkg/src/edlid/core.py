"""Evaluation and sampling of the exponentiated discrete Lindley distribution.

The EDLiD with scale ``a`` in (0, 1) and shape ``b > 0`` has CDF

    F(x) = W(x)**b,    W(x) = [1 - a**(x+1) + ((2+x) a**(x+1) - 1) ln a] / (1 - ln a)

where ``W`` is the discrete Lindley CDF.  Writing the unnormalized term

    Lambda(x) = (1 - a**x + ((1+x) a**x - 1) ln a)**b

gives ``F(x) = Lambda(x+1) / (1 - ln a)**b``.

All EDLiD quantities are computed through ``log W`` so that the ``b``-th
power neither overflows nor loses the tail.  ``W`` itself is evaluated from
whichever of its two closed forms (head or tail) is free of cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EdlidParams",
    "LindleyParams",
    "lindley_cdf",
    "lindley_pdf",
    "dlid_cdf",
    "dlid_pmf",
    "big_lambda",
    "cdf",
    "survival",
    "pmf",
    "log_pmf",
    "hazard",
    "reversed_hazard",
    "quantile",
    "sample",
    "tail_cutoff",
    "TAIL_EPS",
    "TAIL_CAP",
]

TAIL_EPS = 1e-12
TAIL_CAP = 10**7


@dataclass(frozen=True)
class EdlidParams:
    """Scale ``a`` in (0, 1) and shape ``b > 0``."""

    a: float
    b: float

    def __post_init__(self) -> None:
        a, b = float(self.a), float(self.b)
        if not (0.0 < a < 1.0):
            raise ValueError(f"scale a must lie in (0, 1), got {self.a!r}")
        if not (b > 0.0 and math.isfinite(b)):
            raise ValueError(f"shape b must be finite and > 0, got {self.b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def log_a(self) -> float:
        return math.log(self.a)

    @property
    def log_norm(self) -> float:
        """``log((1 - ln a)**b)``, the log of the normalizing constant."""
        return self.b * math.log1p(-math.log(self.a))


@dataclass(frozen=True)
class LindleyParams:
    rate: float

    def __post_init__(self) -> None:
        rate = float(self.rate)
        if not (rate > 0.0 and math.isfinite(rate)):
            raise ValueError(f"Lindley rate must be finite and > 0, got {self.rate!r}")
        object.__setattr__(self, "rate", rate)


def _rate(p: LindleyParams | float) -> float:
    return p.rate if isinstance(p, LindleyParams) else LindleyParams(p).rate


def _wrap(res: np.ndarray, like) -> float | np.ndarray:
    return float(res) if np.ndim(like) == 0 else res


def _int_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
        raise ValueError("support points must be finite integers")
    return arr


def _check_a(a: float) -> float:
    a = float(a)
    if not (0.0 < a < 1.0):
        raise ValueError(f"scale a must lie in (0, 1), got {a!r}")
    return a


# ---------------------------------------------------------------------------
# continuous Lindley
# ---------------------------------------------------------------------------


def lindley_cdf(p: LindleyParams | float, z) -> float | np.ndarray:
    """CDF ``1 - exp(-r z) (1 + r z / (r + 1))`` of the Lindley law with rate ``r``."""
    r = _rate(p)
    zz = np.asarray(z, dtype=float)
    if np.any(zz < 0) or np.any(np.isnan(zz)):
        raise ValueError("lindley_cdf requires z >= 0")
    with np.errstate(invalid="ignore", over="ignore"):
        rz = r * zz
        sf = np.exp(-rz) * (1.0 + rz / (r + 1.0))
    sf = np.where(np.isinf(zz), 0.0, sf)
    return _wrap(1.0 - sf, z)


def lindley_pdf(p: LindleyParams | float, z) -> float | np.ndarray:
    r = _rate(p)
    zz = np.asarray(z, dtype=float)
    if np.any(zz < 0):
        raise ValueError("lindley_pdf requires z >= 0")
    with np.errstate(invalid="ignore", over="ignore"):
        d = r * r / (1.0 + r) * (zz + 1.0) * np.exp(-r * zz)
    d = np.where(np.isinf(zz), 0.0, d)
    return _wrap(d, z)


# ---------------------------------------------------------------------------
# discrete Lindley, printed closed forms
# ---------------------------------------------------------------------------


def dlid_cdf(a: float, y) -> float | np.ndarray:
    """Discrete Lindley CDF, evaluated directly from its closed form."""
    a = _check_a(a)
    yy = _int_array(y)
    la = math.log(a)
    ay1 = a ** (yy + 1.0)
    val = (1.0 - ay1 + ((2.0 + yy) * ay1 - 1.0) * la) / (1.0 - la)
    return _wrap(np.where(yy < 0, 0.0, val), y)


def dlid_pmf(a: float, y) -> float | np.ndarray:
    """Discrete Lindley PMF, evaluated directly from its closed form."""
    a = _check_a(a)
    yy = _int_array(y)
    la = math.log(a)
    val = a**yy / (1.0 - la) * (a * la + (1.0 - a) * (1.0 - (yy + 1.0) * la))
    return _wrap(np.where(yy < 0, 0.0, val), y)


# ---------------------------------------------------------------------------
# stable kernel
# ---------------------------------------------------------------------------


def _one_minus_exp_times(u: np.ndarray) -> np.ndarray:
    """``1 - exp(u) * (1 - u)`` for ``u <= 0`` without cancellation near 0."""
    out = np.empty_like(u)
    small = np.abs(u) < 0.5
    us = u[small]
    # sum_{k>=2} (k-1) u^k / k!
    term = us * us / 2.0
    acc = term.copy()
    for k in range(3, 24):
        term = term * us / k
        acc += (k - 1) * term
    out[small] = acc
    ul = u[~small]
    out[~small] = -np.expm1(ul) + ul * np.exp(ul)
    return out


def _log_w(a: float, y: np.ndarray) -> np.ndarray:
    """``log W(y)`` for integer ``y`` (``-inf`` for ``y < 0``)."""
    la = math.log(a)
    out = np.full(y.shape, -np.inf)
    ok = y >= 0
    if not np.any(ok):
        return out
    yk = y[ok]
    u = (yk + 1.0) * la
    # tail form: 1 - W(y) = a**(y+1) (1 - (y+2) ln a) / (1 - ln a)
    sw = np.exp(u) * (1.0 - (yk + 2.0) * la) / (1.0 - la)
    # head form: W(y) (1 - ln a) = g(u) + ln a * expm1(u), both terms >= 0
    head = _one_minus_exp_times(u) + la * np.expm1(u)
    with np.errstate(divide="ignore"):
        lw = np.where(
            sw > 0.5,
            np.log(head) - math.log1p(-la),
            np.log1p(-np.minimum(sw, 0.5)),
        )
    out[ok] = lw
    return out


def _log_cdf_arr(p: EdlidParams, x: np.ndarray) -> np.ndarray:
    return p.b * _log_w(p.a, x)


def big_lambda(p: EdlidParams, x) -> float | np.ndarray:
    """Unnormalized power term ``(1 - a**x + ((1+x) a**x - 1) ln a)**b``.

    ``big_lambda(p, 0) == 0`` and the term increases to ``(1 - ln a)**b``.
    """
    xx = _int_array(x)
    if np.any(xx < 0):
        raise ValueError("big_lambda requires x >= 0")
    with np.errstate(under="ignore"):
        val = np.exp(_log_cdf_arr(p, xx - 1.0) + p.log_norm)
    return _wrap(val, x)


def cdf(p: EdlidParams, x) -> float | np.ndarray:
    """``P(X <= x)``; zero for ``x < 0``."""
    xx = _int_array(x)
    with np.errstate(under="ignore"):
        return _wrap(np.exp(_log_cdf_arr(p, xx)), x)


def survival(p: EdlidParams, x) -> float | np.ndarray:
    """``P(X > x)``; one for ``x < 0``."""
    xx = _int_array(x)
    return _wrap(-np.expm1(_log_cdf_arr(p, xx)), x)


def _pmf_parts(p: EdlidParams, xx: np.ndarray):
    lc1 = _log_cdf_arr(p, xx)
    lc0 = _log_cdf_arr(p, xx - 1.0)
    with np.errstate(invalid="ignore"):
        # 1 - F(x-1)/F(x); equals 1 at x = 0 where lc0 = -inf
        ratio = -np.expm1(lc0 - lc1)
    ratio = np.where(np.isneginf(lc0), 1.0, ratio) + 0.0  # no signed zeros
    return lc1, ratio


def pmf(p: EdlidParams, x) -> float | np.ndarray:
    """``P(X = x)``; zero for ``x < 0``."""
    xx = _int_array(x)
    lc1, ratio = _pmf_parts(p, xx)
    with np.errstate(under="ignore"):
        val = np.exp(lc1) * ratio
    return _wrap(np.where(xx < 0, 0.0, val), x)


def log_pmf(p: EdlidParams, x) -> float | np.ndarray:
    xx = _int_array(x)
    lc1, ratio = _pmf_parts(p, xx)
    with np.errstate(divide="ignore"):
        val = lc1 + np.log(ratio)
    return _wrap(np.where(xx < 0, -np.inf, val), x)


def hazard(p: EdlidParams, x) -> float | np.ndarray:
    """``P(X = x) / P(X > x)``.

    Raises
    ------
    ZeroDivisionError
        If the survival probability at any requested ``x`` is zero in
        floating point.
    """
    xx = _int_array(x)
    if np.any(xx < 0):
        raise ValueError("hazard requires x >= 0")
    s = np.asarray(survival(p, xx))
    if np.any(s <= 0.0):
        bad = xx[s <= 0.0].min()
        raise ZeroDivisionError(f"survival vanishes numerically at x = {int(bad)}")
    return _wrap(np.asarray(pmf(p, xx)) / s, x)


def reversed_hazard(p: EdlidParams, x) -> float | np.ndarray:
    """``P(X = x) / P(X <= x) = 1 - Lambda(x) / Lambda(x+1)``; one at ``x = 0``."""
    xx = _int_array(x)
    if np.any(xx < 0):
        raise ValueError("reversed_hazard requires x >= 0")
    _, ratio = _pmf_parts(p, xx)
    return _wrap(ratio, x)


# ---------------------------------------------------------------------------
# quantile, tail cutoff and sampling
# ---------------------------------------------------------------------------


def _gallop(pred, cap: int) -> int:
    """Smallest integer ``x >= 0`` with ``pred(x)`` true, for monotone ``pred``."""
    if pred(0):
        return 0
    lo, hi = 0, 1
    while not pred(hi):
        lo, hi = hi, hi * 2
        if lo > cap:
            raise OverflowError(f"search exceeded cap {cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def quantile(p: EdlidParams, u: float) -> int:
    """Smallest integer ``x`` with ``cdf(p, x) >= u``."""
    u = float(u)
    if not (0.0 <= u < 1.0):
        raise ValueError(f"quantile requires 0 <= u < 1, got {u!r}")
    return _gallop(lambda k: cdf(p, k) >= u, TAIL_CAP)


def tail_cutoff(p: EdlidParams, eps: float = TAIL_EPS, cap: int = TAIL_CAP) -> int:
    """Smallest ``x`` with ``survival(p, x) < eps``, capped at ``cap``."""
    try:
        return _gallop(lambda k: survival(p, k) < eps, cap)
    except OverflowError:
        return cap


def _cdf_table(p: EdlidParams, level: float) -> np.ndarray:
    n = 64
    while True:
        tab = np.asarray(cdf(p, np.arange(n)))
        if tab[-1] >= level:
            return tab
        if n > TAIL_CAP:
            raise OverflowError("CDF table exceeded the tail cap")
        n *= 2


def _lindley_inverse(rate: float, t: np.ndarray, iters: int = 200) -> np.ndarray:
    """Solve ``lindley_cdf(rate, z) = t`` by vectorized bisection."""
    lo = np.zeros_like(t)
    hi = np.ones_like(t)
    while True:
        short = np.asarray(lindley_cdf(rate, hi)) < t
        if not np.any(short):
            break
        hi = np.where(short, hi * 2.0, hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.all((mid <= lo) | (mid >= hi)):
            break
        below = np.asarray(lindley_cdf(rate, mid)) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return hi


def sample(
    p: EdlidParams,
    count: int,
    seed: int | np.random.Generator | None = None,
    method: str = "inverse",
) -> np.ndarray:
    """Draw ``count`` iid EDLiD variates.

    Parameters
    ----------
    p : EdlidParams
    count : int
        Number of draws, ``>= 1``.
    seed : int or numpy.random.Generator, optional
        Seed or a caller-owned generator.
    method : {"inverse", "continuous"}
        ``"inverse"`` inverts the discrete CDF by table search.
        ``"continuous"`` draws ``z`` from the exponentiated continuous Lindley
        law with rate ``-ln a`` and returns ``ceil(z) - 1``.

    Returns
    -------
    numpy.ndarray of int64
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    if method == "inverse":
        tab = _cdf_table(p, float(u.max()))
        return np.searchsorted(tab, u, side="left").astype(np.int64)
    if method == "continuous":
        with np.errstate(under="ignore"):
            t = u ** (1.0 / p.b)
        z = _lindley_inverse(-p.log_a, t)
        return np.maximum(np.ceil(z) - 1.0, 0.0).astype(np.int64)
    raise ValueError(f"unknown sampling method {method!r}")
