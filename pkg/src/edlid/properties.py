"""Moments, generating function, residual/past lifetimes, stress-strength
reliability, order statistics and L-moments of the EDLiD.

Series over the support are truncated at a point chosen so that a rigorous
geometric bound on the neglected tail falls below the requested tolerance.
The discrete reliability in the series identities is ``P(X >= x)``, i.e.
``[(1 - ln a)**b - Lambda(x)] / (1 - ln a)**b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import core
from .core import EdlidParams

__all__ = [
    "SeriesConvergenceError",
    "MomentSummary",
    "LMomentSummary",
    "raw_moment",
    "moment_summary",
    "pgf",
    "mrl",
    "mpl",
    "mean_decomposition_residual",
    "stress_strength",
    "os_cdf",
    "os_pmf",
    "os_moment",
    "l_moments",
    "MAX_OS_SIZE",
]

DEFAULT_TOL = 1e-10
MAX_OS_SIZE = 30


class SeriesConvergenceError(ArithmeticError):
    """The tail bound of a series could not be pushed below the tolerance."""


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    skewness: float
    kurtosis: float
    raw: tuple[float, float, float, float]
    truncation_bound: float


@dataclass(frozen=True)
class LMomentSummary:
    l1: float
    l2: float | None = None
    l3: float | None = None
    l4: float | None = None
    lm_cv: float | None = None
    lm_sk: float | None = None
    lm_ku: float | None = None


# ---------------------------------------------------------------------------
# truncation machinery
# ---------------------------------------------------------------------------


def _ge(p: EdlidParams, x) -> np.ndarray:
    """``P(X >= x)``."""
    return np.asarray(core.survival(p, np.asarray(x, dtype=float) - 1.0))


def _tail_bound(p: EdlidParams, cut: int, r: int) -> float:
    """Upper bound on ``sum_{x > cut} x**r f(x)``.

    Uses ``P(X > x) <= max(1, b) * (1 - W(x))`` together with the closed form
    ``1 - W(x) = a**(x+1) (1 - (x+2) ln a) / (1 - ln a)``; the resulting
    majorant has a ratio of consecutive terms that decreases in ``x``, so the
    remainder is dominated by a geometric series.
    """
    s_cut = float(core.survival(p, cut))
    if r == 0:
        return s_cut
    a, la = p.a, p.log_a
    c = max(1.0, p.b)
    j = cut + 1
    q = a * ((j + 1.0) / j) ** (r - 1) * (1.0 - (j + 2.0) * la) / (1.0 - (j + 1.0) * la)
    if q >= 1.0:
        return math.inf
    t = c * r * j ** (r - 1) * math.exp(j * la) * (1.0 - (j + 1.0) * la) / (1.0 - la)
    return float(cut) ** r * s_cut + t / (1.0 - q)


def _cutoff(p: EdlidParams, r: int, tol: float, scale: float = 1.0, at_least: int = 0):
    cut = max(core.tail_cutoff(p), at_least, 1)
    while True:
        bound = scale * _tail_bound(p, cut, r)
        if bound <= tol:
            return cut, bound
        if cut >= core.TAIL_CAP:
            raise SeriesConvergenceError(
                f"tail bound {bound:.3g} exceeds tol {tol:.3g} at the cap {core.TAIL_CAP}"
            )
        cut = min(2 * cut, core.TAIL_CAP)


# ---------------------------------------------------------------------------
# moments and PGF
# ---------------------------------------------------------------------------


def raw_moment(p: EdlidParams, r: int, tol: float = DEFAULT_TOL, full_output: bool = False):
    """``E[X**r]`` from the survival-weighted series.

    ``E[X**r] = sum_{x>=1} (x**r - (x-1)**r) P(X >= x)``.

    Parameters
    ----------
    p : EdlidParams
    r : int
        Moment order, ``>= 1``.
    tol : float
        Maximum admissible truncation error.
    full_output : bool
        Also return the truncation bound.

    Returns
    -------
    float, or (float, float) when ``full_output`` is set.
    """
    if r < 1:
        raise ValueError("moment order must be >= 1")
    cut, bound = _cutoff(p, r, tol)
    x = np.arange(1, cut + 1, dtype=float)
    terms = (x**r - (x - 1.0) ** r) * _ge(p, x)
    val = math.fsum(terms)
    return (val, bound) if full_output else val


def moment_summary(p: EdlidParams, tol: float = DEFAULT_TOL) -> MomentSummary:
    """Mean, variance, skewness and kurtosis.

    Kurtosis is the standardized central fourth moment ``E[(X - mean)**4] / var**2``.
    """
    raws = []
    bound = 0.0
    for r in (1, 2, 3, 4):
        m, bd = raw_moment(p, r, tol, full_output=True)
        raws.append(m)
        bound = max(bound, bd)
    m1, m2, m3, _ = raws
    var = m2 - m1 * m1
    skew = (m3 - 3.0 * m2 * m1 + 2.0 * m1**3) / var**1.5
    cut, _ = _cutoff(p, 4, tol, at_least=int(2 * m1) + 1)
    x = np.arange(0, cut + 1, dtype=float)
    c4 = math.fsum((x - m1) ** 4 * np.asarray(core.pmf(p, x)))
    return MomentSummary(m1, var, skew, c4 / var**2, tuple(raws), bound)


def pgf(p: EdlidParams, t: float, tol: float = DEFAULT_TOL) -> float:
    """Probability generating function ``E[t**X]`` for ``|t| <= 1``."""
    t = float(t)
    if abs(t) > 1.0:
        raise ValueError("pgf requires |t| <= 1")
    if t == 1.0:
        return 1.0
    cut, _ = _cutoff(p, 1, tol / 2.0)
    x = np.arange(1, cut + 1, dtype=float)
    return 1.0 + (t - 1.0) * math.fsum(t ** (x - 1.0) * _ge(p, x))


# ---------------------------------------------------------------------------
# residual and past lifetimes
# ---------------------------------------------------------------------------


def mrl(p: EdlidParams, i: int, horizon: int | None = None, tol: float = DEFAULT_TOL) -> float:
    """Mean residual lifetime ``E[T - i | T >= i]``.

    The sum runs over ``j = i+1 .. horizon``; by default the horizon is the
    point beyond which the neglected tail is below ``tol``.
    """
    if i < 0:
        raise ValueError("mrl requires i >= 0")
    denom = float(_ge(p, i))
    if denom <= 0.0:
        raise ZeroDivisionError(f"P(T >= {i}) vanishes numerically")
    if horizon is None:
        # relative accuracy: the sum is divided by P(T >= i)
        horizon, _ = _cutoff(p, 1, tol * min(1.0, denom), at_least=i + 1)
    elif horizon < i + 1:
        raise ValueError("horizon must be >= i + 1")
    j = np.arange(i + 1, horizon + 1, dtype=float)
    return math.fsum(_ge(p, j)) / denom


def mpl(p: EdlidParams, i: int) -> float:
    """Mean past lifetime ``E[i - T | T < i]``; zero at ``i = 0``."""
    if i < 0:
        raise ValueError("mpl requires i >= 0")
    if i == 0:
        return 0.0
    m = np.arange(0, i, dtype=float)
    cdfs = np.asarray(core.cdf(p, m))
    return float(math.fsum(cdfs) / cdfs[-1])


def mean_decomposition_residual(p: EdlidParams, i: int, tol: float = DEFAULT_TOL) -> float:
    """Mean minus its decomposition ``i - F(i-1) mpl(i) + P(T >= i) mrl(i)``."""
    zeta = raw_moment(p, 1, tol)
    f_prev = float(core.cdf(p, i - 1))
    ge_i = float(_ge(p, i))
    return float(zeta - (i - f_prev * mpl(p, i) + ge_i * mrl(p, i, tol=tol)))


# ---------------------------------------------------------------------------
# stress-strength
# ---------------------------------------------------------------------------


def stress_strength(
    p1: EdlidParams, p2: EdlidParams, strict: bool = False, tol: float = DEFAULT_TOL
) -> float:
    """Reliability ``P(X1 <= X2)`` for independent stress ``X1`` and strength ``X2``.

    With ``strict=True`` the strict-inequality probability ``P(X1 < X2)`` is
    returned instead.
    """
    cut, _ = _cutoff(p1, 0, tol)
    x = np.arange(0, cut + 1, dtype=float)
    strength = np.asarray(core.survival(p2, x)) if strict else _ge(p2, x)
    return math.fsum(np.asarray(core.pmf(p1, x)) * strength)


# ---------------------------------------------------------------------------
# order statistics
# ---------------------------------------------------------------------------


def _check_os(i: int, n: int) -> None:
    if not (1 <= n <= MAX_OS_SIZE):
        raise ValueError(f"sample size n must lie in 1..{MAX_OS_SIZE}, got {n}")
    if not (1 <= i <= n):
        raise IndexError(f"order index i must lie in 1..{n}, got {i}")


@lru_cache(maxsize=None)
def _os_coeffs(i: int, n: int) -> tuple[int, ...]:
    """Integer weights ``c_m`` with ``F_{i:n} = sum_m c_m F**m``, ``m = 0..n``.

    ``c_m`` collects ``(-1)**j C(n, k) C(n-k, j)`` over ``k + j = m``.
    """
    c = [0] * (n + 1)
    for k in range(i, n + 1):
        for j in range(0, n - k + 1):
            c[k + j] += (-1) ** j * math.comb(n, k) * math.comb(n - k, j)
    return tuple(c)


def _poly_exact(coeffs: tuple[int, ...], f: float) -> Fraction:
    fr = Fraction(f)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * fr + c
    return acc


def _clamp(v: float) -> float:
    if not (-1e-12 <= v <= 1.0 + 1e-12):
        raise ArithmeticError(f"order-statistic probability {v!r} outside [0, 1]")
    return min(max(v, 0.0), 1.0)


def os_cdf(p: EdlidParams, i: int, n: int, x):
    """CDF of the ``i``-th order statistic of an iid sample of size ``n``.

    The alternating double sum is accumulated in exact rational arithmetic on
    the floating-point base CDF, so no digits are lost to cancellation.
    """
    _check_os(i, n)
    xx = np.asarray(x, dtype=float)
    coeffs = _os_coeffs(i, n)
    base = np.atleast_1d(np.asarray(core.cdf(p, xx)))
    out = np.array([_clamp(float(_poly_exact(coeffs, f))) for f in base])
    return float(out[0]) if xx.ndim == 0 else out.reshape(xx.shape)


def os_pmf(p: EdlidParams, i: int, n: int, x):
    """PMF of the ``i``-th order statistic, from the double-sum difference form."""
    _check_os(i, n)
    xx = np.asarray(x, dtype=float)
    coeffs = _os_coeffs(i, n)
    hi = np.atleast_1d(np.asarray(core.cdf(p, xx)))
    lo = np.atleast_1d(np.asarray(core.cdf(p, xx - 1.0)))
    out = np.array(
        [_clamp(float(_poly_exact(coeffs, f1) - _poly_exact(coeffs, f0))) for f1, f0 in zip(hi, lo)]
    )
    return float(out[0]) if xx.ndim == 0 else out.reshape(xx.shape)


def os_moment(
    p: EdlidParams, i: int, n: int, v: int = 1, tol: float = DEFAULT_TOL, full_output: bool = False
):
    """``E[X_{i:n}**v]``.

    The tail of any order statistic is dominated by that of the maximum,
    ``P(X_{n:n} > x) <= n P(X > x)``, which sets the truncation point.
    """
    _check_os(i, n)
    if v < 1:
        raise ValueError("moment order must be >= 1")
    cut, bound = _cutoff(p, v, tol, scale=float(n))
    x = np.arange(0, cut + 1, dtype=float)
    val = math.fsum(x**v * os_pmf(p, i, n, x))
    return (val, bound) if full_output else val


def l_moments(p: EdlidParams, order: int = 4, tol: float = DEFAULT_TOL) -> LMomentSummary:
    """Population L-moments up to ``order`` (at most 4) and their ratios.

    ``l_s = (1/s) sum_{j=0}^{s-1} (-1)**j C(s-1, j) E[X_{s-j:s}]``; the ratios
    are ``l2/l1``, ``l3/l2`` and ``l4/l2``.
    """
    if not (1 <= order <= 4):
        raise ValueError("order must lie in 1..4")
    ls = []
    for s in range(1, order + 1):
        acc = math.fsum(
            (-1) ** j * math.comb(s - 1, j) * os_moment(p, s - j, s, 1, tol) for j in range(s)
        )
        ls.append(acc / s)
    ls += [None] * (4 - order)
    l1, l2, l3, l4 = ls
    return LMomentSummary(
        l1=l1,
        l2=l2,
        l3=l3,
        l4=l4,
        lm_cv=None if l2 is None else l2 / l1,
        lm_sk=None if l3 is None else l3 / l2,
        lm_ku=None if l4 is None else l4 / l2,
    )
