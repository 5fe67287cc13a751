"""Special functions used by the goodness-of-fit layer."""

from __future__ import annotations

import math

from scipy import special as _sp


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def chi2_sf(x: float, k: float) -> float:
    """Upper-tail probability of a chi-square variable with ``k`` degrees of freedom.

    Evaluates the regularized upper incomplete gamma function ``Q(k/2, x/2)``.

    Parameters
    ----------
    x : float
        Statistic value, ``x >= 0``.
    k : float
        Degrees of freedom, ``k > 0``.

    Returns
    -------
    float
        ``P(X > x)`` for ``X ~ chi2(k)``.
    """
    x = float(x)
    k = float(k)
    if not k > 0.0:
        raise ValueError(f"chi2_sf requires k > 0, got {k!r}")
    if not x >= 0.0:
        raise ValueError(f"chi2_sf requires x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    return float(_sp.gammaincc(0.5 * k, 0.5 * x))
