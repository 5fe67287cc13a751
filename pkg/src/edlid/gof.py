"""Model-selection statistics: information criteria, expected frequencies and
the pooled chi-square goodness-of-fit test."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .competitors import model_pmf, model_sf
from .datasets import CountData
from .estimation import FitResult
from .special import chi2_sf

__all__ = [
    "GofReport",
    "information_criteria",
    "expected_frequencies",
    "pool_cells",
    "chi_square_test",
    "gof_report",
    "POOL_RULES",
    "MIN_CELL",
]

MIN_CELL = 5.0
POOL_RULES = ("observed", "expected")


def information_criteria(L: float, k: int, n: int) -> tuple[float, float, float, float]:
    """Return ``(AIC, CAIC, BIC, HQIC)`` for log-likelihood ``L``.

    ``CAIC`` is the small-sample corrected AIC.
    """
    if k < 0 or n <= k + 1:
        raise ValueError(f"need n > k + 1 (got n={n}, k={k})")
    aic = 2.0 * k - 2.0 * L
    caic = aic + 2.0 * k * (k + 1) / (n - k - 1)
    bic = k * math.log(n) - 2.0 * L
    hqic = 2.0 * k * math.log(math.log(n)) - 2.0 * L
    return aic, caic, bic, hqic


def expected_frequencies(
    pmf: Callable[[np.ndarray], np.ndarray],
    sf: Callable[[float], float],
    n: int,
    last: int,
) -> np.ndarray:
    """Expected counts on cells ``0, 1, ..., last``.

    Interior cells get ``n * pmf(x)``; the last cell is the open tail
    ``n * P(X >= last)``, so the counts add up to ``n``.
    """
    if last < 0:
        raise ValueError("last cell must be non-negative")
    ef = np.empty(last + 1)
    if last > 0:
        ef[:-1] = n * np.asarray(pmf(np.arange(last)), dtype=float)
    ef[-1] = n * float(sf(last - 1)) if last > 0 else float(n)
    return ef


def pool_cells(
    observed: Sequence[float],
    expected: Sequence[float],
    rule: str = "observed",
    min_cell: float = MIN_CELL,
) -> list[tuple[int, int]]:
    """Group adjacent cells for the chi-square test.

    Returns ``(first, last)`` index ranges.

    ``rule="observed"`` scans from the low end and closes a group once its
    observed count reaches ``min_cell``; whatever is left at the top joins the
    final group.  ``rule="expected"`` scans from the top and merges tail cells
    until the pooled expected count reaches ``min_cell``.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape or obs.ndim != 1 or obs.size == 0:
        raise ValueError("observed and expected must be aligned non-empty vectors")
    m = obs.size
    groups: list[tuple[int, int]] = []
    if rule == "observed":
        start, acc = 0, 0.0
        for i in range(m):
            acc += obs[i]
            if acc >= min_cell:
                groups.append((start, i))
                start, acc = i + 1, 0.0
        if start < m:
            if groups:
                groups[-1] = (groups[-1][0], m - 1)
            else:
                groups.append((0, m - 1))
    elif rule == "expected":
        end, acc = m - 1, 0.0
        for i in range(m - 1, -1, -1):
            acc += exp[i]
            if acc >= min_cell:
                groups.append((i, end))
                end, acc = i - 1, 0.0
        if end >= 0:
            if groups:
                groups[-1] = (0, groups[-1][1])
            else:
                groups.append((0, m - 1))
        groups.reverse()
    else:
        raise ValueError(f"unknown pooling rule {rule!r}; choose from {POOL_RULES}")
    return groups


def chi_square_test(
    observed: Sequence[float],
    expected: Sequence[float],
    n_params: int,
    rule: str = "observed",
) -> tuple[float, int, float, list[tuple[int, int]]]:
    """Pooled Pearson statistic.

    Returns ``(chi2, dof, p_value, groups)``; ``dof = groups - 1 - n_params``.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape:
        raise ValueError("observed and expected must be aligned")
    if not math.isclose(obs.sum(), exp.sum(), rel_tol=1e-6):
        raise ValueError(f"totals differ: observed {obs.sum()} vs expected {exp.sum()}")
    groups = pool_cells(obs, exp, rule)
    po = np.array([obs[i : j + 1].sum() for i, j in groups])
    pe = np.array([exp[i : j + 1].sum() for i, j in groups])
    dof = len(groups) - 1 - n_params
    if dof < 1:
        raise ValueError(f"non-positive degrees of freedom ({dof}) after pooling")
    stat = float(np.sum((po - pe) ** 2 / pe))
    return stat, dof, chi2_sf(stat, dof), groups


@dataclass(frozen=True)
class GofReport:
    model: str
    params: tuple[float, ...]
    neg_log_lik: float
    aic: float
    caic: float
    bic: float
    hqic: float
    chi2: float
    dof: int
    p_value: float
    observed: list[tuple[str, float]]
    expected: list[tuple[str, float]]
    converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _label(i: int, j: int, last: int, open_tail: bool) -> str:
    if j == last and open_tail:
        return f">={i}"
    return str(i) if i == j else f"{i}-{j}"


def gof_report(fit: FitResult, data: CountData, rule: str = "observed", open_tail: bool = True) -> GofReport:
    """Information criteria and pooled chi-square test for a fitted model.

    Cells run from 0 to the largest observation; the last cell collects the
    whole upper tail.  ``open_tail`` only affects the cell label.
    """
    last = data.max
    obs = np.zeros(last + 1)
    obs[data.values] = data.freqs
    ef = expected_frequencies(lambda x: model_pmf(fit.dist, x), lambda x: model_sf(fit.dist, x), data.n, last)
    chi2, dof, p, groups = chi_square_test(obs, ef, fit.k, rule)
    aic, caic, bic, hqic = information_criteria(-fit.neg_log_lik, fit.k, data.n)
    labels = [_label(i, j, last, open_tail) for i, j in groups]
    return GofReport(
        model=fit.model,
        params=tuple(fit.params),
        neg_log_lik=fit.neg_log_lik,
        aic=aic,
        caic=caic,
        bic=bic,
        hqic=hqic,
        chi2=chi2,
        dof=dof,
        p_value=p,
        observed=[(lab, float(obs[i : j + 1].sum())) for lab, (i, j) in zip(labels, groups)],
        expected=[(lab, float(ef[i : j + 1].sum())) for lab, (i, j) in zip(labels, groups)],
        converged=fit.converged,
    )
