import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edlid import core
from edlid.competitors import fit_model
from edlid.gof import (
    GofReport,
    chi_square_test,
    expected_frequencies,
    gof_report,
    information_criteria,
    pool_cells,
)
from edlid.special import chi2_sf


def test_information_criteria_formulas():
    aic, caic, bic, hqic = information_criteria(-100.0, 2, 50)
    assert aic == 204.0
    assert caic == pytest.approx(204.0 + 12.0 / 47.0)
    assert bic == pytest.approx(2 * math.log(50) + 200.0)
    assert hqic == pytest.approx(4 * math.log(math.log(50)) + 200.0)


def test_information_criteria_without_parameters():
    aic, caic, _, _ = information_criteria(-3.0, 0, 10)
    assert aic == caic == 6.0


def test_information_criteria_domain():
    with pytest.raises(ValueError):
        information_criteria(-1.0, 3, 4)


def test_information_criteria_reference(fit_I, fit_II):
    aic, _, bic, hqic = information_criteria(fit_I.log_lik, 2, 647)
    assert aic == pytest.approx(1187.8, abs=0.2)
    assert bic == pytest.approx(1196.8, abs=0.2)
    assert hqic == pytest.approx(1191.3, abs=0.2)
    aic, caic, _, _ = information_criteria(fit_II.log_lik, 2, 110)
    assert aic == pytest.approx(337.9, abs=0.2)
    assert caic == pytest.approx(338.0, abs=0.2)


def test_expected_frequencies_tail_closure(fit_I):
    p = fit_I.dist
    ef = expected_frequencies(lambda x: core.pmf(p, x), lambda x: core.survival(p, x), 647, 5)
    assert math.fsum(ef) == pytest.approx(647.0, abs=1e-9)
    assert ef[0] == pytest.approx(446.91, abs=0.02)
    assert ef[-1] == pytest.approx(2.19, abs=0.02)


def test_expected_frequencies_single_cell():
    ef = expected_frequencies(lambda x: x, lambda x: 0.0, 12, 0)
    assert ef.tolist() == [12.0]


def test_pool_by_observed_counts():
    obs = [447, 132, 42, 21, 3, 2]
    assert pool_cells(obs, obs, "observed") == [(0, 0), (1, 1), (2, 2), (3, 3), (4, 5)]
    obs = [65, 14, 10, 6, 4, 2, 2, 2, 1, 1, 1, 2]
    assert pool_cells(obs, obs, "observed") == [(0, 0), (1, 1), (2, 2), (3, 3), (4, 5), (6, 11)]


def test_pool_by_expected_counts():
    exp = [446.91, 131.87, 45.84, 15.28, 4.91, 2.19]
    assert pool_cells(exp, exp, "expected") == [(0, 0), (1, 1), (2, 2), (3, 3), (4, 5)]
    exp = [10.0, 1.0, 1.0]
    assert pool_cells(exp, exp, "expected") == [(0, 2)]


@settings(max_examples=100)
@given(st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=15), st.sampled_from(["observed", "expected"]))
def test_pooling_partitions_cells(counts, rule):
    groups = pool_cells(counts, counts, rule)
    assert groups[0][0] == 0 and groups[-1][1] == len(counts) - 1
    for (i0, j0), (i1, j1) in zip(groups, groups[1:]):
        assert i1 == j0 + 1
    sums = [sum(counts[i : j + 1]) for i, j in groups]
    assert sum(sums) == sum(counts)
    if len(groups) > 1:
        assert all(s >= 5 for s in sums)


def test_pool_rule_validation():
    with pytest.raises(ValueError):
        pool_cells([1, 2], [1, 2], "nearest")


def test_chi_square_exact_fit():
    obs = [30.0, 20.0, 10.0, 8.0]
    chi2, dof, p, _ = chi_square_test(obs, obs, 1)
    assert chi2 == 0.0 and dof == 2 and p == 1.0


def test_chi_square_by_hand():
    obs = np.array([20.0, 30.0, 50.0])
    exp = np.array([25.0, 25.0, 50.0])
    chi2, dof, p, _ = chi_square_test(obs, exp, 0)
    assert chi2 == pytest.approx(2.0)
    assert dof == 2
    assert p == pytest.approx(math.exp(-1.0))


def test_chi_square_signals_no_dof():
    with pytest.raises(ValueError):
        chi_square_test([10.0, 10.0], [10.0, 10.0], 1)
    with pytest.raises(ValueError):
        chi_square_test([10.0, 10.0], [5.0, 10.0], 0)


def test_report_dataset_I(fit_I, data_I):
    rep = gof_report(fit_I, data_I)
    assert isinstance(rep, GofReport)
    assert rep.chi2 == pytest.approx(3.084, abs=0.05)
    assert rep.dof == 2
    assert rep.p_value == pytest.approx(0.214, abs=0.005)
    assert sum(v for _, v in rep.observed) == 647
    assert sum(v for _, v in rep.expected) == pytest.approx(647.0)
    assert rep.expected[-1][0] == ">=4"
    assert '"dof": 2' in rep.to_json()


def test_report_dataset_II(fit_II, data_II):
    rep = gof_report(fit_II, data_II)
    assert rep.chi2 == pytest.approx(0.507, abs=0.05)
    assert rep.dof == 3
    assert [c for c, _ in rep.observed] == ["0", "1", "2", "3", "4-5", ">=6"]


def test_expected_rule_reproduces_dataset_I_edlid(fit_I, data_I):
    rep = gof_report(fit_I, data_I, rule="expected")
    assert rep.dof == 2 and rep.chi2 == pytest.approx(3.077, abs=1e-3)


@pytest.mark.parametrize(
    "models,dofs",
    [
        (["edlid", "dge2", "dw", "dli", "dpa", "poisson"], [2, 2, 2, 3, 3, 3]),
        (["edlid", "dw", "dlo", "geo", "dli", "poisson", "dr"], [3, 3, 3, 4, 4, 4, 4]),
    ],
)
def test_degrees_of_freedom(models, dofs, data_I, data_II):
    data = data_I if len(models) == 6 else data_II
    got = [gof_report(fit_model(m, data), data).dof for m in models]
    assert got == dofs


def test_p_value_decreasing_in_statistic():
    vals = [chi2_sf(x, 3) for x in np.linspace(0, 30, 50)]
    assert all(u >= v for u, v in zip(vals, vals[1:]))
