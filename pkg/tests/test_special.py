import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edlid.special import chi2_sf, log_gamma


@pytest.fixture(autouse=True)
def _mp_precision():
    # scoped so modules do not overwrite each other's setting
    with mpmath.workdps(40):
        yield


def mp_chi2_sf(x, k):
    return float(mpmath.gammainc(mpmath.mpf(k) / 2, mpmath.mpf(x) / 2, mpmath.inf, regularized=True))


@pytest.mark.parametrize("x", [0.5, 1.0, 2.5, 10.0, 171.3, 1e-3])
def test_log_gamma_matches_mpmath(x):
    assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-14, abs=1e-14)


def test_log_gamma_integers_are_log_factorials():
    for n in range(1, 30):
        assert log_gamma(n) == pytest.approx(math.log(math.factorial(n - 1)), rel=1e-14, abs=1e-15)


@given(st.floats(min_value=0.01, max_value=50.0))
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1) == pytest.approx(log_gamma(x) + math.log(x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, float("nan")])
def test_log_gamma_rejects_non_positive(x):
    with pytest.raises(ValueError):
        log_gamma(x)


@settings(max_examples=60)
@given(st.floats(min_value=0.0, max_value=80.0), st.integers(min_value=1, max_value=30))
def test_chi2_sf_matches_mpmath(x, k):
    assert chi2_sf(x, k) == pytest.approx(mp_chi2_sf(x, k), rel=1e-10, abs=1e-300)


@given(st.floats(min_value=0.0, max_value=200.0))
def test_chi2_sf_two_dof_closed_form(x):
    assert chi2_sf(x, 2) == pytest.approx(math.exp(-x / 2), rel=1e-12, abs=1e-300)


def test_chi2_sf_known_values():
    assert chi2_sf(3.84145882069412, 1) == pytest.approx(0.05, rel=1e-9)
    assert chi2_sf(0.0, 3) == 1.0


@given(st.floats(min_value=0.0, max_value=40.0), st.floats(min_value=0.0, max_value=5.0))
def test_chi2_sf_decreasing(x, dx):
    assert chi2_sf(x + dx, 3) <= chi2_sf(x, 3) + 1e-15


@pytest.mark.parametrize("x,k", [(-1.0, 2), (1.0, 0), (1.0, -2)])
def test_chi2_sf_domain(x, k):
    with pytest.raises(ValueError):
        chi2_sf(x, k)
