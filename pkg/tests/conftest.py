import pytest

from edlid.core import EdlidParams
from edlid.datasets import dataset_I, dataset_II
from edlid.estimation import fit_mle

GRID = [EdlidParams(a, b) for a in (0.1, 0.3, 0.5, 0.7, 0.9) for b in (0.3, 1.0, 2.0, 5.0)]


@pytest.fixture(scope="session")
def data_I():
    return dataset_I().data


@pytest.fixture(scope="session")
def data_II():
    return dataset_II().data


@pytest.fixture(scope="session")
def fit_I(data_I):
    return fit_mle(data_I)


@pytest.fixture(scope="session")
def fit_II(data_II):
    return fit_mle(data_II)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
