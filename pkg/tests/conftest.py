import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from dedekind_periods.forms import eta_power  # noqa: E402
from dedekind_periods.iterated import FormFamily  # noqa: E402

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def delta():
    return eta_power(12)


@pytest.fixture(scope="session")
def eta106():
    """eta^(10.6), weight 5.3."""
    return eta_power(Fraction(53, 10))


@pytest.fixture(scope="session")
def fam_delta(delta):
    return FormFamily([delta])


@pytest.fixture(scope="session")
def fam_pair(delta, eta106):
    return FormFamily([delta, eta106])


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("DEDEKIND_PERIODS_CACHE", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
