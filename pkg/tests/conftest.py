import os

import pytest
from hypothesis import settings

from landau_mra.filters import builtin
from landau_mra.landau import LLLState
from landau_mra.lattice import SQUARE, TRIANGULAR, make_lattice

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def tri():
    return make_lattice(TRIANGULAR)


@pytest.fixture(scope="session")
def tri3():
    return make_lattice(TRIANGULAR, 3)


@pytest.fixture(scope="session")
def sq():
    return make_lattice(SQUARE)


@pytest.fixture(scope="session")
def psi3(tri3):
    return LLLState.from_filter(builtin("haar3"), tri3)


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """report(n, passed, detail): one PASS/FAIL line per acceptance criterion."""

    def report(n, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {n:>2}: {detail}"
        _CRITERIA.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
