from pathlib import Path

import pytest

from filiform.exactmath import Polynomial, parse_polynomial

DATA = Path(__file__).parent / "data"


def load_golden(name):
    """Read a bracket table file: lines 'i j h coefficient'."""
    table = {}
    for line in (DATA / name).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j, h, coeff = line.split(maxsplit=3)
        table[(int(i), int(j))] = (int(h), parse_polynomial(coeff))
    return table


@pytest.fixture(scope="session")
def golden_4_9_15():
    return load_golden("law_4_9_15.txt")


def const(c):
    return Polynomial.const(c)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    return request.config._acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
