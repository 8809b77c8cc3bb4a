import pytest

from invring.coeff_rings import CoeffRing
from invring.fields import Cyc
from invring.group_action import generate_closure
from invring.polynomial import Poly


@pytest.fixture(scope="session")
def Z():
    return CoeffRing.integers()


@pytest.fixture(scope="session")
def O3():
    return CoeffRing.cyclotomic(3, localize=True)


@pytest.fixture(scope="session")
def z3():
    return Cyc.zeta(3)


@pytest.fixture(scope="session")
def minus_identity(Z):
    return generate_closure([[[-1, 0], [0, -1]]], Z)


def xy(ring):
    return Poly.var(2, 0, ring.one), Poly.var(2, 1, ring.one)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
