from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wtwist.coeff import DEFAULT_SEEDS, DivisionByZero, InvalidParamPoint, ParamPoint, param_points, probe

settings.register_profile("wtwist", deadline=None, derandomize=True, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("wtwist")

SEED0 = DEFAULT_SEEDS[0]


@pytest.fixture(scope="session")
def p1():
    return ParamPoint(*SEED0, 1)


@pytest.fixture(scope="session")
def p2():
    return ParamPoint(*SEED0, 2)


@pytest.fixture(scope="session")
def p3():
    return ParamPoint(*SEED0, 3)


def points(N: int) -> list[ParamPoint]:
    return param_points(N)


def _valid(u, t, N):
    try:
        p = ParamPoint(u, t, N)
        probe(p)
    except (InvalidParamPoint, DivisionByZero):
        return None
    return p


small_rationals = st.builds(Fraction, st.integers(1, 9), st.integers(2, 13)).filter(lambda q: q < 1)


@st.composite
def param_point(draw, N=st.integers(1, 3)):
    n = draw(N) if not isinstance(N, int) else N
    u = draw(small_rationals)
    t = draw(small_rationals)
    p = _valid(u, t, n)
    from hypothesis import assume
    assume(p is not None)
    return p


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
