import pytest

from ricsim.states import TelecloningParams

ALPHAS = (0.0, 0.28, 0.6, 0.8, 1.0)
PS = (0.5, 0.6, 0.7, 0.9, 1.0)
GRID = [TelecloningParams(a, p=p) for a in ALPHAS for p in PS]


def ghz_coefficient(triple, p):
    """Closed-form amplitude factor c of a GHZ branch, P = c^2 / 16N.

    Bell outcomes 0,1 fix the measured pair to equal bits, 2,3 to opposite
    bits; the resulting ABC bit pattern (with D = 0) selects a term of the
    telecloning state or none.
    """
    bits = "".join("0" if i < 2 else "1" for i in triple)
    return {"000": 1, "111": 1, "101": p, "010": p, "110": 1 - p, "001": 1 - p}.get(bits, 0)


@pytest.fixture
def params():
    return TelecloningParams(0.6, p=0.7)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
