from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "quadtope",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("quadtope")


def rand_sym(g, n, lo=-5, hi=5, den=4):
    """Seeded random symmetric rational matrix."""
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(int(g.integers(lo * den, hi * den + 1)), den)
            m[i][j] = m[j][i] = v
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE = {}


def record(n, ok, detail=""):
    """Note the outcome of an acceptance criterion for the summary."""
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")
