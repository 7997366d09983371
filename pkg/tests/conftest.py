import math

import mpmath
import numpy as np
import pytest

from fas_secrecy.channel import ChannelRealization


def series_j0(x, dps=60):
    """J0 from its power series, summed in high precision until a term < 1e-18."""
    with mpmath.workdps(dps):
        half = mpmath.mpf(x) / 2
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        m = 0
        while True:
            m += 1
            term = -term * half * half / (m * m)
            total += term
            if abs(term) < mpmath.mpf("1e-18"):
                return float(total)


def _hat(gh1, gg1, gg2, P, p1):
    p2 = P - p1
    return math.log2(1 + p1 * gh1) - math.log2(1 + p1 * gg1 / (p2 * gg2 + 1))


def literal_rhat(P, gh1, gg1, gg2, lb, ub):
    """R^ maximiser by the explicit four-way case rule on (a, b, c); scalar math only."""
    s = P * gg2 + 1
    a = -gh1 * gg2 * (gg1 - gg2)
    b = -2 * gh1 * gg2 * s
    c = gh1 * s * s - gg1 * s

    def best(points):
        vals = [_hat(gh1, gg1, gg2, P, p) for p in points]
        k = max(range(len(points)), key=lambda i: (vals[i], -points[i]))
        return points[k], vals[k]

    if a == 0 and b != 0 and lb < -c / b < ub:
        p = -c / b
        return p, _hat(gh1, gg1, gg2, P, p)
    disc = b * b - 4 * a * c
    if a != 0 and disc >= 0:
        alpha = (-b - math.sqrt(disc)) / (2 * a)
        if a > 0 and lb < alpha < ub:
            return best([alpha, ub])
        if a < 0 and disc > 0 and lb < alpha < ub:
            return best([lb, alpha])
    return best([lb, ub])


def cn(rng, n=None):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)


def random_realization(rng, n):
    return ChannelRealization(cn(rng, n), cn(rng, n), complex(cn(rng)), complex(cn(rng)))


def single_port(gh1, gh2, gg1, gg2):
    r = lambda v: complex(math.sqrt(v))
    return ChannelRealization(np.array([r(gh1)]), np.array([r(gh2)]), r(gg1), r(gg2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")
