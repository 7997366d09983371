"""Randomised cross-check of the exact solver against the grid oracle."""

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization, complex_normal
from .optimizer import SolveResult, oracle_ej, solve_all_ports

BUDGETS = (0.1, 1.0, 10.0, 100.0)
# exact value may not fall below any feasible point the oracle found
LOWER_TOL = 1e-9
# grid resolution allowance above the oracle
UPPER_TOL = 1e-3


def random_instance(rng, max_ports=10):
    """i.i.d. CN(0, 1) gains on 1..max_ports ports and a budget from BUDGETS."""
    n = int(rng.integers(1, max_ports + 1))
    P = float(rng.choice(BUDGETS))
    h1 = complex_normal(rng, n)
    h2 = complex_normal(rng, n)
    g = complex_normal(rng, 2)
    return P, ChannelRealization(h1, h2, complex(g[0]), complex(g[1]))


@dataclass
class OracleReport:
    count: int
    steps: int
    min_gap: float = np.inf
    max_gap: float = -np.inf
    worst: tuple = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.min_gap >= -LOWER_TOL and self.max_gap <= UPPER_TOL

    def summary(self) -> str:
        lines = [
            f"instances: {self.count}  oracle steps: {self.steps}",
            f"exact - oracle: min {self.min_gap:.3e}  max {self.max_gap:.3e} bits",
            f"bounds: >= {-LOWER_TOL:.0e}, <= {UPPER_TOL:.0e}",
            "PASS" if self.passed else "FAIL",
        ]
        if not self.passed and self.worst is not None:
            P, real, exact, orc = self.worst
            lines += [
                f"worst instance: P={P!r}",
                f"  |h1|^2={np.abs(real.h1) ** 2!r}",
                f"  |h2|^2={np.abs(real.h2) ** 2!r}",
                f"  |g1|^2={abs(real.g1) ** 2!r} |g2|^2={abs(real.g2) ** 2!r}",
                f"  exact:  {exact}",
                f"  oracle: {orc}",
            ]
        return "\n".join(lines)


def oracle_check(count=10_000, seed=0, steps=2000) -> OracleReport:
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    report = OracleReport(count, steps)
    worst_excess = -np.inf
    for _ in range(count):
        P, real = random_instance(rng)
        exact: SolveResult = solve_all_ports(P, real)
        orc: SolveResult = oracle_ej(P, real, steps=steps)
        gap = exact.value - orc.value
        report.min_gap = min(report.min_gap, gap)
        report.max_gap = max(report.max_gap, gap)
        excess = max(-LOWER_TOL - gap, gap - UPPER_TOL)
        if excess > worst_excess:
            worst_excess = excess
            report.worst = (P, real, exact, orc)
    return report
