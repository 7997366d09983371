"""Secrecy-rate expressions at a single port, in bits per channel use.

All functions broadcast over numpy arrays. The ``*_raw`` kernels skip input
validation and do not apply the ``[.]^+`` clamp; the optimizers work on them
and clamp only final values.

Notation: ``gh1 = |h1|^2``, ``gh2 = |h2|^2`` (Alice antennas to Bob's active
port), ``gg1 = |g1|^2``, ``gg2 = |g2|^2`` (to Eve). Noise power is 1.
"""

from dataclasses import dataclass

import numpy as np

FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class GainQuad:
    gh1: float
    gh2: float
    gg1: float
    gg2: float

    def __post_init__(self):
        for v in self.astuple():
            a = np.asarray(v, dtype=float)
            if not np.all(np.isfinite(a)) or np.any(a < 0):
                raise ValueError(f"channel power gains must be finite and >= 0: {self}")

    @classmethod
    def at_port(cls, real, n: int) -> "GainQuad":
        """Gains seen when Bob activates port ``n`` (0-based) of a realization."""
        return cls(
            float(abs(real.h1[n]) ** 2),
            float(abs(real.h2[n]) ** 2),
            float(abs(real.g1) ** 2),
            float(abs(real.g2) ** 2),
        )

    @classmethod
    def all_ports(cls, real) -> "GainQuad":
        """Array-valued quad over every port of a realization."""
        n = real.h1.shape[-1]
        return cls(
            np.abs(real.h1) ** 2,
            np.abs(real.h2) ** 2,
            np.full(n, abs(real.g1) ** 2),
            np.full(n, abs(real.g2) ** 2),
        )

    def astuple(self):
        return self.gh1, self.gh2, self.gg1, self.gg2


@dataclass(frozen=True)
class PowerAllocation:
    p1: float
    p2: float
    P: float

    def __post_init__(self):
        p1 = np.asarray(self.p1, dtype=float)
        p2 = np.asarray(self.p2, dtype=float)
        if not np.all(np.asarray(self.P) > 0):
            raise ValueError(f"power budget must be positive, got {self.P!r}")
        if np.any(p1 < 0) or np.any(p2 < 0):
            raise ValueError("transmit powers must be non-negative")
        if np.any(p1 + p2 > np.asarray(self.P) + FEASIBILITY_SLACK):
            raise ValueError("p1 + p2 exceeds the power budget")


def _log2_ratio(num, den):
    return np.log2(num) - np.log2(den)


def gn_raw(gh1, gh2, gg1, gg2, p1, p2):
    bob = 1.0 + p1 * gh1 / (p2 * gh2 + 1.0)
    eve = 1.0 + p1 * gg1 / (p2 * gg2 + 1.0)
    return _log2_ratio(bob, eve)


def hat_raw(gh1, gh2, gg1, gg2, p1, p2):
    return _log2_ratio(1.0 + p1 * gh1, 1.0 + p1 * gg1 / (p2 * gg2 + 1.0))


def tilde_raw(gh1, gh2, gg1, gg2, p1, p2):
    return _log2_ratio(1.0 + p1 * gh1 + p2 * gh2, 1.0 + p1 * gg1 + p2 * gg2)


def bar_raw(gh1, gh2, gg1, gg2, p1, p2=0.0):
    return _log2_ratio(1.0 + p1 * gh1, 1.0 + p1 * gg1)


def ej_raw(gh1, gh2, gg1, gg2, p1, p2):
    """Clamped coding-enhanced jamming rate ``max(min(R^, R~), R-)``."""
    hat = np.maximum(hat_raw(gh1, gh2, gg1, gg2, p1, p2), 0.0)
    tilde = np.maximum(tilde_raw(gh1, gh2, gg1, gg2, p1, p2), 0.0)
    bar = np.maximum(bar_raw(gh1, gh2, gg1, gg2, p1), 0.0)
    return np.maximum(np.minimum(hat, tilde), bar)


def _clamped(x):
    out = np.maximum(x, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def rate_gn(q: GainQuad, a: PowerAllocation):
    """Gaussian-noise jamming secrecy rate; the jammer also hits Bob."""
    return _clamped(gn_raw(*q.astuple(), a.p1, a.p2))


def rate_hat(q: GainQuad, a: PowerAllocation):
    """Secret-message bound: Bob cancels the jamming codeword, Eve cannot."""
    return _clamped(hat_raw(*q.astuple(), a.p1, a.p2))


def rate_tilde(q: GainQuad, a: PowerAllocation):
    """Sum-rate bound over the secret and auxiliary messages."""
    return _clamped(tilde_raw(*q.astuple(), a.p1, a.p2))


def rate_bar(q: GainQuad, a: PowerAllocation):
    """Rate without jamming; ignores ``p2``."""
    return _clamped(bar_raw(*q.astuple(), a.p1))


def rate_ej(q: GainQuad, a: PowerAllocation):
    """Coding-enhanced jamming secrecy rate."""
    out = ej_raw(*q.astuple(), a.p1, a.p2)
    return float(out) if np.ndim(out) == 0 else out
