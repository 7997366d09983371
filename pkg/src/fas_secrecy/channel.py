"""Port geometry, Jakes spatial correlation and channel sampling.

Bob's fluid antenna has ``N`` ports spread evenly over ``W`` wavelengths.
Port gains from each of Alice's two antennas are correlated complex Gaussians
with covariance ``sigma_k**2 * Sigma``, ``Sigma[n, m] = J0(2*pi*(n - m)*delta)``.
Eve has a single fixed antenna with i.i.d. unit-variance gains. Noise power is
1 at both receivers and is not a parameter.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .specfun import bessel_j0

log = logging.getLogger(__name__)


class ChannelError(ArithmeticError):
    """Raised when the correlation matrix cannot be factored."""


@dataclass(frozen=True)
class PortGrid:
    """Linear FAS geometry: ``N`` ports over a normalised width ``W``."""

    N: int
    W: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"port count must be a positive integer, got {self.N!r}")
        if not np.isfinite(self.W) or self.W <= 0:
            raise ValueError(f"width must be positive, got {self.W!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "W", float(self.W))

    @property
    def spacing(self) -> float:
        """Normalised distance between adjacent ports (0 for a single port)."""
        if self.N == 1:
            return 0.0
        return self.W / (self.N - 1)


@dataclass(frozen=True)
class ChannelFactor:
    """Square-root factor of the port correlation, plus per-link scales.

    ``A @ A.T`` reproduces the correlation matrix; ``h_k = sigma_k * A @ x_k``.
    """

    A: np.ndarray
    sigma1: float = 1.0
    sigma2: float = 1.0
    eigenvalues: np.ndarray = field(default=None, repr=False)
    clamped: int = 0
    negative_mass: float = 0.0

    @property
    def N(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw: Bob-side port vectors and Eve's scalar gains."""

    h1: np.ndarray
    h2: np.ndarray
    g1: complex
    g2: complex

    @property
    def N(self) -> int:
        return self.h1.shape[0]

    def with_eve(self, g1, g2) -> "ChannelRealization":
        return ChannelRealization(self.h1, self.h2, complex(g1), complex(g2))


@dataclass(frozen=True)
class CsiModel:
    """Imperfect Eve CSI: error uniform on a disk of radius ``delta * |g|``."""

    delta: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta < 0:
            raise ValueError(f"CSI uncertainty must be >= 0, got {self.delta!r}")


def build_correlation(grid: PortGrid) -> np.ndarray:
    """Jakes correlation matrix of the ports (read-only N x N array)."""
    n = np.arange(grid.N)
    lag = n[:, None] - n[None, :]
    sigma = bessel_j0(2.0 * np.pi * grid.spacing * lag.astype(float))
    sigma = np.atleast_2d(sigma)
    # J0(0) is 1, but be exact about it
    np.fill_diagonal(sigma, 1.0)
    sigma.setflags(write=False)
    return sigma


def factor(sigma, sigma1=1.0, sigma2=1.0) -> ChannelFactor:
    """Factor the correlation as ``U diag(theta)^(1/2)`` with theta clamped at 0."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError("correlation matrix must be square")
    if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12):
        raise ValueError("correlation matrix must be symmetric")
    if sigma1 < 0 or sigma2 < 0:
        raise ValueError("channel scales must be non-negative")
    try:
        theta, U = np.linalg.eigh(sigma)
    except np.linalg.LinAlgError as exc:
        raise ChannelError(
            f"eigendecomposition failed (condition number {np.linalg.cond(sigma):.3e})"
        ) from exc

    n = sigma.shape[0]
    residual = np.linalg.norm(U @ np.diag(theta) @ U.T - sigma)
    if residual > 1e-8 * max(n, 1):
        raise ChannelError(
            f"eigendecomposition residual {residual:.3e} exceeds tolerance "
            f"(condition number {np.linalg.cond(sigma):.3e})"
        )

    negative = theta < 0
    mass = float(-theta[negative].sum())
    if negative.any():
        log.debug("clamped %d negative eigenvalues (mass %.3e)", negative.sum(), mass)
    theta = np.where(negative, 0.0, theta)
    A = U * np.sqrt(theta)
    A.setflags(write=False)
    theta.setflags(write=False)
    return ChannelFactor(A, float(sigma1), float(sigma2), theta, int(negative.sum()), mass)


def complex_normal(rng, size=None):
    """Circularly-symmetric complex Gaussian with unit total variance."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def sample_realization(fac: ChannelFactor, rng) -> ChannelRealization:
    """Draw ``h1, h2`` through the factor and i.i.d. ``g1, g2``.

    Draw order is fixed (x1, x2, g1, g2) so a given generator state always
    maps to the same realization.
    """
    n = fac.N
    x1 = complex_normal(rng, n)
    x2 = complex_normal(rng, n)
    g = complex_normal(rng, 2)
    h1 = fac.sigma1 * (fac.A @ x1)
    h2 = fac.sigma2 * (fac.A @ x2)
    return ChannelRealization(h1, h2, complex(g[0]), complex(g[1]))


def disk_error(rng, size=None):
    """Unit-disk uniform draws ``sqrt(u) * exp(j*phi)``; scale by the radius."""
    u = rng.random(size)
    phi = rng.random(size) * (2.0 * np.pi)
    return np.sqrt(u) * np.exp(1j * phi)


def apply_csi_error(g, model: CsiModel, rng, unit=None):
    """Return Alice's estimate ``g_hat = g - err`` with ``|err| <= delta*|g|``.

    ``unit`` optionally supplies a pre-drawn unit-disk sample (see
    :func:`disk_error`) so callers can keep random streams aligned across
    different ``delta``.
    """
    if unit is None:
        unit = disk_error(rng)
    if model.delta == 0:
        return g
    err = model.delta * np.abs(g) * unit
    return g - err
