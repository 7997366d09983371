"""Monte-Carlo experiments over correlated FAS channel realizations.

Realization ``i`` of an experiment with seed ``s`` always draws from its own
generator, ``SeedSequence(s, spawn_key=(i,))``, so

* every scheme evaluated at the same ``(N, W, seed)`` sees the same channels
  (paired comparison), whatever ``rho`` or ``delta`` are;
* results do not depend on how realizations are split across workers.

Realizations are processed in fixed-size chunks, and per-realization rates
are reduced in index order with :func:`math.fsum`.

Alice optimises on the estimated Eve gains; the reported rate is the one
actually achieved at the chosen port and powers with the true gains.
"""

import enum
import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .channel import PortGrid, build_correlation, disk_error, factor, sample_realization
from .optimizer import gn_ports, solve_ports
from .rates import ej_raw, gn_raw

CHUNK = 128
THREADS_ENV = "FAS_SECRECY_THREADS"


class Scheme(str, enum.Enum):
    EJ_OPT = "EJ_OPT"
    GN_OPT = "GN_OPT"
    EJ_EQUAL_POWER = "EJ_EQUAL_POWER"


class MonteCarloError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: Scheme = Scheme.EJ_OPT
    N: int = 10
    W: float = 5.0
    rho_db: float = 10.0
    realizations: int = 10_000
    seed: int = 0
    delta: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    gn_grid_steps: int = 256

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= self.delta < 1:
            raise ValueError("CSI uncertainty must lie in [0, 1)")
        if self.gn_grid_steps < 100:
            raise ValueError("GN grid needs at least 100 steps")
        PortGrid(self.N, self.W)

    @property
    def P(self) -> float:
        return 10.0 ** (self.rho_db / 10.0)


@dataclass(frozen=True)
class SummaryRow:
    scheme: Scheme
    N: int
    W: float
    rho_db: float
    delta: float
    realizations: int
    seed: int
    mean_rate: float
    std_err: float
    channel_digest: str = ""


class ExperimentSummary(list):
    """Rows of a sweep, in sweep order."""

    def by(self, **match):
        return [r for r in self if all(getattr(r, k) == v for k, v in match.items())]


@dataclass
class PointDetail:
    """Per-realization record of one sweep point (index order)."""

    port: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    planned: np.ndarray
    achieved: np.ndarray
    digest: str


@lru_cache(maxsize=64)
def _factor(N, W, sigma1, sigma2):
    return factor(build_correlation(PortGrid(N, W)), sigma1, sigma2)


def realization_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def draw_channels(cfg: ExperimentConfig, start: int, stop: int):
    """Channels and unit-disk CSI errors for realizations ``start..stop-1``.

    Returns ``h1, h2`` of shape ``(R, N)`` and ``g1, g2, u1, u2`` of shape
    ``(R,)``.
    """
    fac = _factor(cfg.N, cfg.W, cfg.sigma1, cfg.sigma2)
    R, N = stop - start, cfg.N
    h1 = np.empty((R, N), complex)
    h2 = np.empty((R, N), complex)
    g = np.empty((R, 2), complex)
    u = np.empty((R, 2), complex)
    for r, i in enumerate(range(start, stop)):
        rng = realization_rng(cfg.seed, i)
        real = sample_realization(fac, rng)
        h1[r], h2[r], g[r] = real.h1, real.h2, (real.g1, real.g2)
        u[r] = disk_error(rng, 2)
    return h1, h2, g[:, 0], g[:, 1], u[:, 0], u[:, 1]


def _chunk(cfg: ExperimentConfig, start: int, stop: int):
    h1, h2, g1, g2, u1, u2 = draw_channels(cfg, start, stop)
    digest = hashlib.sha256()
    for arr in (h1, h2, g1, g2):
        digest.update(np.ascontiguousarray(arr).tobytes())

    if cfg.delta > 0:
        g1_hat = g1 - cfg.delta * np.abs(g1) * u1
        g2_hat = g2 - cfg.delta * np.abs(g2) * u2
    else:
        g1_hat, g2_hat = g1, g2

    gh1, gh2 = np.abs(h1) ** 2, np.abs(h2) ** 2
    est = (np.abs(g1_hat)[:, None] ** 2, np.abs(g2_hat)[:, None] ** 2)
    true = (np.abs(g1)[:, None] ** 2, np.abs(g2)[:, None] ** 2)
    P = cfg.P
    rows = np.arange(stop - start)

    if cfg.scheme is Scheme.EJ_OPT:
        sol = solve_ports(P, gh1, gh2, *est)
        p1, p2, planned = sol.p1, sol.p2, sol.value
    elif cfg.scheme is Scheme.GN_OPT:
        p1, p2, planned = gn_ports(P, gh1, gh2, *est, steps=cfg.gn_grid_steps)
    else:
        p1 = np.full(gh1.shape, 0.5 * P)
        p2 = p1
        planned = ej_raw(gh1, gh2, *est, p1, p2)

    port = np.argmax(planned, axis=1)
    p1, p2, planned = p1[rows, port], p2[rows, port], planned[rows, port]
    at_port = (gh1[rows, port], gh2[rows, port], true[0][:, 0], true[1][:, 0])
    if cfg.scheme is Scheme.GN_OPT:
        achieved = np.maximum(gn_raw(*at_port, p1, p2), 0.0)
    else:
        achieved = ej_raw(*at_port, p1, p2)
    return port, p1, p2, planned, achieved, digest.digest()


def _chunk_checked(cfg, start, stop):
    try:
        return _chunk(cfg, start, stop)
    except Exception as exc:
        for i in range(start, stop):
            try:
                _chunk(cfg, i, i + 1)
            except Exception as inner:
                raise MonteCarloError(f"realization {i} ({cfg}): {inner}") from inner
        raise MonteCarloError(f"realizations {start}..{stop - 1} ({cfg}): {exc}") from exc


def worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def simulate(cfg: ExperimentConfig, workers=None) -> PointDetail:
    """Run every realization of one sweep point and keep per-realization data."""
    workers = worker_count() if workers is None else max(1, int(workers))
    bounds = [(s, min(s + CHUNK, cfg.realizations)) for s in range(0, cfg.realizations, CHUNK)]
    if workers == 1 or len(bounds) == 1:
        parts = [_chunk_checked(cfg, s, e) for s, e in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_checked, [cfg] * len(bounds), *zip(*bounds)))
    digest = hashlib.sha256()
    for part in parts:
        digest.update(part[5])
    cols = [np.concatenate([p[k] for p in parts]) for k in range(5)]
    return PointDetail(*cols, digest=digest.hexdigest())


def mean_and_stderr(values):
    """Fixed-order compensated mean and standard error of the mean."""
    vals = [float(v) for v in values]
    n = len(vals)
    mean = math.fsum(vals) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in vals) / (n - 1)
    return mean, math.sqrt(var / n)


def run_point(cfg: ExperimentConfig, workers=None) -> SummaryRow:
    detail = simulate(cfg, workers)
    mean, se = mean_and_stderr(detail.achieved)
    return SummaryRow(
        cfg.scheme, cfg.N, cfg.W, cfg.rho_db, cfg.delta,
        cfg.realizations, cfg.seed, mean, se, detail.digest,
    )


SWEEP_AXES = ("rho_db", "W", "N", "delta", "scheme")


def run_sweep(cfg: ExperimentConfig, axis: str, values, workers=None) -> ExperimentSummary:
    """One :func:`run_point` per value of ``axis``; the seed stays fixed."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    out = ExperimentSummary()
    for v in values:
        out.append(run_point(replace(cfg, **{axis: v}), workers))
    return out
