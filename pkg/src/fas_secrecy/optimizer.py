"""Port selection and power control for the FAS wiretap channel.

The exact solver works port by port. At a fixed port the coding-enhanced
jamming rate ``max(min(R^, R~), R-)`` is maximised by splitting the feasible
``p1`` range according to the sign of ``R^ - R~``:

* ``R^`` is maximised on the line ``p1 + p2 = P``; its stationary points are
  the roots of the quadratic ``a p1^2 + b p1 + c`` (:func:`quad_coeffs`), so
  the maximiser is an interval endpoint or one of those roots.
* ``R~`` is a log of a ratio of affine functions of ``(p1, p2)``, hence
  quasilinear, so its maximum over the trapezoidal feasible set is at one of
  the four vertices.

Everything is vectorised: :func:`solve_ports` takes gain arrays of any shape
and solves every entry independently. The scalar entry points wrap it.

Grid searches (:func:`oracle_ej`, :func:`solve_gn`) share none of this
machinery and serve as independent checks and baselines.
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .rates import GainQuad, bar_raw, ej_raw, gn_raw, hat_raw, tilde_raw

# maximum tolerated shortfall of the exact solution below the no-jamming rate
_NO_JAM_TOL = 1e-12


class OptimizerError(ArithmeticError):
    pass


class Case(enum.IntEnum):
    CASE1_RHAT = 1
    CASE2_RTILDE = 2
    CASE3_SPLIT = 3


HAT_BRANCHES = ("rhat:lb", "rhat:ub", "rhat:root", "rhat:root")
TILDE_BRANCHES = ("rtilde:(lb,0)", "rtilde:(lb,P-lb)", "rtilde:(ub,0)", "rtilde:(ub,P-ub)")


@dataclass(frozen=True)
class Interval:
    lb: float
    ub: float

    def __post_init__(self):
        if not (0.0 <= self.lb <= self.ub):
            raise ValueError(f"invalid interval [{self.lb}, {self.ub}]")

    def check(self, P):
        if self.ub > P:
            raise ValueError(f"interval [{self.lb}, {self.ub}] exceeds budget {P}")


class QuadCoeffs(NamedTuple):
    a: float
    b: float
    c: float

    @property
    def discriminant(self):
        return self.b * self.b - 4.0 * self.a * self.c


@dataclass(frozen=True)
class SolveResult:
    port: Optional[int]
    p1: float
    p2: float
    value: float
    case_tag: Optional[Case] = None
    branch_detail: str = ""
    beta: Optional[float] = None


class PortSolutions(NamedTuple):
    """Array-valued output of :func:`solve_ports` (one entry per input)."""

    p1: np.ndarray
    p2: np.ndarray
    value: np.ndarray
    case: np.ndarray
    branch: np.ndarray
    beta: np.ndarray

    def branch_name(self, idx=()):
        code = int(self.branch[idx])
        return HAT_BRANCHES[code] if code < 4 else TILDE_BRANCHES[code - 4]


def quad_coeffs(P, q: GainQuad) -> QuadCoeffs:
    """Coefficients of the numerator of dR^/dp1 along ``p2 = P - p1``."""
    gh1, _, gg1, gg2 = q.astuple()
    s = P * gg2 + 1.0
    a = -gh1 * gg2 * (gg1 - gg2)
    b = -2.0 * gh1 * gg2 * s
    c = gh1 * s * s - gg1 * s
    return QuadCoeffs(a, b, c)


def _quad_roots(a, b, c):
    """Real roots of ``a x^2 + b x + c`` (NaN where absent), stable form."""
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c)))
    r1 = np.full(a.shape, np.nan)
    r2 = np.full(a.shape, np.nan)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        disc = b * b - 4.0 * a * c
        quad = (a != 0) & (disc >= 0)
        sq = np.sqrt(np.where(quad, disc, 0.0))
        # q has the sign of -b so no cancellation in -b -/+ sqrt
        qq = -0.5 * (b + np.where(b >= 0, sq, -sq))
        r1 = np.where(quad & (qq != 0), qq / a, r1)
        r2 = np.where(quad & (qq != 0), c / qq, r2)
        # b = 0 and disc >= 0: roots are +-sqrt(-c/a), qq = 0 only if c = 0 too
        both_zero = quad & (qq == 0)
        r1 = np.where(both_zero, 0.0, r1)
        lin = (a == 0) & (b != 0)
        r1 = np.where(lin, -c / b, r1)
    return r1, r2


def _pick(values, p1, p2):
    """Index of the max along the last axis; ties to smaller p1, then p2."""
    best = np.max(values, axis=-1, keepdims=True)
    tied = values == best
    p1m = np.where(tied, p1, np.inf)
    tied &= p1m == np.min(p1m, axis=-1, keepdims=True)
    p2m = np.where(tied, p2, np.inf)
    tied &= p2m == np.min(p2m, axis=-1, keepdims=True)
    return np.argmax(tied, axis=-1)


def _take(arr, idx):
    return np.take_along_axis(arr, idx[..., None], axis=-1)[..., 0]


def _rhat_max(P, gh1, gh2, gg1, gg2, lb, ub):
    """Maximise unclamped R^ over ``p1 in [lb, ub]``, ``p2 = P - p1``."""
    s = P * gg2 + 1.0
    a = -gh1 * gg2 * (gg1 - gg2)
    b = -2.0 * gh1 * gg2 * s
    c = gh1 * s * s - gg1 * s
    r1, r2 = _quad_roots(a, b, c)
    lb, ub, r1, r2 = np.broadcast_arrays(lb, ub, r1, r2)
    cand = np.stack([lb, ub, r1, r2], axis=-1)
    ok = np.isfinite(cand) & (cand >= lb[..., None]) & (cand <= ub[..., None])
    cand = np.where(ok, cand, lb[..., None])
    p2 = P[..., None] - cand if np.ndim(P) else P - cand
    vals = hat_raw(gh1[..., None], gh2[..., None], gg1[..., None], gg2[..., None], cand, p2)
    vals = np.where(ok, vals, -np.inf)
    idx = _pick(vals, cand, p2)
    return _take(cand, idx), _take(p2, idx), _take(vals, idx), idx


def _rtilde_max(P, gh1, gh2, gg1, gg2, lb, ub):
    """Maximise unclamped R~ over the trapezoid's four vertices."""
    lb, ub = np.broadcast_arrays(lb, ub)
    zero = np.zeros_like(lb)
    Pb = np.broadcast_to(P, lb.shape)
    p1 = np.stack([lb, lb, ub, ub], axis=-1)
    p2 = np.stack([zero, Pb - lb, zero, Pb - ub], axis=-1)
    vals = tilde_raw(gh1[..., None], gh2[..., None], gg1[..., None], gg2[..., None], p1, p2)
    idx = _pick(vals, p1, p2)
    return _take(p1, idx), _take(p2, idx), _take(vals, idx), idx


def solve_rhat(P, q: GainQuad, iv: Interval):
    """Global maximiser of R^ over ``p1 in iv`` with the budget tight.

    Returns ``(p1, p2, value)`` with ``value`` the clamped rate.
    """
    iv.check(P)
    arr = [np.asarray(v, dtype=float) for v in q.astuple()]
    p1, p2, val, _ = _rhat_max(float(P), *arr, np.asarray(iv.lb, float), np.asarray(iv.ub, float))
    return float(p1), float(p2), max(float(val), 0.0)


def solve_rtilde(P, q: GainQuad, iv: Interval):
    """Maximiser of R~ over ``p1 in iv``, ``p2 >= 0``, ``p1 + p2 <= P``."""
    iv.check(P)
    arr = [np.asarray(v, dtype=float) for v in q.astuple()]
    p1, p2, val, _ = _rtilde_max(float(P), *arr, np.asarray(iv.lb, float), np.asarray(iv.ub, float))
    return float(p1), float(p2), max(float(val), 0.0)


def case_split(P, gh1, gh2, gg2):
    """Regime codes (1, 2, 3) and the crossover power ``beta`` (NaN outside case 3).

    Case 1: R^ <= R~ on all of [0, P]. Case 2: R^ >= R~ on all of [0, P].
    Case 3: R^ <= R~ on [0, beta] and R^ >= R~ on [beta, P].
    """
    gh1, gh2, gg2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (gh1, gh2, gg2)))
    case1 = gg2 <= gh2 / (1.0 + P * gh1)
    case2 = ~case1 & (gg2 >= gh2)
    case3 = ~(case1 | case2)
    case = np.where(case1, 1, np.where(case2, 2, 3))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        beta = np.where(case3, (gh2 / gg2 - 1.0) / gh1, np.nan)
    # rounding can push beta a hair outside [0, P]
    beta = np.where(case3, np.clip(beta, 0.0, P), np.nan)
    return case, beta


def solve_ports(P, gh1, gh2, gg1, gg2) -> PortSolutions:
    """Exact max over ``(p1, p2)`` of the EJ rate, independently per entry."""
    gh1, gh2, gg1, gg2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (gh1, gh2, gg1, gg2))
    )
    P = float(P)
    case, beta = case_split(P, gh1, gh2, gg2)
    zero = np.zeros(gh1.shape)
    full = np.full(gh1.shape, P)
    split = np.where(np.isnan(beta), 0.0, beta)

    hat_ub = np.where(case == 1, full, split)
    tilde_lb = np.where(case == 2, zero, split)
    h1, h2, hv, hidx = _rhat_max(P, gh1, gh2, gg1, gg2, zero, hat_ub)
    t1, t2, tv, tidx = _rtilde_max(P, gh1, gh2, gg1, gg2, tilde_lb, full)

    use_hat = (case == 1) | ((case == 3) & (hv >= tv))
    p1 = np.where(use_hat, h1, t1)
    p2 = np.where(use_hat, h2, t2)
    branch = np.where(use_hat, hidx, 4 + tidx)
    value = ej_raw(gh1, gh2, gg1, gg2, p1, p2)

    no_jam = np.maximum(bar_raw(gh1, gh2, gg1, gg2, P), 0.0)
    short = no_jam - value
    if np.any(short > _NO_JAM_TOL):
        worst = np.unravel_index(np.argmax(short), short.shape)
        raise OptimizerError(
            f"exact solution below the no-jamming rate by {short[worst]:.3e} at "
            f"gains {(gh1[worst], gh2[worst], gg1[worst], gg2[worst])}, P={P}"
        )
    return PortSolutions(p1, p2, value, case, branch, beta)


def _result(sol: PortSolutions, idx, port):
    beta = float(sol.beta[idx])
    return SolveResult(
        port=port,
        p1=float(sol.p1[idx]),
        p2=float(sol.p2[idx]),
        value=float(sol.value[idx]),
        case_tag=Case(int(sol.case[idx])),
        branch_detail=sol.branch_name(idx),
        beta=None if np.isnan(beta) else beta,
    )


def solve_port(P, q: GainQuad) -> SolveResult:
    """Exact optimum at a single port (``port`` left as ``None``)."""
    if not P > 0:
        raise ValueError(f"power budget must be positive, got {P!r}")
    sol = solve_ports(P, *q.astuple())
    return _result(sol, (), None)


def _port_gains(real):
    q = GainQuad.all_ports(real)
    return q.astuple()


def solve_all_ports(P, real) -> SolveResult:
    """Best port and powers for one realization; ties go to the lowest port."""
    if not P > 0:
        raise ValueError(f"power budget must be positive, got {P!r}")
    sol = solve_ports(P, *_port_gains(real))
    n = int(np.argmax(sol.value))
    return _result(sol, n, n)


def equal_power(P, real) -> SolveResult:
    """``p1 = p2 = P/2`` everywhere; the port maximising the EJ rate wins."""
    if not P > 0:
        raise ValueError(f"power budget must be positive, got {P!r}")
    half = 0.5 * P
    vals = ej_raw(*_port_gains(real), half, half)
    n = int(np.argmax(vals))
    return SolveResult(n, half, half, float(vals[n]), None, "equal-power")


# ---------------------------------------------------------------- grid searches


def _edge_refine(f, P, centre, width, steps, hypotenuse):
    lo = np.clip(centre - width, 0.0, P)
    hi = np.clip(centre + width, 0.0, P)
    t = np.linspace(0.0, 1.0, steps)
    p1 = lo[..., None] + (hi - lo)[..., None] * t
    p2 = P - p1 if hypotenuse else np.zeros_like(p1)
    p2 = np.maximum(p2, 0.0)
    v = f(p1, p2)
    k = np.argmax(v, axis=-1)
    return _take(p1, k), _take(p2, k), _take(v, k)


def _edge_search(f, P, steps, hypotenuse):
    p1 = np.linspace(0.0, P, steps)
    p2 = np.maximum(P - p1, 0.0) if hypotenuse else np.zeros_like(p1)
    v = f(p1, p2)
    k = np.argmax(v, axis=-1)
    return _edge_refine(f, P, p1[k], P / (steps - 1), steps, hypotenuse)


def _simplex_grid(f, P, m):
    """Coarse ``m x m`` grid over the simplex, then one ``m x m`` window refine."""
    u = np.linspace(0.0, 1.0, m)
    p1 = (P * u)[:, None] * np.ones(m)
    p2 = (P - p1) * u[None, :]
    v = f(p1.ravel(), p2.ravel())
    k = np.argmax(v, axis=-1)
    i, j = np.divmod(k, m)
    h = 1.0 / (m - 1)
    u1 = np.clip(u[i][..., None] + h * (2.0 * u - 1.0), 0.0, 1.0)
    u2 = np.clip(u[j][..., None] + h * (2.0 * u - 1.0), 0.0, 1.0)
    rp1 = P * u1[..., :, None] * np.ones(m)
    rp2 = (P - rp1) * u2[..., None, :]
    shape = rp1.shape[:-2] + (m * m,)
    rp1 = rp1.reshape(shape)
    rp2 = np.maximum(rp2.reshape(shape), 0.0)
    rv = f(rp1, rp2)
    k = np.argmax(rv, axis=-1)
    return _take(rp1, k), _take(rp2, k), _take(rv, k)


def _best_of(cands):
    p1 = np.stack([c[0] for c in cands], axis=-1)
    p2 = np.stack([c[1] for c in cands], axis=-1)
    v = np.stack([c[2] for c in cands], axis=-1)
    k = _pick(v, p1, p2)
    return _take(p1, k), _take(p2, k), _take(v, k)


def oracle_ej(P, real, steps=2000, grid2d=48) -> SolveResult:
    """Brute-force EJ optimum by grid search; every point tried is feasible.

    Per port: a ``steps``-point scan along each of the edges ``p2 = 0`` and
    ``p2 = P - p1``, each refined once with ``steps`` points inside one coarse
    cell of the winner; plus a ``grid2d`` x ``grid2d`` scan of the whole
    simplex, refined once around its winner. The best point found wins.
    """
    if steps < 100:
        raise ValueError("oracle needs at least 100 steps")
    gh1, gh2, gg1, gg2 = (np.asarray(v)[:, None] for v in _port_gains(real))

    def f(p1, p2):
        return ej_raw(gh1, gh2, gg1, gg2, p1, p2)

    P = float(P)
    cands = [
        _edge_search(f, P, steps, hypotenuse=False),
        _edge_search(f, P, steps, hypotenuse=True),
        _simplex_grid(f, P, grid2d),
    ]
    p1, p2, v = _best_of(cands)
    n = int(np.argmax(v))
    return SolveResult(n, float(p1[n]), float(p2[n]), float(v[n]), None, "oracle")


def gn_ports(P, gh1, gh2, gg1, gg2, steps=256):
    """Grid-searched GN optimum for every entry of the gain arrays.

    For a fixed ``p2`` the GN rate is monotone in ``p1`` (a log of a ratio of
    affine functions of ``p1``), so it peaks at ``p1 = P - p2`` or is zero at
    ``p1 = 0``. The search therefore scans the budget line with ``steps``
    points and refines once with ``steps`` points in the winning cell.
    Returns ``(p1, p2, value)`` arrays; entries with value 0 report
    ``p1 = p2 = 0``.
    """
    if steps < 100:
        raise ValueError("GN search needs at least 100 steps")
    gh1, gh2, gg1, gg2 = (np.asarray(v, dtype=float)[..., None] for v in (gh1, gh2, gg1, gg2))
    P = float(P)

    def f(p1, p2):
        return np.maximum(gn_raw(gh1, gh2, gg1, gg2, p1, p2), 0.0)

    p1, p2, v = _edge_search(f, P, steps, hypotenuse=True)
    dead = v == 0.0
    return np.where(dead, 0.0, p1), np.where(dead, 0.0, p2), v


def solve_gn(P, real, steps=256) -> SolveResult:
    """Gaussian-noise jamming baseline: grid-searched power, best port."""
    p1, p2, v = gn_ports(P, *_port_gains(real), steps=steps)
    n = int(np.argmax(v))
    return SolveResult(n, float(p1[n]), float(p2[n]), float(v[n]), None, "gn:grid")
