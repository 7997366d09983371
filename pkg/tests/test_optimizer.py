import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fas_secrecy.optimizer import (
    Case, Interval, OptimizerError, case_split, equal_power, gn_ports, oracle_ej,
    quad_coeffs, solve_all_ports, solve_gn, solve_port, solve_ports, solve_rhat, solve_rtilde,
)
from fas_secrecy.rates import GainQuad, PowerAllocation, ej_raw, gn_raw, hat_raw, rate_ej, tilde_raw

from conftest import literal_rhat, random_realization, single_port

Q = GainQuad(2.0, 1.0, 1.0, 0.5)

gain = st.floats(0.0, 10.0)
budget = st.sampled_from([0.1, 1.0, 10.0, 100.0]) | st.floats(0.01, 200.0)


def grid_rhat(P, q, lb, ub, step):
    p1 = np.arange(lb, ub + step / 2, step)
    p1 = np.clip(p1, lb, ub)
    return np.max(np.maximum(hat_raw(*q.astuple(), p1, P - p1), 0))


def grid_rtilde(P, q, lb, ub, step):
    """2-D grid over {lb <= p1 <= ub, p2 <= P - p1}, then a finer pass around the best."""
    def scan(p1_lo, p1_hi, p2_lo, p2_hi, h):
        p1 = np.arange(p1_lo, p1_hi + h / 2, h)[:, None]
        p2 = np.arange(p2_lo, p2_hi + h / 2, h)[None, :]
        p1 = np.clip(p1, lb, ub)
        p2 = np.clip(np.minimum(p2, P - p1), 0, None)
        v = tilde_raw(*q.astuple(), p1, p2)
        i, j = np.unravel_index(np.argmax(v), v.shape)
        return float(p1[i, 0]), float(p2[i, j]), float(v[i, j])

    a, b, v = scan(lb, ub, 0, P, step)
    _, _, v2 = scan(max(lb, a - step), min(ub, a + step), max(0, b - step), b + step, step / 50)
    return max(v, v2, 0.0)


# -- quad_coeffs --------------------------------------------------------------


def test_quad_coeffs_example():
    assert quad_coeffs(2.0, Q) == (-0.5, -4.0, 6.0)


def test_quad_coeffs_no_jamming_path():
    a, b, c = quad_coeffs(3.0, GainQuad(2.5, 1.0, 0.7, 0.0))
    assert a == 0 and b == 0
    assert c == pytest.approx(2.5 - 0.7)


def test_quad_coeffs_equal_eve_gains():
    assert quad_coeffs(3.0, GainQuad(2.5, 1.0, 0.7, 0.7)).a == 0


@given(gain, gain, gain, gain, budget)
def test_b_non_positive_and_discriminant(gh1, gh2, gg1, gg2, P):
    co = quad_coeffs(P, GainQuad(gh1, gh2, gg1, gg2))
    assert co.b <= 0
    # exact arithmetic; b^2 - 4ac carries a factor gg1, so strictness needs gg1 > 0
    gh1, gg1, gg2, P = map(Fraction, (gh1, gg1, gg2, P))
    s = P * gg2 + 1
    a = -gh1 * gg2 * (gg1 - gg2)
    b = -2 * gh1 * gg2 * s
    c = gh1 * s * s - gg1 * s
    disc = b * b - 4 * a * c
    if a > 0:
        assert disc == b * b * gg1 / gg2 - 2 * a * b * gg1 / (gh1 * gg2)
        assert disc >= 0
        if gg1 > 0:
            assert disc > 0


# -- solve_rhat ---------------------------------------------------------------


def test_rhat_deaf_eve_takes_upper_bound():
    for ub in (0.5, 1.3, 2.0):
        p1, p2, _ = solve_rhat(2.0, GainQuad(2.0, 1.0, 0.0, 0.5), Interval(0.0, ub))
        assert p1 == ub and p2 == 2.0 - ub


def test_rhat_degenerate_interval():
    p1, p2, v = solve_rhat(2.0, Q, Interval(0.7, 0.7))
    assert (p1, p2) == (0.7, 1.3)
    assert v == pytest.approx(max(hat_raw(2, 1, 1, 0.5, 0.7, 1.3), 0))


def test_rhat_matches_grid():
    p1, p2, v = solve_rhat(2.0, Q, Interval(0.0, 2.0))
    assert p1 + p2 == 2.0
    assert v == pytest.approx(grid_rhat(2.0, Q, 0.0, 2.0, 1e-5), abs=1e-6)
    # interior stationary point here: the smaller root is feasible
    a, b, c = quad_coeffs(2.0, Q)
    root = (-b - math.sqrt(b * b - 4 * a * c)) / (2 * a)
    assert 0 < root < 2 or p1 in (0.0, 2.0)


def test_rhat_interval_validation():
    with pytest.raises(ValueError):
        Interval(1.0, 0.5)
    with pytest.raises(ValueError):
        Interval(-0.1, 0.5)
    with pytest.raises(ValueError):
        solve_rhat(1.0, Q, Interval(0.0, 2.0))


@settings(max_examples=300, deadline=None)
@given(gain, gain, gain, gain, budget, st.floats(0, 1), st.floats(0, 1))
def test_rhat_matches_case_rule(gh1, gh2, gg1, gg2, P, u, v):
    lb, ub = sorted((u * P, v * P))
    q = GainQuad(gh1, gh2, gg1, gg2)
    _, _, val = solve_rhat(P, q, Interval(lb, ub))
    _, lit = literal_rhat(P, gh1, gg1, gg2, lb, ub)
    assert val == pytest.approx(max(lit, 0.0), abs=1e-12)


# -- solve_rtilde -------------------------------------------------------------


def test_rtilde_example_matches_grid():
    p1, p2, v = solve_rtilde(2.0, Q, Interval(0.5, 2.0))
    assert v == pytest.approx(grid_rtilde(2.0, Q, 0.5, 2.0, 1e-3), abs=1e-4)
    assert (p1, p2) in {(0.5, 0.0), (0.5, 1.5), (2.0, 0.0)}


def test_rtilde_degraded_bob():
    _, _, v = solve_rtilde(3.0, GainQuad(0.5, 0.4, 1.0, 0.9), Interval(0.0, 3.0))
    assert v == 0.0


def test_rtilde_equal_jammer_gains():
    # jamming terms cancel: only p1 matters, so the 1-D rule applies
    q = GainQuad(2.0, 0.8, 1.0, 0.8)
    p1, p2, v = solve_rtilde(2.0, q, Interval(0.3, 1.7))
    assert p1 == 1.7
    assert v == pytest.approx(math.log2((1 + 1.7 * 2 + p2 * 0.8) / (1 + 1.7 + p2 * 0.8)))


# -- solve_port ---------------------------------------------------------------


def test_case1_when_eve_misses_jammer():
    assert solve_port(2.0, GainQuad(1.0, 1.0, 0.5, 0.0)).case_tag is Case.CASE1_RHAT


def test_beta_formula():
    res = solve_port(10.0, GainQuad(1.0, 2.0, 0.5, 1.0))
    assert res.case_tag is Case.CASE3_SPLIT
    assert res.beta == 1.0


def test_example_is_split_case():
    res = solve_port(2.0, Q)
    assert res.case_tag is Case.CASE3_SPLIT
    assert res.beta == 0.5
    assert res.value == rate_ej(Q, PowerAllocation(res.p1, res.p2, 2.0))
    assert res.value == pytest.approx(grid_rtilde(2.0, Q, 0.0, 2.0, 1e-3), abs=1e-4)


def test_gh1_zero_never_reaches_beta():
    for gh2, gg2 in [(1.0, 0.5), (1.0, 2.0), (0.0, 0.0)]:
        res = solve_port(5.0, GainQuad(0.0, gh2, 0.3, gg2))
        assert res.case_tag in (Case.CASE1_RHAT, Case.CASE2_RTILDE)
        assert res.value == 0.0


def test_case_boundaries_exact():
    # the crossover formula hits the interval ends exactly on the case borders
    gh1, gh2, P = Fraction(3), Fraction(2), Fraction(5)
    beta = lambda gg2: (gh2 / gg2 - 1) / gh1
    assert beta(gh2) == 0
    assert beta(gh2 / (1 + P * gh1)) == P


def test_case_predicates_order():
    case, beta = case_split(2.0, np.array([1.0, 1.0]), np.array([3.0, 1.0]), np.array([1.0, 1.0]))
    # gg2 == gh2/(1+P gh1) -> case 1 first; gg2 == gh2 -> case 2
    assert case.tolist() == [1, 2]
    assert np.all(np.isnan(beta))


@settings(max_examples=300, deadline=None)
@given(gain, gain, gain, gain, budget)
def test_port_dominates_no_jamming_and_is_consistent(gh1, gh2, gg1, gg2, P):
    q = GainQuad(gh1, gh2, gg1, gg2)
    res = solve_port(P, q)
    assert res.p1 >= 0 and res.p2 >= 0 and res.p1 + res.p2 <= P + 1e-12
    assert res.value == pytest.approx(rate_ej(q, PowerAllocation(res.p1, res.p2, P)), abs=1e-12)
    no_jam = max(math.log2(1 + P * gh1) - math.log2(1 + P * gg1), 0.0)
    assert res.value >= no_jam - 1e-12


def test_no_jamming_guard_raises(monkeypatch):
    import fas_secrecy.optimizer as opt

    monkeypatch.setattr(opt, "ej_raw", lambda *a: np.zeros(np.shape(a[0])))
    with pytest.raises(OptimizerError):
        opt.solve_ports(2.0, 3.0, 1.0, 0.1, 0.1)


def test_vectorised_matches_scalar(rng):
    g = rng.exponential(size=(4, 50))
    sol = solve_ports(3.0, *g)
    for k in range(0, 50, 7):
        res = solve_port(3.0, GainQuad(*g[:, k]))
        assert (res.p1, res.p2) == (sol.p1[k], sol.p2[k])
        assert res.value == pytest.approx(sol.value[k], abs=1e-12)


def test_regime_sign_structure(rng):
    for _ in range(200):
        gh1, gh2, gg1, gg2 = rng.exponential(size=4)
        P = float(rng.choice([0.1, 1.0, 10.0, 100.0]))
        case, beta = case_split(P, gh1, gh2, gg2)
        p1 = rng.uniform(0, P, 300)
        p2 = rng.uniform(0, 1, 300) * (P - p1)
        d = hat_raw(gh1, gh2, gg1, gg2, p1, p2) - tilde_raw(gh1, gh2, gg1, gg2, p1, p2)
        if case == 1:
            assert np.all(d <= 1e-12)
        elif case == 2:
            assert np.all(d >= -1e-12)
        else:
            assert np.all(d[p1 <= beta] <= 1e-12)
            assert np.all(d[p1 >= beta] >= -1e-12)


# -- port loop, oracle, baselines ---------------------------------------------


def test_single_port_loop():
    real = single_port(2.0, 1.0, 1.0, 0.5)
    a = solve_all_ports(2.0, real)
    b = solve_port(2.0, GainQuad.at_port(real, 0))
    assert a.port == 0
    assert (a.p1, a.p2, a.value, a.case_tag) == (b.p1, b.p2, b.value, b.case_tag)


def test_loop_picks_best_port(rng):
    real = random_realization(rng, 8)
    best = solve_all_ports(5.0, real)
    per_port = [solve_port(5.0, GainQuad.at_port(real, n)).value for n in range(8)]
    assert best.value == max(per_port)
    assert best.port == per_port.index(max(per_port))


def test_loop_tie_goes_to_first_port():
    h = np.array([1.0, 1.0, 1.0]) + 0j
    from fas_secrecy.channel import ChannelRealization
    real = ChannelRealization(h, h * 0.5, 0.3 + 0j, 0.2 + 0j)
    assert solve_all_ports(2.0, real).port == 0


@pytest.mark.parametrize("seed", range(5))
def test_loop_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    real = random_realization(rng, 5)
    for P in (0.1, 1.0, 10.0, 100.0):
        exact = solve_all_ports(P, real).value
        orc = oracle_ej(P, real).value
        assert orc - 1e-9 <= exact <= orc + 1e-4


def test_oracle_vanishing_budget(rng):
    assert oracle_ej(1e-9, random_realization(rng, 3)).value == pytest.approx(0.0, abs=1e-8)


def test_oracle_symmetric_channels():
    from fas_secrecy.channel import ChannelRealization
    # |h1| = |g1| and |h2| = |g2| at every port
    real = ChannelRealization(np.array([0.6 + 0j, 0.6j]), np.array([0.5 + 0j, -0.5 + 0j]), 0.6 + 0j, 0.5j)
    assert oracle_ej(3.0, real).value == 0.0
    assert solve_all_ports(3.0, real).value == 0.0


def test_oracle_step_floor(rng):
    with pytest.raises(ValueError):
        oracle_ej(1.0, random_realization(rng, 2), steps=50)


def test_budget_monotonicity(rng):
    for _ in range(20):
        real = random_realization(rng, 6)
        vals = [solve_all_ports(P, real).value for P in (0.5, 1, 2, 4, 8)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_no_jamming_lower_bound(rng):
    for _ in range(20):
        real = random_realization(rng, 6)
        P = 4.0
        gh1 = np.abs(real.h1) ** 2
        gg1 = abs(real.g1) ** 2
        bar = max(np.max(np.log2(1 + P * gh1) - np.log2(1 + P * gg1)), 0.0)
        assert solve_all_ports(P, real).value >= bar - 1e-12


def test_gn_deaf_eve_prefers_no_jamming():
    real = single_port(2.0, 1.0, 1.0, 0.0)
    res = solve_gn(2.0, real)
    assert res.p2 <= 2.0 / 255
    line = max(gn_raw(2.0, 1.0, 1.0, 0.0, 2.0, 0.0), 0)
    assert res.value == pytest.approx(line, abs=1e-12)


def test_gn_symmetric():
    assert solve_gn(2.0, single_port(1.0, 0.5, 1.0, 0.5)).value == 0.0


def test_gn_matches_fine_grid():
    res = solve_gn(2.0, single_port(2.0, 1.0, 1.0, 0.5))
    u = np.linspace(0, 2, 2000)
    p1, p2 = u[:, None], u[None, :]
    ok = p1 + p2 <= 2.0
    fine = np.max(np.where(ok, gn_raw(2.0, 1.0, 1.0, 0.5, p1, p2), -np.inf))
    assert res.value == pytest.approx(max(fine, 0), abs=1e-3)
    assert res.value >= fine - 1e-12


def test_gn_budget_line_suffices(rng):
    # full 2-D grid never beats the budget-line search by more than grid error
    g = rng.exponential(size=(4, 30))
    _, _, line = gn_ports(5.0, *g)
    u = np.linspace(0, 5.0, 400)
    p1, p2 = u[:, None, None], u[None, :, None]
    full = gn_raw(*g, p1, p2)
    full = np.where(p1 + p2 <= 5.0, full, -np.inf).max(axis=(0, 1))
    assert np.all(line >= np.maximum(full, 0) - 1e-9)


def test_equal_power(rng):
    for _ in range(10):
        real = random_realization(rng, 5)
        res = equal_power(4.0, real)
        direct = [rate_ej(GainQuad.at_port(real, n), PowerAllocation(2.0, 2.0, 4.0)) for n in range(5)]
        assert res.value == pytest.approx(max(direct), abs=1e-12)
        assert res.port == int(np.argmax(direct))
        assert res.value <= solve_all_ports(4.0, real).value + 1e-12


def test_equal_power_symmetric():
    assert equal_power(2.0, single_port(1.0, 0.5, 1.0, 0.5)).value == 0.0
