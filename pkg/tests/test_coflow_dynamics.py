import csv
import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from coflow.coflow_dynamics import (
    MODIFIED,
    NORMALIZED,
    FlowConfig,
    FlowState,
    hitchin_rate,
    hitchin_rate_check,
    hitchin_volume,
    integrate,
    monomial_rates,
    reduced_xy_rhs,
    rhs_modified,
    rhs_normalized,
    scaling_ode_rhs,
    state_rates,
    symbolic_rhs_crosscheck,
    tau0_state,
)
from coflow.invariant_forms import GeometryParams, random_params, total_integral, wedge
from coflow.g2_ansatz import build, tau0 as ansatz_tau0


def frac_state(a, b, q):
    """Exact (a, b, c^2 = q) triple for the rational paths."""
    return Fraction(a), Fraction(b), Fraction(q)


def test_rhs_example_round_minus_point():
    # at (1,1,1), eps=-1, kappa=2 the monomial rates are all 12
    u = monomial_rates(NORMALIZED, *frac_state(1, 1, 1), Fraction(2), None, -1)
    assert u == (12, 12, 12)
    da, db, dc = rhs_normalized((1.0, 1.0, 1.0), 2.0, -1)
    assert 4 * dc == pytest.approx(12.0, abs=1e-14)


def test_monomial_rates_vanish_at_critical_points():
    # normalized flow, both eps, exact zeros
    for kap in (Fraction(1), Fraction(4)):
        a = Fraction(12, 5) / kap
        assert monomial_rates(NORMALIZED, a, a, 5 * a * a, kap, None, +1) == (0, 0, 0)
        a = 4 / kap
        assert monomial_rates(NORMALIZED, a, a, a * a, kap, None, -1) == (0, 0, 0)
    # modified flow: tau0 = kappa point and the (gamma-1)-rescaled point
    kap, gam = Fraction(4), Fraction(3)
    for keff in (kap, (gam - 1) * kap):
        a = Fraction(12, 5) / keff
        assert monomial_rates(MODIFIED, a, a, 5 * a * a, kap, gam, +1) == (0, 0, 0)
        a = 4 / keff
        assert monomial_rates(MODIFIED, a, a, a * a, kap, gam, -1) == (0, 0, 0)


def test_symbolic_crosscheck_at_random_points():
    rng = random.Random(314159)
    for _ in range(20):
        for eps in (+1, -1):
            p = random_params(rng, eps)
            assert symbolic_rhs_crosscheck(p, Fraction(4), Fraction(3), NORMALIZED)
            assert symbolic_rhs_crosscheck(p, Fraction(4), Fraction(3), MODIFIED)
            assert symbolic_rhs_crosscheck(p, Fraction(5, 2), Fraction(7, 3), MODIFIED)


def test_float_path_matches_exact_path():
    rng = random.Random(2718)
    for _ in range(20):
        for eps in (+1, -1):
            p = random_params(rng, eps)
            a, b, q = p.a, p.b, p.q
            c = math.sqrt(float(q))
            # c is irrational, so compare through q to stay exact on one side
            exact_u = monomial_rates(MODIFIED, a, b, q, Fraction(4), Fraction(3), eps)
            float_u = monomial_rates(MODIFIED, float(a), float(b), float(q), 4.0, 3.0, eps)
            for eu, fu in zip(exact_u, float_u):
                assert fu == pytest.approx(float(eu), rel=1e-12, abs=1e-12)
            rates = rhs_modified((float(a), float(b), c), 4.0, 3.0, eps)
            assert all(np.isfinite(rates))


def test_state_rates_inverts_the_monomial_jacobian():
    # d/dt of (c^4, a b c^2, a^2 c^2) recovered from (da, db, dc) exactly
    a, b, c = Fraction(3, 2), Fraction(5, 7), Fraction(2, 3)
    u = (Fraction(11, 3), Fraction(-4, 5), Fraction(7, 2))
    da, db, dc = state_rates(a, b, c, u)
    assert 4 * c ** 3 * dc == u[0]
    assert (da * b + a * db) * c * c + 2 * a * b * c * dc == u[1]
    assert 2 * a * da * c * c + 2 * a * a * c * dc == u[2]


def test_tau0_state_matches_ansatz():
    # rational c keeps both routes exact (q = c^2)
    rng = random.Random(99)
    for eps in (+1, -1):
        for _ in range(5):
            a = Fraction(rng.randint(1, 30), rng.randint(1, 30))
            b = Fraction(rng.randint(1, 30), rng.randint(1, 30))
            c = Fraction(rng.randint(1, 30), rng.randint(1, 30))
            p = GeometryParams(a=a, b=b, q=c * c, eps=eps)
            assert tau0_state(a, b, c, eps) == ansatz_tau0(build(p))


def test_reduced_fixed_points():
    assert reduced_xy_rhs(Fraction(1, 5), Fraction(1, 5), +1) == (0, 0)
    assert reduced_xy_rhs(Fraction(1), Fraction(1), -1) == (0, 0)
    with pytest.raises(ValueError):
        reduced_xy_rhs(0, 1, +1)


def test_reduction_consistency_exact_chain_rule():
    # q dX/dt == reduced rhs, independent of kappa (the kappa terms cancel)
    for eps in (+1, -1):
        for kap in (Fraction(2), Fraction(4)):
            a, b, c = Fraction(7, 5), Fraction(4, 5), Fraction(6, 5)
            q = c * c
            da, db, dc = rhs_normalized((a, b, c), kap, eps)
            X, Y = a * a / q, a * b / q
            dX = (2 * a * da * q - a * a * 2 * c * dc) / (q * q)
            dY = ((da * b + a * db) * q - a * b * 2 * c * dc) / (q * q)
            assert reduced_xy_rhs(X, Y, eps) == (q * dX, q * dY)


def test_reduction_consistency_finite_difference():
    # advance the full flow by h = 1e-4 and compare X against the reduced step
    h = 1e-4
    for eps in (+1, -1):
        a, b, c = 1.2, 0.9, 1.1
        q = c * c
        da, db, dc = rhs_normalized((a, b, c), 4.0, eps)
        a2, b2, c2 = a + h * da, b + h * db, c + h * dc
        X1, Y1 = a * a / q, a * b / q
        X2 = a2 * a2 / (c2 * c2)
        Y2 = a2 * b2 / (c2 * c2)
        dX, dY = reduced_xy_rhs(X1, Y1, eps)
        assert (X2 - X1) / h == pytest.approx(dX / q, rel=1e-3)
        assert (Y2 - Y1) / h == pytest.approx(dY / q, rel=1e-3)


def test_scaling_ode_fixed_points_and_slopes():
    mu = sympy.Symbol("mu", positive=True)
    kap, gam = sympy.Integer(4), sympy.Integer(3)

    f_norm = scaling_ode_rhs(mu, kap, gam, NORMALIZED)
    assert sympy.simplify(f_norm.subs(mu, 1)) == 0
    assert sympy.simplify(sympy.diff(f_norm, mu).subs(mu, 1)) == -kap ** 2 / 2

    f_mod = scaling_ode_rhs(mu, kap, gam, MODIFIED)
    for root in (sympy.Integer(1), sympy.Rational(1, 1) / (gam - 1)):
        assert sympy.simplify(f_mod.subs(mu, root)) == 0
    slope_at_1 = sympy.diff(f_mod, mu).subs(mu, 1)
    assert sympy.simplify(slope_at_1 - sympy.Rational(5, 8) * kap ** 2 * (2 - gam)) == 0
    slope_at_rescaled = sympy.diff(f_mod, mu).subs(mu, 1 / (gam - 1))
    expected = sympy.Rational(5, 8) * kap ** 2 * (1 - gam) * (2 - gam)
    assert sympy.simplify(slope_at_rescaled - expected) == 0


def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(flavor="nonsense")
    with pytest.raises(ValueError):
        FlowConfig(eps=0)
    with pytest.raises(ValueError):
        FlowConfig(kappa=-1.0)
    with pytest.raises(ValueError):
        FlowConfig(t_max=0.0)
    with pytest.raises(ValueError):
        FlowConfig(tol_conv=-1e-3)
    with pytest.raises(ValueError):
        FlowConfig(max_steps=0)


def test_rhs_positivity_guard():
    with pytest.raises(ValueError):
        rhs_normalized((1.0, -1.0, 1.0), 4.0, -1)
    with pytest.raises(ValueError):
        integrate(FlowConfig(), FlowState(0.0, 1.0, 0.0, 1.0))


def test_integration_converges_to_the_minus_attractor():
    cfg = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=-1)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    assert traj.reason == "converged"
    fin = traj.final_state
    assert max(abs(fin.a - 1), abs(fin.b - 1), abs(fin.c - 1)) < 1e-6
    # derived columns stay consistent with the states
    assert traj.X[-1] == pytest.approx(fin.a ** 2 / fin.c ** 2)
    assert traj.tau0[-1] == pytest.approx(4.0, abs=1e-6)


def test_integration_converges_to_the_plus_attractor():
    cfg = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=+1)
    traj = integrate(cfg, FlowState(0.0, 0.5, 0.7, 1.2))
    assert traj.reason == "converged"
    fin = traj.final_state
    target = (0.6, 0.6, 0.6 * math.sqrt(5))
    assert max(abs(fin.a - target[0]), abs(fin.b - target[1]), abs(fin.c - target[2])) < 1e-6


def test_equilibrium_run_stays_put_over_the_horizon():
    cfg = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=-1, t_max=1.0, tol_conv=0.0)
    traj = integrate(cfg, FlowState(0.0, 1.0, 1.0, 1.0))
    assert traj.reason == "horizon"
    assert traj.final_state.t == 1.0
    for st in traj.states:
        assert max(abs(st.a - 1), abs(st.b - 1), abs(st.c - 1)) < 1e-9


def test_stop_reasons():
    # blow-up fires on the initial state when it already exceeds the ceiling
    cfg = FlowConfig(flavor=NORMALIZED, eps=-1, ceiling=1.2)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    assert traj.reason == "blow-up"
    assert traj.steps == 0

    cfg = FlowConfig(flavor=NORMALIZED, eps=-1, floor=0.9)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    assert traj.reason == "degeneracy"

    cfg = FlowConfig(flavor=NORMALIZED, eps=-1, max_steps=3, tol_conv=0.0)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    assert traj.reason == "max-steps"
    assert traj.steps <= 3

    cfg = FlowConfig(flavor=NORMALIZED, eps=-1, reference=(1.0, 1.0, 1.0),
                     escape_radius=0.05, tol_conv=0.0)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    assert traj.reason == "diverged-from-critical"


def test_trajectory_files(tmp_path):
    cfg = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=-1, t_max=0.5, tol_conv=0.0)
    traj = integrate(cfg, FlowState(0.0, 1.3, 0.8, 1.1))
    csv_path = tmp_path / "run.csv"
    sidecar = tmp_path / "run.json"
    traj.write_csv(csv_path)
    traj.write_sidecar(sidecar)

    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "a", "b", "c", "tau0", "V", "X", "Y"]
    assert len(rows) == len(traj.states) + 1
    first = rows[1]
    assert float(first[1]) == 1.3
    # 17 significant digits survive the round trip
    last = rows[-1]
    assert float(last[1]) == traj.final_state.a

    side = json.loads(sidecar.read_text(encoding="utf-8"))
    assert side["reason"] == "horizon"
    assert side["steps"] == traj.steps
    assert side["final_state"]["t"] == 0.5


def test_longdouble_integration_matches_double():
    cfg64 = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=-1, t_max=1.0, tol_conv=0.0)
    cfg80 = FlowConfig(flavor=NORMALIZED, kappa=4.0, eps=-1, t_max=1.0, tol_conv=0.0,
                       dtype=np.longdouble)
    t64 = integrate(cfg64, FlowState(0.0, 1.3, 0.8, 1.1))
    t80 = integrate(cfg80, FlowState(0.0, 1.3, 0.8, 1.1))
    assert t80.reason == "horizon"
    f64, f80 = t64.final_state, t80.final_state
    assert abs(f64.a - f80.a) < 1e-9
    assert abs(f64.b - f80.b) < 1e-9
    assert abs(f64.c - f80.c) < 1e-9


def test_hitchin_volume_and_pairing():
    assert hitchin_volume((1.0, 1.0, 1.0)) == 1.0
    assert hitchin_volume(FlowState(0.0, 1.0, 1.0, 2 ** -0.5)) == pytest.approx(0.25)
    # a^2 b q^2 equals eps/7 times the total pairing integral, exactly
    rng = random.Random(123)
    for eps in (+1, -1):
        p = random_params(rng, eps)
        ans = build(p)
        pairing = total_integral(wedge(ans.phi, ans.psi), p)
        assert p.a ** 2 * p.b * p.q ** 2 == p.eps * pairing / 7


def test_hitchin_rate_positive_inside_the_bracket():
    # gamma=4: tau0 strictly between kappa and (gamma-1) kappa forces growth
    kappa, gamma, eps = 4.0, 4.0, -1
    state = (0.5, 0.5, 0.5)  # tau0 = 8, between 4 and 12
    t0 = tau0_state(*state, eps)
    assert kappa < t0 < (gamma - 1) * kappa
    assert hitchin_rate(state, kappa, gamma, eps) > 0


def test_hitchin_rate_matches_finite_difference():
    cfg = FlowConfig(flavor=MODIFIED, kappa=4.0, gamma=3.0, eps=-1,
                     t_max=0.4, tol_conv=0.0)
    traj = integrate(cfg, FlowState(0.0, 1.25, 0.85, 1.05))
    worst = hitchin_rate_check(traj, 4.0, 3.0)
    assert worst < 1e-4

    with pytest.raises(ValueError):
        hitchin_rate_check(integrate(FlowConfig(flavor=NORMALIZED, eps=-1, t_max=0.1,
                                                tol_conv=0.0),
                                     FlowState(0.0, 1.2, 0.9, 1.0)), 4.0, 3.0)
