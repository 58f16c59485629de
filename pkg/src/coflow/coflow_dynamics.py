"""The two co-flows as ODE systems on the scale parameters (a, b, c).

Evolving the dual 4-form within the invariant family is equivalent to an ODE
system for the monomials (c^4, a b c^2, a^2 c^2), which carry the four
independent coefficients of the 4-form.  The right-hand sides below are
hand-coded polynomial rates for those monomials; the state rates
(da/dt, db/dt, dc/dt) are recovered by inverting the Jacobian of
(a, b, c) -> (c^4, a b c^2, a^2 c^2) by back substitution.  Both layers are
dtype-generic: they accept exact rationals as well as float64 or extended
precision scalars.

Flavors:

 * normalized_coflow:  d(psi)/dt = Lap(psi) - kappa^2 psi
 * modified_coflow:    d(psi)/dt = Lap(psi)
        + (1/2) d((5 gamma kappa - 7 tau0) phi) + (5/2)(1 - gamma) kappa^2 psi

The hand-coded rates never stand alone: symbolic_rhs_crosscheck recomputes
the right-hand side inside the exact exterior-algebra modules and compares
coefficient by coefficient.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .g2_ansatz import build, laplacian_psi, tau0 as ansatz_tau0, torsion
from .invariant_forms import (
    GeometryParams,
    Monomial,
    _as_scalar,
    exterior_derivative,
)

NORMALIZED = "normalized_coflow"
MODIFIED = "modified_coflow"
FLAVORS = (NORMALIZED, MODIFIED)


@dataclass(frozen=True)
class FlowConfig:
    """Flavor, constants and step control for one integration run.

    `reference` plus `escape_radius` arm the diverged-from-critical stop:
    once the state leaves the ball of that radius around the reference
    point, integration ends with that reason.  `tol_conv = 0` disables the
    convergence stop (useful for running out the full horizon).
    """

    flavor: str = NORMALIZED
    kappa: float = 4.0
    gamma: float = 3.0
    eps: int = -1
    t_max: float = 10.0
    first_step: float = 1e-4
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 100_000
    floor: float = 1e-8
    ceiling: float = 1e8
    tol_conv: float = 1e-8
    reference: tuple[float, float, float] | None = None
    escape_radius: float = 1e-1
    dtype: Any = np.float64

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}, expected one of {FLAVORS}")
        if self.eps not in (+1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        for name in ("t_max", "first_step", "rtol", "atol", "floor", "ceiling", "escape_radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.tol_conv < 0:
            raise ValueError("tol_conv must be non-negative")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass(frozen=True)
class FlowState:
    t: float
    a: float
    b: float
    c: float


def _coords(state) -> tuple:
    if isinstance(state, FlowState):
        return (state.a, state.b, state.c)
    a, b, c = state
    return (a, b, c)


def tau0_state(a, b, c, eps):
    """Scalar torsion as a plain arithmetic expression of the state."""
    q = c * c
    return 4 * (4 * a * (a * a + q) + eps * b * (2 * a * a - q)) / (7 * a * a * q)


def monomial_rates(flavor: str, a, b, q, kappa, gamma, eps) -> tuple:
    """Time derivatives of (c^4, a b c^2, a^2 c^2) with q = c^2.

    Only even powers of c appear, so the rates are rational in (a, b, q)
    and stay exact on exact inputs.  gamma is ignored by the normalized
    flavor.
    """
    if flavor == NORMALIZED:
        u1 = 8 * (2 * a * a + b * b + 2 * q + 2 * eps * b * q / a - b * b * q / (a * a)) \
            - kappa * kappa * q * q
        u2 = 4 * (eps * b * b + 4 * a ** 3 * b / q + 2 * eps * a * a * b * b / q
                  + 2 * b * q / a - eps * b * b * q / (a * a)) - kappa * kappa * a * b * q
        u3 = 4 * (2 * a * a - b * b + 2 * q + 4 * eps * a ** 3 * b / q + 2 * a * a * b * b / q
                  - 2 * eps * b * q / a + b * b * q / (a * a)) - kappa * kappa * a * a * q
        return (u1, u2, u3)
    if flavor == MODIFIED:
        u1 = (-48 * a * a - 8 * b * b - 48 * q + 10 * eps * gamma * kappa * b * q
              + 20 * gamma * kappa * a * q - 64 * eps * a * b
              + 5 * (1 - gamma) * kappa * kappa * q * q / 2)
        u2 = (-8 * b * q / a + 5 * gamma * kappa * a * a * b + 5 * gamma * kappa * b * q
              - 32 * a * b + 5 * (1 - gamma) * kappa * kappa * a * b * q / 2)
        u3 = (-24 * a * a + 8 * b * b - 24 * q + 16 * eps * b * q / a
              + 5 * eps * gamma * kappa * a * a * b + 10 * gamma * kappa * a * q
              - 5 * eps * gamma * kappa * b * q - 16 * eps * a * b
              + 5 * (1 - gamma) * kappa * kappa * a * a * q / 2)
        return (u1, u2, u3)
    raise ValueError(f"unknown flavor {flavor!r}")


def state_rates(a, b, c, u: tuple) -> tuple:
    """Invert the monomial Jacobian by back substitution.

    The Jacobian of (a, b, c) -> (c^4, a b c^2, a^2 c^2) is triangular
    enough to solve by hand, which keeps the solve dtype-generic (a library
    solve would pin the dtype).
    """
    u1, u2, u3 = u
    dc = u1 / (4 * c ** 3)
    da = (u3 - 2 * a * a * c * dc) / (2 * a * c * c)
    db = (u2 - b * c * c * da - 2 * a * b * c * dc) / (a * c * c)
    return (da, db, dc)


def _require_positive(a, b, c) -> None:
    if not (a > 0 and b > 0 and c > 0):
        raise ValueError(f"state must be positive, got ({a}, {b}, {c})")


def rhs_normalized(state, kappa, eps) -> tuple:
    """(da/dt, db/dt, dc/dt) of the normalized flow."""
    a, b, c = _coords(state)
    _require_positive(a, b, c)
    return state_rates(a, b, c, monomial_rates(NORMALIZED, a, b, c * c, kappa, None, eps))


def rhs_modified(state, kappa, gamma, eps) -> tuple:
    """(da/dt, db/dt, dc/dt) of the modified flow."""
    a, b, c = _coords(state)
    _require_positive(a, b, c)
    return state_rates(a, b, c, monomial_rates(MODIFIED, a, b, c * c, kappa, gamma, eps))


_RATE_KEYS = ("vol", "e23^w1", "e13^w2", "e12^w3")


def symbolic_rhs_crosscheck(params: GeometryParams, kappa, gamma, flavor: str) -> bool:
    """Validate the hand-coded monomial rates against the exact algebra.

    The right-hand side 4-form is rebuilt from the Laplacian, torsion and
    scaling terms using only the exterior-algebra modules, then compared
    coefficient by coefficient with the hand-coded rates.  kappa and gamma
    must be exact (int or Fraction).  Returns True; raises ValueError
    naming the first mismatched monomial.
    """
    kap = _as_scalar(kappa)
    ans = build(params)
    if flavor == NORMALIZED:
        rate_form = laplacian_psi(ans) - kap * kap * ans.psi
        gam = None
    elif flavor == MODIFIED:
        gam = _as_scalar(gamma)
        t0 = ansatz_tau0(ans)
        rate_form = (laplacian_psi(ans)
                     + Fraction(1, 2) * ((5 * gam * kap - 7 * t0) * exterior_derivative(ans.phi))
                     + (Fraction(5, 2) * (1 - gam) * kap * kap) * ans.psi)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")

    u1, u2, u3 = monomial_rates(flavor, params.a, params.b, params.q, kap, gam, params.eps)
    expected = {
        "vol": u1,
        "e23^w1": -params.eps * u2,
        "e13^w2": params.eps * u2,
        "e12^w3": -u3,
    }
    for key in _RATE_KEYS:
        got = rate_form.coefficient(Monomial.from_key(key))
        if got != expected[key]:
            raise ValueError(
                f"right-hand sides disagree at {key}: algebra gives {got}, "
                f"hand-coded rate gives {expected[key]}")
    stray = set(rate_form.coeffs) - {Monomial.from_key(k) for k in _RATE_KEYS}
    if stray:
        raise ValueError(f"algebra right-hand side has unexpected monomials: {sorted(m.key for m in stray)}")
    return True


def reduced_xy_rhs(X, Y, eps) -> tuple:
    """Scale-invariant reduction in X = a^2/c^2, Y = ab/c^2, per unit s with ds = dt/c^2."""
    if not (X > 0 and Y > 0):
        raise ValueError(f"reduced coordinates must be positive, got ({X}, {Y})")
    dX = (4 / (X * X)) * ((X + 1) * Y * Y + 2 * eps * (2 * X * X - 2 * X - 1) * X * Y
                          - 2 * X * X * (2 * X - 1) * (X + 1))
    dY = (4 * Y / (X * X)) * (2 * (1 - X) * Y * Y + eps * (2 * X * X - 3 * X - 1) * Y
                              + 2 * X * (1 - 2 * X))
    return (dX, dY)


def scaling_ode_rhs(mu, kappa, gamma, flavor: str):
    """Rate of the relative scale mu of a trajectory against its attractor."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if flavor == NORMALIZED:
        return kappa * kappa * (1 - mu * mu) / (4 * mu)
    if flavor == MODIFIED:
        return 5 * kappa * kappa * (mu * (1 - gamma) + 1) * (mu - 1) / (8 * mu)
    raise ValueError(f"unknown flavor {flavor!r}")


# Dormand-Prince 5(4) tableau, kept as exact rationals and materialized per
# dtype so extended-precision runs do not inherit float64 rounding.
_DP_A = (
    (),
    (Fraction(1, 5),),
    (Fraction(3, 40), Fraction(9, 40)),
    (Fraction(44, 45), Fraction(-56, 15), Fraction(32, 9)),
    (Fraction(19372, 6561), Fraction(-25360, 2187), Fraction(64448, 6561), Fraction(-212, 729)),
    (Fraction(9017, 3168), Fraction(-355, 33), Fraction(46732, 5247), Fraction(49, 176),
     Fraction(-5103, 18656)),
    (Fraction(35, 384), Fraction(0), Fraction(500, 1113), Fraction(125, 192),
     Fraction(-2187, 6784), Fraction(11, 84)),
)
_DP_E = (Fraction(71, 57600), Fraction(0), Fraction(-71, 16695), Fraction(71, 1920),
         Fraction(-17253, 339200), Fraction(22, 525), Fraction(-1, 40))

_TABLEAU_CACHE: dict = {}


def _tableau(dt: np.dtype):
    if dt not in _TABLEAU_CACHE:
        def conv(row):
            num = np.array([f.numerator for f in row], dtype=dt)
            den = np.array([f.denominator for f in row], dtype=dt)
            return num / den

        _TABLEAU_CACHE[dt] = ([conv(row) for row in _DP_A], conv(_DP_A[6]), conv(_DP_E))
    return _TABLEAU_CACHE[dt]


@dataclass
class Trajectory:
    """Accepted integration samples plus scalars derived from each state.

    The derived columns are always recomputed from (a, b, c); nothing is
    integrated twice.
    """

    config: FlowConfig
    states: list[FlowState] = field(default_factory=list)
    tau0: list[float] = field(default_factory=list)
    volume: list[float] = field(default_factory=list)
    X: list[float] = field(default_factory=list)
    Y: list[float] = field(default_factory=list)
    reason: str = "max-steps"
    steps: int = 0

    def _append(self, t, y) -> None:
        a, b, c = float(y[0]), float(y[1]), float(y[2])
        q = c * c
        self.states.append(FlowState(float(t), a, b, c))
        self.tau0.append(tau0_state(a, b, c, self.config.eps))
        self.volume.append(a * a * b * q * q)
        self.X.append(a * a / q)
        self.Y.append(a * b / q)

    @property
    def final_state(self) -> FlowState:
        return self.states[-1]

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "a", "b", "c", "tau0", "V", "X", "Y"])
            rows = zip(self.states, self.tau0, self.volume, self.X, self.Y)
            for st, t0, vol, x, yy in rows:
                writer.writerow([format(v, ".17g") for v in (st.t, st.a, st.b, st.c, t0, vol, x, yy)])

    def sidecar_dict(self) -> dict:
        fin = self.final_state
        return {
            "reason": self.reason,
            "steps": self.steps,
            "final_state": {"t": fin.t, "a": fin.a, "b": fin.b, "c": fin.c},
        }

    def write_sidecar(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.sidecar_dict(), fh, indent=2)
            fh.write("\n")


def _guarded_rhs(config: FlowConfig) -> Callable:
    kap, gam, eps, flavor = config.kappa, config.gamma, config.eps, config.flavor

    def f(y):
        a, b, c = y[0], y[1], y[2]
        if not (a > 0 and b > 0 and c > 0):
            return None
        rates = state_rates(a, b, c, monomial_rates(flavor, a, b, c * c, kap, gam, eps))
        out = np.array(rates, dtype=y.dtype)
        if not np.all(np.isfinite(out)):
            return None
        return out

    return f


def _stop_reason(config: FlowConfig, y, fnorm) -> str | None:
    if min(y[0], y[1], y[2]) < config.floor:
        return "degeneracy"
    if max(y[0], y[1], y[2]) > config.ceiling:
        return "blow-up"
    if config.reference is not None:
        ref = np.asarray(config.reference, dtype=y.dtype)
        if float(np.sqrt(np.sum((y - ref) ** 2))) > config.escape_radius:
            return "diverged-from-critical"
    if fnorm < config.tol_conv:
        return "converged"
    return None


def integrate(config: FlowConfig, initial: FlowState) -> Trajectory:
    """Adaptive embedded Runge-Kutta 5(4) run with first-same-as-last reuse.

    Stops with one of: "converged" (|rhs| below tol_conv), "degeneracy"
    (a scale under the floor), "blow-up" (a scale over the ceiling),
    "diverged-from-critical" (left the reference ball), "horizon" (reached
    t_max), "max-steps".  The error control is an RMS norm of the embedded
    difference against atol + rtol * |y|.
    """
    a0, b0, c0 = _coords(initial)
    _require_positive(a0, b0, c0)
    if not all(np.isfinite(v) for v in (a0, b0, c0, initial.t)):
        raise ValueError("initial state must be finite")

    dt = np.dtype(config.dtype)
    A, B, E = _tableau(dt)
    f = _guarded_rhs(config)

    y = np.array([a0, b0, c0], dtype=dt)
    t = dt.type(initial.t)
    t_max = dt.type(config.t_max)

    traj = Trajectory(config=config)
    traj._append(t, y)
    k1 = f(y)
    if k1 is None:
        raise ValueError("right-hand side is not finite at the initial state")

    reason = _stop_reason(config, y, float(np.sqrt(np.sum(k1 * k1))))
    h = dt.type(config.first_step)
    steps = attempts = 0

    while reason is None:
        if steps >= config.max_steps or attempts >= 10 * config.max_steps:
            reason = "max-steps"
            break
        if t >= t_max:
            reason = "horizon"
            break

        final_step = h >= t_max - t
        if final_step:
            h = t_max - t
        attempts += 1

        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(A[i][j] * ks[j] for j in range(i))
            ki = f(yi)
            if ki is None:
                break
            ks.append(ki)
        if len(ks) < 7:
            h = h * dt.type(0.2)
            continue

        y_new = y + h * sum(A[6][j] * ks[j] for j in range(6))
        k_new = f(y_new)
        if k_new is None:
            h = h * dt.type(0.2)
            continue
        ks.append(k_new)  # embedded error weights include the new-point slope

        err = h * sum(E[j] * ks[j] for j in range(7))
        scale = config.atol + config.rtol * np.maximum(np.abs(y), np.abs(y_new))
        enorm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if not np.isfinite(enorm):
            h = h * dt.type(0.2)
            continue

        if enorm <= 1.0:
            t = t_max if final_step else t + h
            y = y_new
            k1 = k_new
            steps += 1
            traj._append(t, y)
            reason = _stop_reason(config, y, float(np.sqrt(np.sum(k1 * k1))))
            if reason is None and t >= t_max:
                reason = "horizon"
            grow = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
            h = h * dt.type(grow)
        else:
            h = h * dt.type(max(0.2, min(1.0, 0.9 * enorm ** -0.2)))

    traj.reason = reason
    traj.steps = steps
    return traj


def _rk4_step(f: Callable, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + (h / 2) * k1)
    k3 = f(y + (h / 2) * k2)
    k4 = f(y + h * k3)
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def hitchin_volume(state) -> float:
    """Total volume a^2 b c^4 of the structure, per unit base volume."""
    a, b, c = _coords(state)
    return float(a) ** 2 * float(b) * float(c) ** 4


def hitchin_rate(state, kappa, gamma, eps) -> float:
    """Instantaneous volume rate dV/dt along the modified flow.

    The first variation of the volume functional along a 4-form velocity is
    (1/4) of its pairing with the structure 4-form, integrated; on this
    family that evaluates to

        (1/4) (|tau3|^2 - (35/2)(tau0 - kappa)(tau0 - (gamma-1) kappa)) V.

    tau0 and |tau3|^2 are computed exactly, then the prefactor is applied
    in floating point.
    """
    a, b, c = (float(v) for v in _coords(state))
    fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
    td = torsion(build(GeometryParams(fa, fb, fc * fc, eps)))
    t0 = float(td.tau0)
    n2 = float(td.tau3_norm_sq)
    vol = hitchin_volume((a, b, c))
    return 0.25 * (n2 - 17.5 * (t0 - kappa) * (t0 - (gamma - 1) * kappa)) * vol


def hitchin_rate_check(trajectory: Trajectory, kappa, gamma,
                       probe_step: float = 1e-5, max_samples: int = 40) -> float:
    """Worst relative error between finite-difference dV/dt and the rate formula.

    Each interior sample is probed with two fixed-step fourth-order micro
    steps of the exact flow through that point and a centered difference of
    V; probing keeps the difference-quotient truncation error far below the
    comparison tolerance, which spacing of the accepted steps would not.
    """
    cfg = trajectory.config
    if cfg.flavor != MODIFIED:
        raise ValueError("volume-rate check applies to modified-flow trajectories")
    states = trajectory.states
    if len(states) < 3:
        raise ValueError("trajectory too short for interior finite differences")

    eps = cfg.eps

    def f(y):
        a, b, c = y[0], y[1], y[2]
        return np.array(state_rates(a, b, c, monomial_rates(MODIFIED, a, b, c * c, kappa, gamma, eps)),
                        dtype=y.dtype)

    interior = range(1, len(states) - 1)
    stride = max(1, len(states) // max_samples)
    worst = 0.0
    for i in list(interior)[::stride]:
        st = states[i]
        y = np.array([st.a, st.b, st.c], dtype=np.float64)
        y_fwd = _rk4_step(f, y, probe_step)
        y_bwd = _rk4_step(f, y, -probe_step)
        fd = (hitchin_volume(y_fwd) - hitchin_volume(y_bwd)) / (2 * probe_step)
        rate = hitchin_rate(y, kappa, gamma, eps)
        # scale floor keeps the ratio meaningful on stationary trajectories
        scale = max(abs(rate), abs(fd), 1e-9 * kappa ** 3 * hitchin_volume(y))
        worst = max(worst, abs(fd - rate) / scale)
    return worst
