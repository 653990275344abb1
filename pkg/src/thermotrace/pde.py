"""Spectral Galerkin route: integrate the thermostat PDE directly.

The solution is expanded in the Neumann eigenbasis of (0, pi),

    u(t, x) = c_0(t) phi_0 + sum_k c_k(t) phi_k,
    phi_0 = 1/sqrt(pi),  phi_k = sqrt(2/pi) cos(k x),

where the feedback enters every mode through the boundary trace at x = pi:

    c_0' = -g / sqrt(pi),
    c_k' = -k^2 c_k - sqrt(2/pi) g,      g = tanh(beta u(t, pi)).

The linear part is integrated exactly by exp(-k^2 dt) and the feedback by
its interval average, which gives the exponential integrator

    c_k(t + dt) = E_k c_k(t) - g* w_k,
    E_k = exp(-k^2 dt),  w_k = sqrt(2/pi) (1 - E_k) / k^2,  w_0 = dt/sqrt(pi).

With g* frozen at the left endpoint this is the first order scheme; the
default trapezoid corrector averages g at the endpoint and at the
predicted state and is second order.  At beta = 0 both are exact.

This module exists to cross-validate the Volterra route: the same initial
data must produce the same boundary trace by either path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonFiniteError
from .kernels import DEFAULT_POLICY, InitialData, SeriesPolicy
from .volterra import VolterraProblem, solve_volterra

SQRT_PI = math.sqrt(math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

IMEX_EULER = "imex_euler"
IMEX_TRAPEZOID = "imex_trapezoid"


@dataclass(eq=False)
class SpectralState:
    """Snapshot of the truncated mode vector at one time."""

    t: float
    coeffs: np.ndarray
    beta: float

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.ndim != 1 or self.coeffs.size < 1:
            raise DomainError("coefficient vector must be one dimensional, length >= 1")

    @property
    def K(self) -> int:
        return self.coeffs.size - 1

    @property
    def mean(self) -> float:
        return float(self.coeffs[0]) / SQRT_PI

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs * self.coeffs)))

    @property
    def h1_norm(self) -> float:
        ks = np.arange(self.coeffs.size, dtype=np.float64)
        return float(np.sqrt(np.sum((1.0 + ks * ks) * self.coeffs * self.coeffs)))


@dataclass(frozen=True)
class SimConfig:
    """Resolution and stepping choices for one simulation."""

    K: int = 64
    dt: float = 0.005
    horizon: float = 20.0
    stepper: str = IMEX_TRAPEZOID
    snapshot_every: int = 1

    def __post_init__(self):
        if self.K < 1:
            raise DomainError("SimConfig.K must be at least 1")
        if not (self.dt > 0.0) or not math.isfinite(self.dt):
            raise DomainError("SimConfig.dt must be a positive finite real")
        if not (self.horizon >= self.dt) or not math.isfinite(self.horizon):
            raise DomainError("SimConfig.horizon must cover at least one step")
        if self.stepper not in (IMEX_EULER, IMEX_TRAPEZOID):
            raise DomainError(f"unknown stepper {self.stepper!r}")
        if self.snapshot_every < 1:
            raise DomainError("SimConfig.snapshot_every must be at least 1")

    @property
    def steps(self) -> int:
        return max(1, int(round(self.horizon / self.dt)))


def project_initial_data(u0: InitialData, K: int, beta: float) -> SpectralState:
    """Exact projection of mean + sum c_k cos(k x) onto the first K+1 modes."""
    if K < 1:
        raise DomainError("K must be at least 1")
    if len(u0.modes) > K:
        raise DomainError(
            f"initial data has {len(u0.modes)} cosine modes, truncation K = {K}")
    coeffs = np.zeros(K + 1)
    coeffs[0] = u0.mean * SQRT_PI
    for idx, amp in enumerate(u0.modes):
        coeffs[idx + 1] = amp / SQRT_2_OVER_PI
    return SpectralState(t=0.0, coeffs=coeffs, beta=float(beta))


def trace(state: SpectralState, x: float) -> float:
    """Pointwise value of the truncated expansion at x in [0, pi].

    The endpoints use exact signs, cos(k pi) = (-1)^k, instead of floating
    cosines, since they feed the feedback law and the two-route checks.
    """
    x = float(x)
    if not (0.0 <= x <= math.pi):
        raise DomainError(f"trace requires 0 <= x <= pi, got {x}")
    c = state.coeffs
    if c.size == 1:
        return float(c[0]) / SQRT_PI
    if x == 0.0:
        tail = float(np.sum(c[1:]))
    elif x == math.pi:
        signs = np.where(np.arange(1, c.size) % 2 == 0, 1.0, -1.0)
        tail = float(np.dot(signs, c[1:]))
    else:
        ks = np.arange(1, c.size, dtype=np.float64)
        tail = float(np.dot(np.cos(ks * x), c[1:]))
    return float(c[0]) / SQRT_PI + SQRT_2_OVER_PI * tail


def rhs_coefficients(state: SpectralState) -> np.ndarray:
    """Mode derivatives c' = -k^2 c - g phi_k(0).

    The feedback flux acts at x = 0, where every eigenfunction takes its
    positive peak value, so the forcing hits all modes with the same sign;
    only the observation at x = pi alternates.
    """
    c = state.coeffs
    g = math.tanh(state.beta * trace(state, math.pi))
    ks = np.arange(c.size, dtype=np.float64)
    out = -(ks * ks) * c
    out[0] -= g / SQRT_PI
    if c.size > 1:
        out[1:] -= SQRT_2_OVER_PI * g
    return out


def integrate(state0: SpectralState, config: SimConfig) -> list:
    """Run the exponential integrator and return the snapshot list.

    Snapshots are taken at step 0, every snapshot_every-th step, and at
    the final step.  Each snapshot owns a copy of the coefficient vector.
    """
    beta = state0.beta
    kk = state0.K
    c = state0.coeffs.copy()
    dt = config.dt
    if kk != config.K:
        raise DomainError(
            f"state has K = {kk} but config asks for K = {config.K}")
    ks = np.arange(kk + 1, dtype=np.float64)
    lam = ks * ks
    decay = np.exp(-lam * dt)
    weights = np.empty(kk + 1)
    weights[0] = dt / SQRT_PI
    if kk >= 1:
        weights[1:] = SQRT_2_OVER_PI * (1.0 - decay[1:]) / lam[1:]
    signs = np.where(ks.astype(np.int64) % 2 == 0, 1.0, -1.0)
    # trace at pi of a raw coefficient vector, sign-exact
    inv_sqrt_pi = 1.0 / SQRT_PI

    def trace_pi(vec):
        return vec[0] * inv_sqrt_pi + SQRT_2_OVER_PI * float(np.dot(signs[1:], vec[1:]))

    corrector = config.stepper == IMEX_TRAPEZOID
    snapshots = [SpectralState(t=state0.t, coeffs=c.copy(), beta=beta)]
    n = config.steps
    for i in range(1, n + 1):
        g_left = math.tanh(beta * trace_pi(c))
        pred = decay * c - g_left * weights
        if corrector:
            g_right = math.tanh(beta * trace_pi(pred))
            g_star = 0.5 * (g_left + g_right)
            c = decay * c - g_star * weights
        else:
            c = pred
        if not np.all(np.isfinite(c)):
            raise NonFiniteError(
                f"mode vector became non-finite at step {i} (t = {state0.t + i * dt})")
        if i % config.snapshot_every == 0 or i == n:
            snapshots.append(SpectralState(t=state0.t + i * dt, coeffs=c.copy(),
                                           beta=beta))
    return snapshots


def trace_series(snapshots: list, x: float = math.pi) -> tuple:
    """Times and trace values across a snapshot list."""
    times = np.array([s.t for s in snapshots])
    values = np.array([trace(s, x) for s in snapshots])
    return times, values


def dissipation_check(snapshots: list) -> tuple:
    """Residual of the energy balance d/dt (1/2)|u|^2 = -|u_x|^2 - u(0) g(u(pi)).

    The time derivative is a centered difference across snapshots, so the
    residual carries both the quadrature error O(dt^2) and, for rough
    initial data, the spectral truncation transient e^{-K^2 t}.  Returns
    (interior times, residuals).
    """
    if len(snapshots) < 3:
        raise DomainError("dissipation_check needs at least three snapshots")
    times = np.array([s.t for s in snapshots])
    energy = np.array([0.5 * float(np.sum(s.coeffs * s.coeffs)) for s in snapshots])
    rhs = np.empty(times.size)
    for i, s in enumerate(snapshots):
        ks = np.arange(s.coeffs.size, dtype=np.float64)
        grad = float(np.sum((ks * ks) * s.coeffs * s.coeffs))
        g = math.tanh(s.beta * trace(s, math.pi))
        rhs[i] = -grad - trace(s, 0.0) * g
    dE = (energy[2:] - energy[:-2]) / (times[2:] - times[:-2])
    return times[1:-1], dE - rhs[1:-1]


@dataclass(frozen=True)
class H1Equivalence:
    """Tail suprema of the boundary trace and of the full H1 norm."""

    trace_tail: float
    h1_tail: float


def h1_decay_equivalence(snapshots: list, tail_fraction: float = 0.25) -> H1Equivalence:
    """Compare trace decay with full-state decay over the trailing window.

    The boundary trace controls the H1 norm and vice versa, so the two
    tail suprema are small together; this quantifies that equivalence on
    one run.
    """
    if not (0.0 < tail_fraction <= 1.0):
        raise DomainError("tail_fraction must lie in (0, 1]")
    n = len(snapshots)
    start = min(n - 1, int(math.floor(n * (1.0 - tail_fraction))))
    window = snapshots[start:]
    trace_tail = max(abs(trace(s, math.pi)) for s in window)
    h1_tail = max(s.h1_norm for s in window)
    return H1Equivalence(trace_tail=trace_tail, h1_tail=h1_tail)


def snapshot_table(snapshots: list) -> dict:
    """Column-wise summary used by the command line exporter."""
    times = np.array([s.t for s in snapshots])
    return {
        "t": times,
        "trace_0": np.array([trace(s, 0.0) for s in snapshots]),
        "trace_pi": np.array([trace(s, math.pi) for s in snapshots]),
        "mean": np.array([s.mean for s in snapshots]),
        "l2": np.array([s.l2_norm for s in snapshots]),
        "h1": np.array([s.h1_norm for s in snapshots]),
    }


@dataclass(eq=False)
class TwoRouteComparison:
    """Shared-grid boundary traces from the Volterra and spectral routes."""

    times: np.ndarray
    trace_volterra: np.ndarray
    trace_pde: np.ndarray
    sup_diff: float


def compare_with_volterra(beta: float, u0: InitialData, horizon: float = 20.0,
                          dt: float = 0.005, K: int = 64,
                          stepper: str = IMEX_TRAPEZOID,
                          policy: SeriesPolicy = DEFAULT_POLICY) -> TwoRouteComparison:
    """Solve the same problem by both routes and report the sup difference.

    This is the central cross-validation of the package: an integral
    equation driven by the exact heat kernel against a mode truncation
    driven by the exact semigroup, agreeing to the quadrature order.
    """
    problem = VolterraProblem(beta=beta, u0=u0, horizon=horizon, dt=dt,
                              policy=policy)
    traj = solve_volterra(problem)
    state0 = project_initial_data(u0, K, beta)
    config = SimConfig(K=K, dt=dt, horizon=horizon, stepper=stepper,
                       snapshot_every=1)
    snaps = integrate(state0, config)
    times, tr = trace_series(snaps, math.pi)
    if times.size != traj.times.size:
        raise DomainError("route grids fell out of alignment")
    sup = float(np.max(np.abs(tr - traj.y)))
    return TwoRouteComparison(times=traj.times, trace_volterra=traj.y,
                              trace_pde=tr, sup_diff=sup)
