"""Frequency domain route to the stability range of the thermostat loop.

The closed loop transfer function of the linearized model, seen from the
feedback nonlinearity, is

    G(s) = 1 / (sqrt(s) sinh(pi sqrt(s))),

with a simple pole at s = 0 and at every negative square s = -k^2.  The
function is even in sqrt(s), hence meromorphic in s, and no branch cut is
needed.  This module evaluates G and its local counterpart
cosh(pi sqrt(s)) / (sqrt(s) sinh(pi sqrt(s))) in overflow-safe form,
locates the imaginary-axis crossings of the Nyquist plot, and carries out
the Popov style optimization that recovers the critical feedback gain

    beta0 = -1 / G(i omega0)

from the other side.  The two numbers produced here, omega0 and beta0, are
the quantities every other module cross-checks against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NotACrossingError, ToleranceError
from .kernels import DEFAULT_POLICY, INV_PI, TWO_OVER_PI, SeriesPolicy

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# Transfer functions.
# ---------------------------------------------------------------------------


def _pole_guard(s: complex):
    """Reject the poles s = 0 and s = -k^2 before they turn into huge values.

    Rounding keeps exp(-2 pi sqrt(s)) from hitting 1 exactly at the
    negative squares, so proximity on the negative real axis is checked
    explicitly instead of waiting for a zero denominator.
    """
    if s == 0:
        raise DomainError("transfer function has a pole at s = 0")
    if s.imag == 0.0 and s.real < 0.0:
        k = round(math.sqrt(-s.real))
        if k >= 1 and abs(s.real + k * k) <= 1e-12 * max(1.0, -s.real):
            raise DomainError(f"transfer function pole at s = -{k * k}")


def transfer_nloc(s) -> complex:
    """Nonlocal loop transfer function 1 / (sqrt(s) sinh(pi sqrt(s))).

    Evaluated as 2 exp(-pi w) / (w (1 - exp(-2 pi w))) with w the
    principal square root, which never overflows since Re w >= 0.  Poles
    at s = 0 and s = -k^2 raise a domain error.
    """
    s = complex(s)
    _pole_guard(s)
    w = np.sqrt(complex(s))
    ew = np.exp(-math.pi * w)
    den = w * (1.0 - ew * ew)
    if den == 0:
        raise DomainError(f"transfer function pole at s = {s}")
    return complex(2.0 * ew / den)


def transfer_loc(s) -> complex:
    """Local variant cosh(pi sqrt(s)) / (sqrt(s) sinh(pi sqrt(s)))."""
    s = complex(s)
    _pole_guard(s)
    w = np.sqrt(complex(s))
    ew = np.exp(-math.pi * w)
    den = w * (1.0 - ew * ew)
    if den == 0:
        raise DomainError(f"transfer function pole at s = {s}")
    return complex((1.0 + ew * ew) / den)


def _transfer_values(svals: np.ndarray, which: str) -> np.ndarray:
    """Vectorized transfer evaluation; caller guarantees no poles."""
    w = np.sqrt(svals.astype(np.complex128))
    ew = np.exp(-math.pi * w)
    den = w * (1.0 - ew * ew)
    if which == "nloc":
        return 2.0 * ew / den
    if which == "loc":
        return (1.0 + ew * ew) / den
    raise DomainError(f"unknown transfer kind {which!r}")


def popov_closed(omegas: np.ndarray) -> tuple:
    """Popov coordinates (A, B) = (-Re G(i w), w Im G(i w)) on an omega grid.

    A equals the real part of the Fourier transform of the shifted kernel
    and B the real part of the transform of its derivative; here both come
    from the closed transfer form, with the exact limits A(0) = pi/6 and
    B(0) = -1/pi filled in.
    """
    om = np.asarray(omegas, dtype=np.float64)
    if om.ndim != 1:
        raise DomainError("omega grid must be one dimensional")
    if np.any(om < 0.0) or not np.all(np.isfinite(om)):
        raise DomainError("omega grid must be finite and nonnegative")
    a_vals = np.empty_like(om)
    b_vals = np.empty_like(om)
    zero = om == 0.0
    if np.any(~zero):
        g = _transfer_values(1j * om[~zero], "nloc")
        a_vals[~zero] = -g.real
        b_vals[~zero] = om[~zero] * g.imag
    a_vals[zero] = math.pi / 6.0
    b_vals[zero] = -INV_PI
    return a_vals, b_vals


def _popov_s(omega: float, q: float) -> float:
    """Scalar A(omega) + q B(omega) with the omega = 0 limit built in."""
    if omega == 0.0:
        return math.pi / 6.0 - q * INV_PI
    g = transfer_nloc(1j * omega)
    return -g.real + q * omega * g.imag


# ---------------------------------------------------------------------------
# Popov coordinates as independent series, for cross-validation against the
# closed transfer form.
# ---------------------------------------------------------------------------


def popov_a(omega: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """A(omega) = (2/pi) sum_k (-1)^(k+1) k^2 / (k^4 + omega^2)."""
    omega = float(omega)
    if not math.isfinite(omega):
        raise DomainError("popov_a requires a finite real frequency")
    tol = policy.tail_tol
    k_stop = max(4, math.ceil(math.sqrt(TWO_OVER_PI / tol)),
                 math.ceil(math.sqrt(abs(omega))) + 2)
    if k_stop > policy.max_terms:
        raise ToleranceError("popov_a series exceeded max_terms")
    ks = np.arange(1, k_stop + 1, dtype=np.float64)
    signs = np.where(ks.astype(np.int64) % 2 == 1, 1.0, -1.0)
    k2 = ks * ks
    return TWO_OVER_PI * float(np.sum(signs * k2 / (k2 * k2 + omega * omega)))


def popov_b(omega: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """B(omega) = -1/pi + (2/pi) sum_k (-1)^(k+1) omega^2 / (k^4 + omega^2).

    The terms decrease in k for every omega, so the alternating tail is
    bounded by the next term (2/pi) omega^2 / K^4.
    """
    omega = float(omega)
    if not math.isfinite(omega):
        raise DomainError("popov_b requires a finite real frequency")
    if omega == 0.0:
        return -INV_PI
    tol = policy.tail_tol
    k_stop = max(4, math.ceil((TWO_OVER_PI * omega * omega / tol) ** 0.25))
    if k_stop > policy.max_terms:
        raise ToleranceError("popov_b series exceeded max_terms")
    ks = np.arange(1, k_stop + 1, dtype=np.float64)
    signs = np.where(ks.astype(np.int64) % 2 == 1, 1.0, -1.0)
    k4 = (ks * ks) ** 2
    w2 = omega * omega
    return -INV_PI + TWO_OVER_PI * w2 * float(np.sum(signs / (k4 + w2)))


# ---------------------------------------------------------------------------
# Imaginary-axis crossings.
# ---------------------------------------------------------------------------


def crossing_equation(omega: float) -> float:
    """Normalized crossing function tanh(pi p) cos(pi p) + sin(pi p), p = sqrt(omega/2).

    Its positive zeros are the frequencies where G(i omega) returns to the
    real axis.  The raw form sinh cos + cosh sin has the same zeros but
    grows like exp(pi p); dividing by cosh keeps residuals order one.
    """
    omega = float(omega)
    if omega < 0.0:
        raise DomainError("crossing_equation requires omega >= 0")
    p = math.sqrt(omega / 2.0)
    return math.tanh(math.pi * p) * math.cos(math.pi * p) + math.sin(math.pi * p)


def nycond_sum(omega: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Series sum_k (-1)^(k-1) / (1 + k^4/omega^2), equal to 1/2 at crossings."""
    omega = float(omega)
    if omega == 0.0 or not math.isfinite(omega):
        raise DomainError("nycond_sum requires a finite nonzero frequency")
    tol = policy.tail_tol
    w2 = omega * omega
    k_stop = max(4, math.ceil((w2 / tol) ** 0.25) + 2)
    if k_stop > policy.max_terms:
        raise ToleranceError("nycond_sum exceeded max_terms")
    ks = np.arange(1, k_stop + 1, dtype=np.float64)
    signs = np.where(ks.astype(np.int64) % 2 == 1, 1.0, -1.0)
    return float(np.sum(signs * w2 / (w2 + (ks * ks) ** 2)))


@dataclass(frozen=True)
class CriticalPair:
    """First crossing frequency with its critical gain and equation residual."""

    omega0: float
    beta0: float
    residual: float


def crossing_omega0(bracket: tuple = (0.5, 2.0), tol: float = 1e-12,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> CriticalPair:
    """Locate the first Nyquist crossing and the critical gain it encodes.

    Scans the bracket for a sign change of the crossing equation, polishes
    the root with Brent's method, and then insists the located frequency
    really is a crossing: the imaginary part of G must vanish and the
    alternating crossing series must equal 1/2 to 1e-8.

    Returns the pair (omega0, beta0) with beta0 = -1 / G(i omega0).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < lo < hi):
        raise DomainError(f"crossing bracket must satisfy 0 < lo < hi, got {bracket}")
    if not (tol > 0.0):
        raise DomainError("tol must be positive")
    n_scan = max(8, int(math.ceil((hi - lo) / 0.01)) + 1)
    grid = np.linspace(lo, hi, n_scan)
    vals = np.array([crossing_equation(w) for w in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if idx.size == 0:
        raise DomainError(f"no crossing of the real axis inside bracket {bracket}")
    a, b = float(grid[idx[0]]), float(grid[idx[0] + 1])
    omega0 = float(brentq(crossing_equation, a, b, xtol=tol, rtol=8.882e-16))
    g = transfer_nloc(1j * omega0)
    if abs(g.imag) > 1e-9 * (1.0 + abs(g)):
        raise ToleranceError(
            f"imaginary part {g.imag} of G at omega = {omega0} did not vanish")
    s_val = nycond_sum(omega0, policy)
    if abs(s_val - 0.5) > 1e-8:
        raise ToleranceError(
            f"crossing series at omega0 is {s_val}, expected 1/2 within 1e-8")
    beta0 = -1.0 / g.real
    return CriticalPair(omega0=omega0, beta0=beta0,
                        residual=abs(crossing_equation(omega0)))


def real_axis_crossings(count: int = 3, omega_start: float = 0.05,
                        scan_step: float = 0.01, tol: float = 1e-12) -> np.ndarray:
    """First `count` positive frequencies where G(i omega) is real.

    The n-th crossing sits near omega = 2 ((4n - 1) pi / 4)^2 / pi^2; a
    fixed-step scan with Brent polishing is robust and cheap for the small
    counts used here.
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    roots = []
    w_prev = omega_start
    f_prev = crossing_equation(w_prev)
    w = w_prev
    cap = 10.0 * (4.0 * count) ** 2
    while len(roots) < count:
        w = w + scan_step
        if w > cap:
            raise ToleranceError(f"crossing scan exceeded omega = {cap}")
        f = crossing_equation(w)
        if f_prev == 0.0:
            roots.append(w_prev)
        elif f_prev * f < 0.0:
            roots.append(float(brentq(crossing_equation, w_prev, w,
                                      xtol=tol, rtol=8.882e-16)))
        w_prev, f_prev = w, f
    return np.array(roots[:count])


def crossing_gain(omega: float, tol: float = 1e-8) -> float:
    """Gain -1 / Re G(i omega) read off at a crossing frequency.

    The frequency must actually be a crossing: when the imaginary part of
    G has not vanished the read-off is meaningless and a NotACrossingError
    is raised.
    """
    g = transfer_nloc(1j * float(omega))
    if abs(g.imag) > tol * (1.0 + abs(g)):
        raise NotACrossingError(
            f"omega = {omega} is not a real-axis crossing: Im G = {g.imag:.3e}")
    return -1.0 / g.real


# ---------------------------------------------------------------------------
# Popov optimization.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaGrid:
    """Logarithmic frequency grid with an exact omega = 0 sample prepended."""

    omega_min: float = 1e-3
    omega_max: float = 1e4
    count: int = 2000
    include_zero: bool = True

    def __post_init__(self):
        if not (0.0 < self.omega_min < self.omega_max):
            raise DomainError("OmegaGrid requires 0 < omega_min < omega_max")
        if self.count < 2:
            raise DomainError("OmegaGrid requires count >= 2")

    def values(self) -> np.ndarray:
        body = np.logspace(math.log10(self.omega_min),
                           math.log10(self.omega_max), self.count)
        if self.include_zero:
            return np.concatenate(([0.0], body))
        return body


DEFAULT_GRID = OmegaGrid()


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of one Popov test at gain beta with multiplier q."""

    beta: float
    q_witness: float
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class PopovOptimum:
    """Result of maximizing the certified gain over the multiplier q."""

    q_star: float
    beta_star: float
    beta_crossing: float | None = None


def _golden_max(f, lo: float, hi: float, tol: float = 1e-11,
                max_iter: int = 300) -> tuple:
    """Golden-section maximum of f on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol * (1.0 + abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def _sup_popov(q: float, omegas: np.ndarray, a_vals: np.ndarray,
               b_vals: np.ndarray) -> float:
    """sup over omega of A + q B, grid maximum refined by golden section."""
    svals = a_vals + q * b_vals
    i = int(np.argmax(svals))
    lo = omegas[max(i - 1, 0)]
    hi = omegas[min(i + 1, omegas.size - 1)]
    best = float(svals[i])
    if hi > lo:
        _, refined = _golden_max(lambda w: _popov_s(w, q), lo, hi)
        best = max(best, refined)
    return best


def m_of_q(q: float, grid: OmegaGrid = DEFAULT_GRID, _table: tuple | None = None) -> float:
    """Largest gain certified by the Popov condition with multiplier q.

    Returns 1 / sup_omega (A + q B).  If the supremum were nonpositive the
    condition would hold for every gain and the result is math.inf; for
    this kernel the supremum is always positive because A + q B equals
    1/beta0 > 0 at the first crossing frequency for every q.
    """
    q = float(q)
    if q < 0.0 or not math.isfinite(q):
        raise DomainError("multiplier q must be a finite nonnegative real")
    if _table is None:
        omegas = grid.values()
        a_vals, b_vals = popov_closed(omegas)
    else:
        omegas, a_vals, b_vals = _table
    sup = _sup_popov(q, omegas, a_vals, b_vals)
    if sup <= 0.0:
        return math.inf
    return 1.0 / sup


def beta_sup(q_bracket: tuple = (1e-3, 1e3), tol: float = 1e-6,
             grid: OmegaGrid = DEFAULT_GRID, verify: bool = True,
             combined_tol: float = 1e-3) -> PopovOptimum:
    """Maximize m_of_q over a logarithmic bracket of multipliers.

    With verify=True (the default) the optimum is checked against the
    crossing route: the supremum of certified gains can approach but never
    pass the critical gain, and the two must agree within combined_tol.
    """
    lo, hi = float(q_bracket[0]), float(q_bracket[1])
    if not (0.0 < lo < hi):
        raise DomainError("q bracket must satisfy 0 < lo < hi")
    omegas = grid.values()
    a_vals, b_vals = popov_closed(omegas)
    table = (omegas, a_vals, b_vals)

    def m_log(lq):
        return m_of_q(10.0 ** lq, grid, _table=table)

    lqs = np.linspace(math.log10(lo), math.log10(hi), 121)
    ms = np.array([m_log(lq) for lq in lqs])
    j = int(np.argmax(ms))
    lq_lo = lqs[max(j - 1, 0)]
    lq_hi = lqs[min(j + 1, lqs.size - 1)]
    lq_star, m_star = _golden_max(m_log, lq_lo, lq_hi, tol=min(tol, 1e-9))
    if ms[j] > m_star:
        lq_star, m_star = lqs[j], float(ms[j])
    q_star = 10.0 ** lq_star
    beta_crossing = None
    if verify:
        pair = crossing_omega0()
        beta_crossing = pair.beta0
        if m_star > beta_crossing + combined_tol:
            raise ToleranceError(
                f"certified gain {m_star} exceeds the crossing gain {beta_crossing}")
        if abs(m_star - beta_crossing) > combined_tol:
            raise ToleranceError(
                f"optimized gain {m_star} and crossing gain {beta_crossing} "
                f"differ by more than {combined_tol}")
    return PopovOptimum(q_star=q_star, beta_star=m_star, beta_crossing=beta_crossing)


def popov_check(beta: float, q: float, grid: OmegaGrid = DEFAULT_GRID) -> StabilityReport:
    """Test the frequency condition A + q B < 1/beta on the grid.

    margin is the worst-case slack inf_omega (1/beta - A - q B) including
    a golden-section refinement around the grid argmax, so satisfied means
    the condition held everywhere sampled, not just on grid nodes.
    """
    beta = float(beta)
    q = float(q)
    if beta <= 0.0 or not math.isfinite(beta):
        raise DomainError("popov_check requires a positive finite gain")
    if q < 0.0 or not math.isfinite(q):
        raise DomainError("popov_check requires a finite nonnegative multiplier")
    omegas = grid.values()
    a_vals, b_vals = popov_closed(omegas)
    sup = _sup_popov(q, omegas, a_vals, b_vals)
    margin = 1.0 / beta - sup
    return StabilityReport(beta=beta, q_witness=q, satisfied=margin > 0.0,
                           margin=margin)


# ---------------------------------------------------------------------------
# Curves for plotting and export.
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class FrequencyCurve:
    """Sampled frequency response curve.

    omegas is strictly increasing; points holds the complex samples.  For
    Nyquist curves with a pole detour the detour samples are stored
    separately with their angles phi in the open interval (-pi/2, pi/2).
    """

    omegas: np.ndarray
    points: np.ndarray
    detour_radius: float
    kind: str
    detour_phis: np.ndarray | None = None
    detour_points: np.ndarray | None = None

    def __post_init__(self):
        self.omegas = np.asarray(self.omegas, dtype=np.float64)
        self.points = np.asarray(self.points, dtype=np.complex128)
        if self.omegas.ndim != 1 or self.points.shape != self.omegas.shape:
            raise DomainError("curve arrays must be one dimensional and congruent")
        if np.any(np.diff(self.omegas) <= 0.0):
            raise DomainError("curve frequencies must be strictly increasing")


def nyquist_curve(omega_min: float = 0.2, omega_max: float = 50.0, n: int = 400,
                  detour_radius: float = 0.2, which: str = "nloc",
                  n_detour: int = 101) -> FrequencyCurve:
    """Nyquist contour image: both imaginary half-axes plus the pole detour.

    The axis part samples G(i omega) on +-logspace(omega_min, omega_max);
    the detour maps s = r exp(i phi) with phi strictly inside
    (-pi/2, pi/2), skirting the pole at the origin through the right half
    plane.
    """
    if which not in ("nloc", "loc"):
        raise DomainError(f"which must be 'nloc' or 'loc', got {which!r}")
    if not (0.0 < omega_min < omega_max):
        raise DomainError("need 0 < omega_min < omega_max")
    if n < 2 or n_detour < 1:
        raise DomainError("need n >= 2 and n_detour >= 1")
    if detour_radius < 0.0:
        raise DomainError("detour_radius must be nonnegative")
    pos = np.logspace(math.log10(omega_min), math.log10(omega_max), n)
    omegas = np.concatenate((-pos[::-1], pos))
    points = _transfer_values(1j * omegas, which)
    phis = None
    dpts = None
    if detour_radius > 0.0:
        phis = np.linspace(-math.pi / 2.0, math.pi / 2.0, n_detour + 2)[1:-1]
        dpts = _transfer_values(detour_radius * np.exp(1j * phis), which)
    return FrequencyCurve(omegas=omegas, points=points,
                          detour_radius=detour_radius, kind=f"nyquist_{which}",
                          detour_phis=phis, detour_points=dpts)


def popov_curve(omega_min: float = 1e-3, omega_max: float = 50.0,
                n: int = 400) -> FrequencyCurve:
    """Popov locus -A(omega) + i B(omega) on a positive log grid."""
    if not (0.0 < omega_min < omega_max):
        raise DomainError("need 0 < omega_min < omega_max")
    if n < 2:
        raise DomainError("need n >= 2")
    omegas = np.logspace(math.log10(omega_min), math.log10(omega_max), n)
    a_vals, b_vals = popov_closed(omegas)
    points = -a_vals + 1j * b_vals
    return FrequencyCurve(omegas=omegas, points=points, detour_radius=0.0,
                          kind="popov")


# ---------------------------------------------------------------------------
# Structural symmetry of the characteristic function.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalCheck:
    lhs: complex
    rhs: complex


def diagonal_symmetry_check(omega: float, tol: float = 1e-12) -> DiagonalCheck:
    """Verify d sin(pi d) = -conj(d sinh(pi d)) at d = sqrt(i omega).

    The principal root of i omega lies on the diagonal of the first
    quadrant, where sin and sinh are reflections of each other; this is
    the structural reason axis crossings of the characteristic function
    pair up.  Raises if the identity fails beyond tol.
    """
    omega = float(omega)
    if omega <= 0.0 or not math.isfinite(omega):
        raise DomainError("diagonal_symmetry_check requires omega > 0")
    d = np.sqrt(complex(1j * omega))
    lhs = complex(d * np.sin(math.pi * d))
    rhs = complex(d * np.sinh(math.pi * d))
    if abs(lhs + rhs.conjugate()) > tol * (1.0 + abs(rhs)):
        raise ToleranceError(
            f"diagonal symmetry violated at omega = {omega}: {lhs} vs {rhs}")
    return DiagonalCheck(lhs=lhs, rhs=rhs)
