"""Spectral route: characteristic roots and the Lyapunov threshold.

Linearizing the thermostat loop at gain beta gives the characteristic
equation

    Phi(lambda) = beta,     Phi(lambda) = z sin(pi z),  z = sqrt(-lambda).

Phi is even in z, hence an entire function of lambda (no branch cut), with
Phi(lambda) = -pi lambda + O(lambda^2) near the origin.  At beta = 0 its
roots are the Neumann eigenvalues -k^2; as beta grows the leading pair
migrates toward the imaginary axis and crosses it exactly at the Nyquist
frequency, Phi(i omega0) = beta0.  Roots are located by the argument
principle on rectangles, refined by bisection of the boxes and polished
with Newton's method.

The second half of the module is the Lyapunov side of the small-gain
story: the comparison map r_alpha whose smallest positive fixed point
exists precisely when alpha exceeds 4/pi, reproducing the threshold the
contraction argument certifies.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .errors import DomainError, NotACrossingError, ToleranceError
from .frequency import transfer_nloc


def char_function(lam) -> complex:
    """Entire characteristic function Phi(lambda) = z sin(pi z), z = sqrt(-lambda)."""
    z = cmath.sqrt(-complex(lam))
    return z * cmath.sin(math.pi * z)


def char_function_prime(lam) -> complex:
    """Derivative of Phi in lambda.

    With z = sqrt(-lambda), d Phi/d lambda = -(sin(pi z)/(2 z)
    + (pi/2) cos(pi z)); the removable point z = 0 uses the power series
    Phi = -pi lambda - (pi^3/6) lambda^2 - ...
    """
    lam = complex(lam)
    if abs(lam) < 1e-10:
        return -math.pi - (math.pi ** 3 / 3.0) * lam
    z = cmath.sqrt(-lam)
    return -(cmath.sin(math.pi * z) / (2.0 * z)
             + (math.pi / 2.0) * cmath.cos(math.pi * z))


@dataclass(frozen=True)
class CharacteristicRoot:
    """One eigenvalue of the linearized loop with its equation residual."""

    lam: complex
    beta: float
    residual: float


class _Indeterminate(Exception):
    """Internal: the contour passed too close to a root; retry with a nudge."""


def _winding_number(f, fprime, rect, scale) -> int:
    """Roots of f inside the rectangle (re_lo, re_hi, im_lo, im_hi).

    Integrates the logarithmic derivative f'/f around the boundary with
    adaptive quadrature.  Unlike phase tracking of f itself, this has no
    modulo 2 pi ambiguity: a sampling scheme that watches arg f can lose a
    full turn whenever the argument swings by almost exactly 2 pi between
    samples, which actually happens on large boxes here.  The count is the
    imaginary part of the integral over 2 pi, and must land on an integer.
    """
    re_lo, re_hi, im_lo, im_hi = rect
    corners = [complex(re_lo, im_lo), complex(re_hi, im_lo),
               complex(re_hi, im_hi), complex(re_lo, im_hi)]
    floor = 1e-13 * scale
    total = 0.0
    for i in range(4):
        z_a = corners[i]
        seg = corners[(i + 1) % 4] - z_a

        def integrand(t):
            z = z_a + seg * t
            fz = f(z)
            if abs(fz) < floor:
                raise _Indeterminate
            return (fprime(z) / fz * seg).imag

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            part, err = quad(integrand, 0.0, 1.0, limit=200,
                             epsabs=1e-9, epsrel=1e-9)
        if err > 1e-2:
            raise _Indeterminate
        total += part
    winding = total / (2.0 * math.pi)
    nearest = round(winding)
    if abs(winding - nearest) > 0.05:
        raise _Indeterminate
    return int(nearest)


def _newton_polish(f, fprime, seed: complex, tol: float, max_iter: int = 80):
    z = complex(seed)
    for _ in range(max_iter):
        fv = f(z)
        if abs(fv) <= tol:
            return z
        dv = fprime(z)
        if abs(dv) < 1e-300:
            z += 1e-8 * (1.0 + abs(z))
            continue
        z = z - fv / dv
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
    if abs(f(z)) <= tol:
        return z
    return None


def _collect_roots(f, fprime, rect, count, tol, scale, found, depth=0):
    """Subdivide `rect` until each piece holds one root, then polish it."""
    if count == 0:
        return
    re_lo, re_hi, im_lo, im_hi = rect
    width, height = re_hi - re_lo, im_hi - im_lo
    if count == 1:
        center = complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
        seeds = (center,
                 center + complex(0.23 * width, 0.17 * height),
                 center - complex(0.31 * width, 0.11 * height))
        slack = 1e-7 * (1.0 + scale)
        for seed in seeds:
            root = _newton_polish(f, fprime, seed, tol)
            if root is not None \
                    and re_lo - slack <= root.real <= re_hi + slack \
                    and im_lo - slack <= root.imag <= im_hi + slack:
                found.append(root)
                return
        # Newton escaped the box; shrink it further before trying again.
    if depth > 60 or (width < 1e-8 and height < 1e-8):
        raise ToleranceError(
            f"could not isolate {count} root(s) in box {rect}")
    # Cuts are never exactly centered: a symmetric region would otherwise
    # be split along the real axis, and a real root sitting on that line
    # is half-counted by both sides (the principal value of the contour
    # integral is still an integer, so the split looks consistent).
    for offset in (0.0137, -0.0231, 0.0533, -0.0779):
        if width >= height:
            mid = re_lo + (0.5 + offset) * width
            left = (re_lo, mid, im_lo, im_hi)
            right = (mid, re_hi, im_lo, im_hi)
        else:
            mid = im_lo + (0.5 + offset) * height
            left = (re_lo, re_hi, im_lo, mid)
            right = (re_lo, re_hi, mid, im_hi)
        try:
            n_left = _winding_number(f, fprime, left, scale)
            n_right = _winding_number(f, fprime, right, scale)
        except _Indeterminate:
            continue
        if n_left + n_right != count:
            continue
        _collect_roots(f, fprime, left, n_left, tol, scale, found, depth + 1)
        _collect_roots(f, fprime, right, n_right, tol, scale, found, depth + 1)
        return
    raise _Indeterminate


def _dedupe(roots, atol) -> list:
    unique = []
    for r in roots:
        if all(abs(r - u) > atol * (1.0 + abs(u)) for u in unique):
            unique.append(r)
    return unique


def linearized_eigenvalues(beta: float, region: tuple = (-10.0, 50.0, -50.0, 50.0),
                           tol: float = 1e-10) -> list:
    """All characteristic roots Phi(lambda) = beta inside a rectangle.

    region is (re_min, re_max, im_min, im_max).  The winding number of
    Phi - beta over the rectangle fixes the root count; boxes are split
    (with slightly off-center cuts so roots do not land on a cut) until
    every root is isolated and Newton-polished.  If the outer boundary
    itself passes through a root the rectangle is expanded by a tiny pad
    and the count retried.  Complex roots come in conjugate pairs; the
    closure is enforced explicitly at the end.
    """
    beta = float(beta)
    if beta == 0.0 or not math.isfinite(beta):
        raise DomainError("linearized_eigenvalues requires a finite nonzero gain")
    re_lo, re_hi, im_lo, im_hi = (float(v) for v in region)
    if not (re_lo < re_hi and im_lo < im_hi):
        raise DomainError(f"degenerate region {region}")

    def f(lam):
        return char_function(lam) - beta

    scale = 1.0 + abs(beta)
    span = max(re_hi - re_lo, im_hi - im_lo)
    roots = None
    total = 0
    for attempt in range(6):
        pad = attempt * 3.7e-6 * span
        rect = (re_lo - pad, re_hi + pad, im_lo - pad, im_hi + pad)
        try:
            total = _winding_number(f, char_function_prime, rect, scale)
            found = []
            _collect_roots(f, char_function_prime, rect, total, tol, scale, found)
            roots = found
            break
        except _Indeterminate:
            continue
    if roots is None:
        raise ToleranceError(
            f"could not certify a root count for beta = {beta} in {region}")
    roots = _dedupe(roots, 1e-7)
    # conjugate closure: Phi has real coefficients in lambda
    for r in list(roots):
        if abs(r.imag) <= 1e-9:
            continue
        c = r.conjugate()
        if im_lo <= c.imag <= im_hi and not any(
                abs(c - u) <= 1e-7 * (1.0 + abs(u)) for u in roots):
            polished = _newton_polish(f, char_function_prime, c, tol)
            if polished is not None:
                roots.append(polished)
    roots = _dedupe(roots, 1e-7)
    if len(roots) != total:
        raise ToleranceError(
            f"isolated {len(roots)} roots but the boundary winding says {total}; "
            f"a multiple root or near-boundary root needs a different region")
    roots.sort(key=lambda z: (z.real, z.imag))
    return [CharacteristicRoot(lam=r, beta=beta, residual=abs(f(r)))
            for r in roots]


def spectral_beta_map(omega: float, tol: float = 1e-8) -> float:
    """Gain that places a characteristic root exactly at i omega.

    Only the crossing frequencies qualify: Phi(i omega) is real exactly
    where Im G(i omega) = 0.  Away from a crossing the requested map does
    not exist and a NotACrossingError reports the measured imaginary part.
    """
    omega = float(omega)
    if omega == 0.0 or not math.isfinite(omega):
        raise DomainError("spectral_beta_map requires a finite nonzero frequency")
    g = transfer_nloc(1j * omega)
    if abs(g.imag) > tol * (1.0 + abs(g)):
        raise NotACrossingError(
            f"omega = {omega} is not an axis crossing: Im G = {g.imag:.3e}")
    value = char_function(1j * omega)
    return float(value.real)


# ---------------------------------------------------------------------------
# Lyapunov comparison map.
# ---------------------------------------------------------------------------


def r_alpha(alpha: float, mu):
    """Comparison map r(mu) = (alpha^2/4 - mu^2) sinh(pi mu) / alpha.

    Odd in mu, vanishing at mu = alpha/2, with exact slope pi alpha / 4
    at the origin.  Its smallest positive fixed point, when it exists,
    certifies a Lyapunov function for the gain alpha.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError("r_alpha requires a positive finite alpha")
    mu_arr = np.asarray(mu, dtype=np.float64)
    out = (alpha * alpha / 4.0 - mu_arr * mu_arr) * np.sinh(math.pi * mu_arr) / alpha
    return float(out) if mu_arr.ndim == 0 else out


def r_alpha_second(alpha: float, mu):
    """Second derivative of r_alpha, in the closed form
    (sinh(pi mu) (pi^2 (alpha^2 - 4 mu^2) - 8) - 16 pi mu cosh(pi mu)) / (4 alpha).
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError("r_alpha_second requires a positive finite alpha")
    mu_arr = np.asarray(mu, dtype=np.float64)
    pi = math.pi
    out = (np.sinh(pi * mu_arr) * (pi * pi * (alpha * alpha - 4.0 * mu_arr * mu_arr) - 8.0)
           - 16.0 * pi * mu_arr * np.cosh(pi * mu_arr)) / (4.0 * alpha)
    return float(out) if mu_arr.ndim == 0 else out


@dataclass(frozen=True)
class LyapunovVerdict:
    """Fixed point search result for one gain alpha."""

    alpha: float
    fixed_point: float | None
    r_prime_at_zero: float
    concave_on_interval: bool


def lyapunov_verdict(alpha: float, tol: float = 1e-12,
                     scan_points: int = 2001) -> LyapunovVerdict:
    """Search (0, alpha/2] for the smallest positive fixed point of r_alpha.

    The trivial fixed point mu = 0 is excluded by construction: the scan
    starts strictly inside the interval, and whether a nontrivial fixed
    point exists is governed by the slope r'(0) = pi alpha / 4 crossing 1.
    concave_on_interval reports the sign of r'' on [0, alpha/2], which is
    what makes the threshold sharp.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError("lyapunov_verdict requires a positive finite alpha")
    if scan_points < 16:
        raise DomainError("scan_points too small to bracket a fixed point")
    r_prime0 = math.pi * alpha / 4.0

    grid = np.linspace(0.0, alpha / 2.0, scan_points)[1:]
    phi = grid - r_alpha(alpha, grid)
    fixed_point = None
    signs = np.sign(phi)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if flips.size:
        i = int(flips[0])
        root = brentq(lambda m: m - r_alpha(alpha, m), grid[i], grid[i + 1],
                      xtol=1e-14, rtol=8.882e-16)
        fixed_point = float(root)
    elif np.any(phi <= 0.0):
        # The map touches the diagonal without a sign flip on the grid;
        # treat the first nonpositive node as a bracket endpoint.
        i = int(np.argmax(phi <= 0.0))
        lo = grid[max(i - 1, 0)]
        root = brentq(lambda m: m - r_alpha(alpha, m), lo, grid[i] + 1e-15,
                      xtol=1e-14, rtol=8.882e-16)
        fixed_point = float(root)

    check = np.linspace(0.0, alpha / 2.0, 201)
    concave = bool(np.all(r_alpha_second(alpha, check) <= tol * (1.0 + alpha)))
    if fixed_point is not None:
        resid = abs(fixed_point - r_alpha(alpha, fixed_point))
        if resid > 1e-9 * (1.0 + fixed_point):
            raise ToleranceError(
                f"fixed point candidate at alpha = {alpha} has residual {resid}")
    return LyapunovVerdict(alpha=alpha, fixed_point=fixed_point,
                           r_prime_at_zero=r_prime0, concave_on_interval=concave)


def lyapunov_threshold(lo: float = 0.5, hi: float = 2.0, iters: int = 48) -> float:
    """Bisect the smallest alpha whose comparison map has a fixed point.

    The exact answer is 4/pi, where the slope at the origin reaches 1;
    this routine recovers it from the verdicts alone, without using that
    closed form.
    """
    lo, hi = float(lo), float(hi)
    if not (0.0 < lo < hi):
        raise DomainError("need 0 < lo < hi")
    if lyapunov_verdict(lo).fixed_point is not None:
        raise DomainError(f"lower endpoint alpha = {lo} already has a fixed point")
    if lyapunov_verdict(hi).fixed_point is None:
        raise DomainError(f"upper endpoint alpha = {hi} has no fixed point")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if lyapunov_verdict(mid).fixed_point is None:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
