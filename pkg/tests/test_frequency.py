"""Frequency route tests: transfer functions, crossings, Popov bounds."""

import cmath
import math

import numpy as np
import pytest

import frozen
from thermotrace import (
    DomainError,
    FrequencyCurve,
    OmegaGrid,
    ToleranceError,
    beta_sup,
    crossing_equation,
    crossing_gain,
    crossing_omega0,
    diagonal_symmetry_check,
    m_of_q,
    nycond_sum,
    nyquist_curve,
    popov_a,
    popov_b,
    popov_check,
    popov_closed,
    popov_curve,
    transfer_loc,
    transfer_nloc,
)


# ---------------------------------------------------------------------------
# Transfer function values and structure.
# ---------------------------------------------------------------------------


def test_transfer_nloc_matches_closed_form():
    # Independent evaluation through sinh: G(s) = 1 / (sqrt(s) sinh(pi sqrt(s))).
    for s in (0.5, 2.0, 1.0 + 1.0j, 0.3 - 4.0j):
        w = cmath.sqrt(s)
        ref = 1.0 / (w * cmath.sinh(math.pi * w))
        assert transfer_nloc(s) == pytest.approx(ref, rel=1e-13)


def test_transfer_loc_matches_closed_form():
    for s in (0.5, 2.0, 1.0 + 1.0j):
        w = cmath.sqrt(s)
        ref = cmath.cosh(math.pi * w) / (w * cmath.sinh(math.pi * w))
        assert transfer_loc(s) == pytest.approx(ref, rel=1e-13)


def test_transfer_on_negative_real_axis():
    # Both transfer functions continue analytically between the poles at
    # s = -k^2, where G(-z^2) = -1 / (z sin(pi z)); the principal square
    # root branch must not break this.
    s = -0.25
    z = math.sqrt(0.25)
    ref = -1.0 / (z * math.sin(math.pi * z))
    assert transfer_nloc(s).real == pytest.approx(ref, rel=1e-13)
    assert abs(transfer_nloc(s).imag) < 1e-13


def test_transfer_pole_rejection():
    for s in (0.0, -1.0, -4.0):
        with pytest.raises(DomainError):
            transfer_nloc(s)
        with pytest.raises(DomainError):
            transfer_loc(s)


def test_transfer_no_overflow_at_large_s():
    val = transfer_nloc(1e6)
    assert val == pytest.approx(0.0, abs=1e-300)
    assert math.isfinite(transfer_loc(1e6).real)


def test_diagonal_symmetry():
    for omega in (0.5, 2.0, 10.0):
        check = diagonal_symmetry_check(omega)
        assert check.lhs == pytest.approx(-check.rhs.conjugate(), rel=1e-11)


# ---------------------------------------------------------------------------
# The critical crossing.
# ---------------------------------------------------------------------------


def test_crossing_omega0_frozen():
    pair = crossing_omega0()
    assert pair.omega0 == pytest.approx(frozen.OMEGA0, abs=1e-9)
    assert pair.beta0 == pytest.approx(frozen.BETA0, abs=1e-9)
    assert abs(pair.residual) < 1e-10


def test_transfer_value_at_crossing():
    g = transfer_nloc(1j * frozen.OMEGA0)
    assert g.real == pytest.approx(frozen.G_AT_I_OMEGA0, abs=1e-12)
    assert abs(g.imag) < 1e-12


def test_nyquist_condition_at_crossing():
    assert nycond_sum(frozen.OMEGA0) == pytest.approx(0.5, abs=1e-10)


def test_crossing_equation_sign_change():
    assert crossing_equation(0.8) * crossing_equation(1.5) < 0.0


def test_later_crossings_and_alternating_gains():
    from thermotrace import real_axis_crossings

    omegas = real_axis_crossings(3)
    gains = [crossing_gain(float(w)) for w in omegas]
    for got, ref in zip(omegas, frozen.OMEGA_CROSSINGS):
        assert got == pytest.approx(ref, rel=1e-9)
    for got, ref in zip(gains, frozen.CROSSING_GAINS):
        assert got == pytest.approx(ref, rel=1e-6)
    assert gains[0] > 0.0 > gains[1] and gains[2] > 0.0
    assert abs(gains[0]) < abs(gains[1]) < abs(gains[2])


def test_crossing_gain_rejects_non_crossing():
    from thermotrace import NotACrossingError

    with pytest.raises(NotACrossingError):
        crossing_gain(1.0)


def test_bad_bracket_rejected():
    with pytest.raises(DomainError):
        crossing_omega0(bracket=(2.0, 0.5))


# ---------------------------------------------------------------------------
# Popov functions and the gain bound M(q).
# ---------------------------------------------------------------------------


def test_popov_closed_values_at_zero():
    a, b = popov_closed(np.array([0.0]))
    assert a[0] == math.pi / 6.0
    assert b[0] == -frozen.INV_PI


def test_popov_closed_matches_series():
    omegas = np.logspace(-3, math.log10(50.0), 30)
    a_closed, b_closed = popov_closed(omegas)
    for i, omega in enumerate(omegas):
        assert popov_a(float(omega)) == pytest.approx(a_closed[i], abs=1e-10)
        assert popov_b(float(omega)) == pytest.approx(b_closed[i], abs=1e-10)


def test_popov_line_value_is_gain_independent_at_crossing():
    # A + qB is pinned to 1/beta0 at the crossing frequency for every q,
    # which is the mechanism behind sup_q M(q) = beta0.
    a, b = popov_closed(np.array([frozen.OMEGA0]))
    for q in (0.0, 0.7, 1.218, 10.0):
        assert a[0] + q * b[0] == pytest.approx(1.0 / frozen.BETA0, abs=1e-12)


def test_m_at_zero_is_six_over_pi():
    assert m_of_q(0.0) == pytest.approx(frozen.SIX_OVER_PI, abs=1e-6)


def test_m_of_q_never_exceeds_beta0():
    for q in (0.0, 0.3, 1.218, 5.0, 50.0):
        assert m_of_q(q) <= frozen.BETA0 + 1e-9


def test_beta_sup_recovers_crossing_gain():
    opt = beta_sup()
    assert opt.beta_star == pytest.approx(frozen.BETA0, abs=1e-6)
    assert 0.5 < opt.q_star < 3.0
    assert opt.beta_crossing == pytest.approx(frozen.BETA0, abs=1e-9)


def test_beta_sup_verification_tolerance():
    with pytest.raises(ToleranceError):
        beta_sup(combined_tol=1e-18)


def test_popov_check_brackets_the_critical_gain():
    q_near_optimum = 1.218
    below = popov_check(frozen.BETA0 - 0.01, q_near_optimum)
    assert below.satisfied and below.margin > 0.0
    above = popov_check(frozen.BETA0 + 0.5, q_near_optimum)
    assert not above.satisfied


def test_no_multiplier_rescues_gain_six():
    for q in np.logspace(-3, 3, 13):
        assert m_of_q(float(q)) < 6.0


def test_multiplier_and_line_criteria_agree():
    # The multiplier form (M(q) >= beta) and the explicit line check must
    # give the same verdict on a fixed slate of gain and slope pairs.
    cases = [(b, q) for b in (1.0, 2.0, 4.0, 5.0, 5.9, 8.0)
             for q in (0.05, 0.5, 1.218, 4.0)]
    tested = 0
    for beta, q in cases:
        m = m_of_q(q)
        if abs(m - beta) < 1e-6:
            continue
        assert popov_check(beta, q).satisfied == (m > beta), (beta, q)
        tested += 1
    assert tested >= 20


def test_negative_multiplier_rejected():
    with pytest.raises(DomainError):
        m_of_q(-1.0)
    with pytest.raises(DomainError):
        popov_check(2.0, -0.5)
    with pytest.raises(DomainError):
        popov_check(-1.0, 0.5)


# ---------------------------------------------------------------------------
# Curves for the report artifacts.
# ---------------------------------------------------------------------------


def test_local_nyquist_stays_in_right_half_plane():
    curve = nyquist_curve(0.2, 50.0, n=400, which="loc")
    axis_points = curve.points
    assert float(np.min(axis_points.real)) > 0.0


def test_nonlocal_nyquist_crosses_at_minus_inverse_gain():
    curve = nyquist_curve(0.2, 50.0, n=2000, which="nloc")
    pts = curve.points
    omegas = curve.omegas
    upper = (omegas > 0.5) & (omegas < 2.0)
    idx = np.where(upper)[0]
    sign_flip = None
    for i in idx[:-1]:
        if pts.imag[i] == 0.0 or pts.imag[i] * pts.imag[i + 1] < 0.0:
            sign_flip = i
            break
    assert sign_flip is not None
    frac = abs(pts.imag[sign_flip]) / (abs(pts.imag[sign_flip])
                                       + abs(pts.imag[sign_flip + 1]))
    crossing_re = (1.0 - frac) * pts.real[sign_flip] + frac * pts.real[sign_flip + 1]
    assert crossing_re == pytest.approx(-1.0 / frozen.BETA0, abs=2e-4)


def test_nyquist_detour_bridges_the_axis():
    curve = nyquist_curve(0.2, 10.0, n=50, detour_radius=0.2)
    assert curve.detour_points is not None
    phis = curve.detour_phis
    assert phis[0] > -math.pi / 2 and phis[-1] < math.pi / 2
    assert np.all(np.isfinite(curve.detour_points))


def test_popov_curve_leftmost_point():
    curve = popov_curve(1e-3, 50.0, n=4000)
    pts = curve.points
    flips = np.where(pts.imag[:-1] * pts.imag[1:] < 0.0)[0]
    assert flips.size > 0
    i = flips[0]
    frac = abs(pts.imag[i]) / (abs(pts.imag[i]) + abs(pts.imag[i + 1]))
    re_cross = (1.0 - frac) * pts.real[i] + frac * pts.real[i + 1]
    assert re_cross == pytest.approx(-1.0 / frozen.BETA0, abs=2e-4)


def test_curve_validation():
    with pytest.raises(DomainError):
        nyquist_curve(5.0, 1.0)
    with pytest.raises(DomainError):
        nyquist_curve(0.2, 50.0, which="nowhere")
    with pytest.raises(DomainError):
        FrequencyCurve(omegas=np.array([1.0, 0.5]),
                       points=np.array([0j, 0j]),
                       detour_radius=0.1, kind="nyquist_nloc")


def test_omega_grid_shape():
    grid = OmegaGrid(omega_min=1e-2, omega_max=10.0, count=50)
    vals = grid.values()
    assert vals[0] == 0.0
    assert vals.size == 51
    assert np.all(np.diff(vals) > 0.0)
    with pytest.raises(DomainError):
        OmegaGrid(omega_min=0.0, omega_max=1.0)
    with pytest.raises(DomainError):
        OmegaGrid(omega_min=1e-2, omega_max=10.0, count=1)
