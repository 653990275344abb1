"""Trace equation solver and energy ledger tests."""

import math

import numpy as np
import pytest

import frozen
from thermotrace import (
    DomainError,
    G_beta,
    InitialData,
    VolterraProblem,
    decay_diagnostic,
    energy_ledger,
    g_beta,
    mean_balance,
    solve_volterra,
    tail_sign_changes,
)

COS1 = InitialData.cosine(1)
Q_STAR = 1.218


def _run(beta, horizon, dt=0.01, u0=COS1):
    return solve_volterra(VolterraProblem(beta=beta, u0=u0, horizon=horizon,
                                          dt=dt))


# ---------------------------------------------------------------------------
# Feedback nonlinearity.
# ---------------------------------------------------------------------------


def test_feedback_satisfies_sector_condition():
    beta = frozen.BETA0
    for w in (-10.0, -1.0, -0.1, 0.1, 1.0, 10.0):
        g = g_beta(beta, w)
        assert 0.0 <= w * g <= beta * w * w


def test_feedback_potential_closed_form():
    # log(cosh(100)) / 1 = 100 - log 2 up to an exponentially small term.
    assert G_beta(1.0, 100.0) == pytest.approx(100.0 - math.log(2.0), rel=1e-15)
    assert G_beta(2.0, 0.0) == 0.0
    assert G_beta(0.0, 3.0) == 0.0
    assert G_beta(3.0, -1.5) == G_beta(3.0, 1.5)


def test_feedback_potential_matches_quadrature():
    from scipy.integrate import quad

    beta, z = 2.5, 0.8
    ref, _ = quad(lambda u: math.tanh(beta * u), 0.0, z, epsabs=1e-13)
    assert G_beta(beta, z) == pytest.approx(ref, abs=1e-12)


def test_negative_gain_rejected():
    with pytest.raises(DomainError):
        g_beta(-1.0, 0.5)
    with pytest.raises(DomainError):
        G_beta(-2.0, 0.5)


# ---------------------------------------------------------------------------
# Solver behavior.
# ---------------------------------------------------------------------------


def test_problem_validation():
    with pytest.raises(DomainError):
        VolterraProblem(beta=0.0, u0=COS1, horizon=1.0, dt=0.01)
    with pytest.raises(DomainError):
        VolterraProblem(beta=1.0, u0=COS1, horizon=1.0, dt=0.0)
    with pytest.raises(DomainError):
        VolterraProblem(beta=1.0, u0=COS1, horizon=0.001, dt=0.01)


def test_initial_value_matches_free_trace():
    traj = _run(1.0, 1.0)
    # u0 = cos x evaluated at x = pi.
    assert traj.y[0] == -1.0
    assert traj.g_values[0] == math.tanh(-1.0)
    assert traj.dt == pytest.approx(0.01, rel=1e-12)


def test_subcritical_gain_decays():
    traj = _run(1.0, 40.0, dt=0.005)
    assert abs(traj.y[-1]) <= 1e-3
    diag = decay_diagnostic(traj)
    assert diag.decayed
    assert diag.tail_sup < 1e-3
    assert diag.w1_final > 0.0


def test_supercritical_gain_oscillates():
    traj = _run(7.0, 120.0, dt=0.02)
    diag = decay_diagnostic(traj)
    assert not diag.decayed
    assert tail_sign_changes(traj) >= 5
    # Tail oscillation has a definite amplitude, not numerical noise.
    assert diag.tail_sup > 1e-2


def test_trajectory_stays_bounded():
    for beta in (0.5, 3.0, 7.0):
        traj = _run(beta, 60.0, dt=0.02)
        assert float(np.max(np.abs(traj.y))) < 2.5


def test_grid_refinement_converges():
    coarse = _run(3.0, 10.0, dt=0.02)
    fine = _run(3.0, 10.0, dt=0.005)
    assert coarse.y[-1] == pytest.approx(fine.y[-1], abs=1e-4)


# ---------------------------------------------------------------------------
# Energy ledger.
# ---------------------------------------------------------------------------


def test_ledger_zero_trajectory_is_identically_zero():
    prob = VolterraProblem(beta=2.0, u0=InitialData(), horizon=5.0, dt=0.01)
    led = energy_ledger(solve_volterra(prob), 1.5)
    for arr in (led.W1, led.W2, led.W3, led.V, led.R, led.residual):
        assert np.all(arr == 0.0)


def test_ledger_shares_nonnegative_and_balanced():
    traj = _run(4.0, 40.0, dt=0.005)
    led = energy_ledger(traj, Q_STAR)
    assert float(np.min(led.W1)) >= -1e-8
    assert float(np.min(led.W2)) >= -1e-8
    assert float(np.min(led.W3)) >= -1e-8
    cap = 1e-3 * (1.0 + float(np.max(led.total)))
    assert float(np.max(np.abs(led.residual))) <= cap


def test_ledger_remainder_nonpositive_when_popov_passes():
    from thermotrace import popov_check

    for beta in (1.0, 3.0, 5.0):
        assert popov_check(beta, Q_STAR).satisfied
        led = energy_ledger(_run(beta, 60.0), Q_STAR)
        assert float(np.max(led.R)) <= 1e-6


def test_ledger_residual_shrinks_quadratically():
    res = []
    for dt in (0.02, 0.01, 0.005):
        led = energy_ledger(_run(3.0, 40.0, dt=dt), 1.0)
        res.append(float(np.max(np.abs(led.residual))))
    for coarse, fine in zip(res, res[1:]):
        assert 3.4 <= coarse / fine <= 4.6


def test_ledger_fft_path_matches_direct():
    traj = _run(2.0, 30.0)
    direct = energy_ledger(traj, 1.0, use_fft=False)
    fast = energy_ledger(traj, 1.0, use_fft=True)
    assert np.allclose(direct.R, fast.R, atol=1e-12)
    assert np.allclose(direct.residual, fast.residual, atol=1e-12)


def test_ledger_w1_is_nondecreasing():
    led = energy_ledger(_run(3.0, 40.0), 0.0)
    assert np.all(np.diff(led.W1) >= -1e-15)


def test_ledger_multiplier_validation():
    traj = _run(1.0, 2.0)
    with pytest.raises(DomainError):
        energy_ledger(traj, -0.1)


# ---------------------------------------------------------------------------
# Mean balance: the thermostat drains exactly the initial mean.
# ---------------------------------------------------------------------------


def test_mean_balance_on_settled_run():
    prob = VolterraProblem(beta=2.0, u0=InitialData(mean=0.8), horizon=60.0,
                           dt=0.01)
    traj = solve_volterra(prob)
    mean0, charge = mean_balance(traj)
    assert mean0 == 0.8
    assert charge == pytest.approx(mean0, abs=1e-5)


def test_mean_balance_with_negative_mean():
    prob = VolterraProblem(beta=1.5, u0=InitialData(mean=-0.4), horizon=60.0,
                           dt=0.01)
    mean0, charge = mean_balance(solve_volterra(prob))
    assert charge == pytest.approx(-0.4, abs=1e-5)
    assert mean0 == -0.4


def test_decay_diagnostic_validation():
    traj = _run(1.0, 2.0)
    with pytest.raises(DomainError):
        decay_diagnostic(traj, tail_fraction=0.0)
    with pytest.raises(DomainError):
        decay_diagnostic(traj, threshold=-1.0)
