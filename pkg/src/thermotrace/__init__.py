"""Stability toolkit for the heat equation with thermostat boundary feedback.

Two independent routes to the same stability range: time domain (spectral
simulation and the trace Volterra equation with its energy ledger) and
frequency domain (transfer function, Nyquist crossings, Popov multiplier
optimization), plus the characteristic-root and Lyapunov cross-checks.
"""

from .errors import (
    DomainError,
    MissingArtifactError,
    NonFiniteError,
    NotACrossingError,
    ThermotraceError,
    ToleranceError,
)
from .frequency import (
    CriticalPair,
    DiagonalCheck,
    FrequencyCurve,
    OmegaGrid,
    PopovOptimum,
    StabilityReport,
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
    real_axis_crossings,
    transfer_loc,
    transfer_nloc,
)
from .kernels import (
    DEFAULT_POLICY,
    InitialData,
    KernelSample,
    SeriesPolicy,
    forcing_f,
    forcing_f_prime,
    fourier_as,
    fourier_as_prime,
    kernel_a,
    kernel_a_grid,
    kernel_as_prime,
    kernel_as_prime_grid,
    laplace_a,
    neumann_kernel,
    shifted_kernel_as,
    shifted_kernel_as_grid,
)
from .pde import (
    H1Equivalence,
    SimConfig,
    SpectralState,
    TwoRouteComparison,
    compare_with_volterra,
    dissipation_check,
    h1_decay_equivalence,
    integrate,
    project_initial_data,
    rhs_coefficients,
    trace,
    trace_series,
)
from .report import build_report
from .spectrum import (
    CharacteristicRoot,
    LyapunovVerdict,
    char_function,
    char_function_prime,
    linearized_eigenvalues,
    lyapunov_threshold,
    lyapunov_verdict,
    r_alpha,
    r_alpha_second,
    spectral_beta_map,
)
from .volterra import (
    DecayDiagnostic,
    EnergyLedger,
    G_beta,
    VolterraProblem,
    VolterraTrajectory,
    decay_diagnostic,
    energy_ledger,
    g_beta,
    mean_balance,
    solve_volterra,
    tail_sign_changes,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
