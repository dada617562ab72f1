"""Quasi-exact spectrum of a harmonic oscillator around a screw dislocation,
seen from a uniformly rotating frame (hbar = 1)."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .params import (
    DefectFrameParams,
    EffectiveCouplings,
    QuantumNumbers,
    b_parameter,
    effective_angular,
    validate,
)
from .heun import (
    HeunParameters,
    SeriesSolution,
    evaluate_series,
    frobenius_coefficients,
    full_wavefunction,
    heun_parameters,
    normalization_constant,
    radial_wavefunction,
    truncated_series,
)
from .spectrum import (
    FrequencyRoot,
    SpectralLine,
    TruncationPolynomial,
    closed_form_energy,
    closed_form_frequency,
    energy_from_frequency,
    exact_frequencies,
    exact_line,
    closed_form_line,
    solve_state,
    spectral_table,
    truncation_polynomial,
)
from .oracle import (
    ResidualReport,
    bisection_root,
    ode_residual_radial,
    ode_residual_transformed,
)
