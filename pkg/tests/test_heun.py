import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dislocation_qho import (
    ConvergenceFailure,
    DefectFrameParams,
    DomainError,
    InternalInconsistency,
    QuantumNumbers,
    SeriesSolution,
    UnphysicalFrequency,
    evaluate_series,
    frobenius_coefficients,
    full_wavefunction,
    heun_parameters,
    normalization_constant,
    radial_wavefunction,
    truncated_series,
)
from dislocation_qho import heun
from dislocation_qho.oracle import heun_power_residuals

P01 = DefectFrameParams(beta=0.1, Omega=0.0, mass=1.0)
# positive root of the n = 1 truncation quadratic at A = 1.9, in u = m beta^2 omega
U1 = 0.13615062491476182


def test_heun_parameters_vanishing_dynamics():
    hp = heun_parameters(0.0, 0.0, 0.0, P01)
    assert (hp.alpha, hp.b, hp.gamma, hp.delta, hp.eta) == (0.0, -0.5, -0.5, 0.0, 0.375)
    assert hp.mu == 0.0 and hp.nu == 0.0


def test_heun_parameters_table_frequency():
    omega = 14.5745
    hp = heun_parameters(1.9, 6 * omega, omega, P01)
    assert hp.alpha == pytest.approx(-0.145745, rel=1e-12)
    assert hp.delta == pytest.approx(0.01 * 6 * omega / 4, rel=1e-12)
    assert hp.delta == pytest.approx(0.2186, abs=1e-4)
    assert hp.eta == pytest.approx(0.375 - 0.9025 - 0.2186175, rel=1e-12)
    assert hp.eta == pytest.approx(-0.7461, abs=1e-4)


@given(st.floats(-5, 5), st.floats(-100, 100), st.floats(-50, 50), st.floats(0.01, 0.99), st.floats(0.1, 4))
def test_heun_parameters_fixed_exponents_and_parity(A, B, omega, beta, mass):
    p = DefectFrameParams(beta=beta, mass=mass)
    hp = heun_parameters(A, B, omega, p)
    assert hp.b == -0.5 and hp.gamma == -0.5
    assert heun_parameters(-A, B, omega, p) == hp


def test_general_mu_nu_relations_catch_wiring_errors():
    # a sign slip in the (b/2)(1+gamma) term of nu shifts it by exactly 1/4
    hp = heun_parameters(1.9, 80.0, 13.0, P01)
    nu_slipped = 0.5 * hp.alpha * (1 + hp.gamma) - 0.5 * hp.b * (1 + hp.gamma) + 0.5 * hp.gamma + hp.eta + hp.delta
    assert nu_slipped - hp.nu == pytest.approx(0.25, abs=1e-14)

    # the recurrence only satisfies the ODE with the reduced nu
    s = frobenius_coefficients(1.9, 80.0, 13.0, P01, 10)
    assert np.max(heun_power_residuals(s, hp)) < 1e-14
    from dataclasses import replace

    assert np.max(heun_power_residuals(s, replace(hp, nu=nu_slipped))) > 1e-3


def test_internal_inconsistency_is_raised(monkeypatch):
    monkeypatch.setattr(heun, "_MU_NU_RTOL", -1.0)
    with pytest.raises(InternalInconsistency):
        heun.heun_parameters(1.0, 1.0, 1.0, P01)


def test_frobenius_examples():
    A = 1.9
    omega0 = -A**2 / (P01.mass * P01.beta**2)
    s = frobenius_coefficients(A, 2 * omega0, omega0, P01, 3)
    assert s.coefficients[0] == 1.0
    assert s.coefficients[1] == pytest.approx(0.0, abs=1e-12)

    s = frobenius_coefficients(0.0, 7.0, 7.0, P01, 2)
    assert s.coefficients[1] == 0.0

    omega = U1 / 0.01
    s = frobenius_coefficients(A, 6 * omega, omega, P01, 6)
    head = np.max(np.abs(s.coefficients))
    assert np.all(np.abs(s.coefficients[2:]) <= 1e-9 * head)

    with pytest.raises(ValueError):
        frobenius_coefficients(A, 1.0, 1.0, P01, 0)


def test_frobenius_first_coefficient_formula():
    p = DefectFrameParams(beta=0.37, mass=2.1)
    A, B, omega = -1.3, 4.4, 0.9
    s = frobenius_coefficients(A, B, omega, p, 1)
    assert s.coefficients[1] == pytest.approx(-0.5 * (A * A + p.beta**2 * (B - p.mass * omega)), rel=1e-15)


@settings(max_examples=60)
@given(
    st.floats(-6, 6), st.floats(-200, 200), st.floats(-40, 40),
    st.floats(0.01, 0.99), st.floats(0.1, 5),
)
def test_recurrence_satisfies_heun_ode(A, B, omega, beta, mass):
    p = DefectFrameParams(beta=beta, mass=mass)
    s = frobenius_coefficients(A, B, omega, p, 14)
    assert np.max(heun_power_residuals(s, heun_parameters(A, B, omega, p))) < 1e-10


@settings(max_examples=60)
@given(st.integers(0, 6), st.floats(-6, 6), st.floats(-40, 40), st.floats(0.01, 0.99), st.floats(0.1, 5))
def test_tail_vanishes_when_both_conditions_hold(n, A, omega, beta, mass):
    p = DefectFrameParams(beta=beta, mass=mass)
    B = 2 * mass * omega * (2 * n + 1)
    a = frobenius_coefficients(A, B, omega, p, n + 1).coefficients[: n + 1]
    # continue the same recurrence with a_{n+1} forced to zero
    coeffs = list(a) + [0.0]
    for q in range(n, n + 6):
        den = 2.0 * (2 + q) * (3 + 2 * q)
        c0 = beta**2 * (B - 2 * mass * omega * (1 + 2 * q))
        c1 = beta**2 * (B - mass * omega * (5 + 4 * q)) - 4 * (1 + q) ** 2 + A * A
        coeffs.append((c0 * coeffs[q] - c1 * coeffs[q + 1]) / den)
    assert coeffs[n + 2] == 0.0
    assert all(c == 0.0 for c in coeffs[n + 1 :])


def test_evaluate_series_basics():
    s = SeriesSolution(np.array([1.0, 0.0, 0.0]), 1.0, 0.0, 0.0, truncation_order=2)
    assert evaluate_series(s, 0.7) == 1.0
    g = frobenius_coefficients(1.3, 3.0, 2.0, P01, 40)
    assert evaluate_series(g, 0.0) == 1.0


def test_evaluate_series_n1_state_at_x_one():
    omega = 13.6150
    s = truncated_series(1, 1.9, omega, P01)
    a1 = -0.5 * (1.9**2 + 0.01 * 5 * omega)
    assert evaluate_series(s, 1.0) == pytest.approx(1 + a1, rel=1e-14)
    assert evaluate_series(s, 1.0) == pytest.approx(-1.145375, abs=1e-12)


def test_evaluate_generic_series_domain_and_convergence():
    g = frobenius_coefficients(1.3, 3.0, 2.0, P01, 60)
    with pytest.raises(DomainError):
        evaluate_series(g, 1.0)
    with pytest.raises(DomainError):
        evaluate_series(g, -0.1)
    short = frobenius_coefficients(1.3, 3.0, 2.0, P01, 3)
    with pytest.raises(ConvergenceFailure):
        evaluate_series(short, 0.9)


def test_generic_series_matches_ode_integration():
    # independent check of the non-terminating series on 0 <= x < 1
    from scipy.integrate import solve_ivp

    p = DefectFrameParams(beta=0.3, mass=1.2)
    A, B, omega = 1.1, 7.0, 2.5
    s = frobenius_coefficients(A, B, omega, p, 400)
    hp = heun_parameters(A, B, omega, p)
    x0 = 0.05
    F0 = evaluate_series(s, x0)
    dF0 = sum(q * c * x0 ** (q - 1) for q, c in enumerate(s.coefficients) if q)

    def rhs(x, y):
        F, dF = y
        return [dF, -(hp.alpha + (hp.b + 1) / x + (hp.gamma + 1) / (x - 1)) * dF - (hp.mu / x + hp.nu / (x - 1)) * F]

    sol = solve_ivp(rhs, (x0, 0.6), [F0, dF0], rtol=1e-11, atol=1e-13)
    assert sol.y[0, -1] == pytest.approx(evaluate_series(s, 0.6), rel=1e-8)


def test_radial_wavefunction_examples():
    s = truncated_series(1, 1.9, 13.6150, P01)
    assert radial_wavefunction(s, 0.0, P01) == 1.0
    expected = math.exp(-0.5 * 13.6150 * 0.01) * (-1.145375)
    assert radial_wavefunction(s, 0.1, P01) == pytest.approx(expected, rel=1e-13)
    assert radial_wavefunction(s, 0.1, P01) == pytest.approx(-1.06997, abs=5e-5)
    assert abs(radial_wavefunction(s, 30.0, P01)) < 1e-200


def test_radial_wavefunction_errors():
    s = truncated_series(1, 1.9, 13.615, P01)
    with pytest.raises(DomainError):
        radial_wavefunction(s, -0.1, P01)
    bad = truncated_series(0, 1.9, -361.0, P01)
    with pytest.raises(UnphysicalFrequency):
        radial_wavefunction(bad, 0.5, P01)


def test_full_wavefunction_phase():
    q = QuantumNumbers(1, 2, 1.0)
    s = truncated_series(1, 1.9, U1 / 0.01, P01)
    rho = 0.07
    G = radial_wavefunction(s, rho, P01)
    assert full_wavefunction(s, rho, 0.0, 0.0, q, P01) == G
    assert full_wavefunction(s, rho, math.pi, 0.0, q, P01) == pytest.approx(G, abs=1e-14)
    for phi in np.linspace(0, 2 * math.pi, 7, endpoint=False):
        for z in (-3.0, 0.0, 1.7):
            psi = full_wavefunction(s, rho, phi, z, q, P01)
            assert abs(psi) == pytest.approx(abs(G), rel=1e-14)
            assert full_wavefunction(s, rho, phi + 2 * math.pi, z, q, P01) == pytest.approx(psi, abs=1e-14)


def test_normalization_constant():
    s = truncated_series(1, 1.9, U1 / 0.01, P01)
    c = normalization_constant(s, P01)
    # independent check with a plain trapezoid on a dense grid
    rho = np.linspace(P01.beta, 3.0, 4001)
    g = np.array([radial_wavefunction(s, r, P01) for r in rho])
    w = np.sqrt(rho**2 - P01.beta**2)
    approx = np.trapezoid(c * c * g * g * w, rho)
    assert approx == pytest.approx(1.0, rel=1e-4)
    generic = frobenius_coefficients(1.9, 3.0, 1.0, P01, 10)
    with pytest.raises(DomainError):
        normalization_constant(generic, P01)
