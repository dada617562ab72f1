import math

import pytest
from hypothesis import given, strategies as st

from dislocation_qho import (
    DefectFrameParams,
    NonPositiveMass,
    OutOfRangeBeta,
    QuantumNumbers,
    b_parameter,
    effective_angular,
    validate,
)
from dislocation_qho.errors import InvalidQuantumNumber

betas = st.floats(min_value=1e-3, max_value=0.999)
ints = st.integers(min_value=-50, max_value=50)
reals = st.floats(min_value=-20, max_value=20)


def test_effective_angular_examples():
    p = DefectFrameParams(beta=0.1)
    assert effective_angular(QuantumNumbers(1, 2, 1.0), p) == pytest.approx(1.9, abs=1e-15)
    assert effective_angular(QuantumNumbers(1, 0, 0.0), DefectFrameParams(beta=0.73)) == 0.0
    assert effective_angular(QuantumNumbers(1, -2, -1.0), p) == pytest.approx(-1.9, abs=1e-15)


def test_b_parameter_examples():
    p = DefectFrameParams(beta=0.1, Omega=0.4, mass=1.3)
    q = QuantumNumbers(2, 3, 0.7)
    A, omega = effective_angular(q, p), 5.5
    E = omega * (2 * q.n + 1) + q.k**2 / (2 * p.mass) - p.Omega * A
    assert b_parameter(E, A, q, p) == pytest.approx(2 * p.mass * omega * (2 * q.n + 1), rel=1e-14)

    assert b_parameter(0.0, 0.0, QuantumNumbers(0, 0, 0.0), DefectFrameParams(0.2, Omega=3.0)) == 0.0

    # reference n = 1 frequency
    B = b_parameter(44.2236, 1.9, QuantumNumbers(1, 2, 1.0), DefectFrameParams(0.1))
    assert B == pytest.approx(87.4472, abs=1e-12)
    assert B == pytest.approx(6 * 14.5745, abs=1e-3)


def test_validate():
    validate(DefectFrameParams(beta=0.1, mass=1.0, Omega=0.0))
    with pytest.raises(OutOfRangeBeta):
        DefectFrameParams(beta=0.0, mass=1.0, Omega=0.0)
    with pytest.raises(OutOfRangeBeta):
        DefectFrameParams(beta=1.0)
    with pytest.raises(OutOfRangeBeta):
        DefectFrameParams(beta=math.nan)
    with pytest.raises(NonPositiveMass):
        DefectFrameParams(beta=0.5, mass=-1.0, Omega=1.0)
    with pytest.raises(ValueError):
        DefectFrameParams(beta=0.5, Omega=math.inf)


@pytest.mark.parametrize("n,l,k", [(-1, 0, 0.0), (1.5, 0, 0.0), (0, 0.5, 0.0), (0, 0, math.nan)])
def test_quantum_number_validation(n, l, k):
    with pytest.raises(InvalidQuantumNumber):
        QuantumNumbers(n, l, k)


@given(betas, ints, ints, reals, reals)
def test_effective_angular_is_linear(beta, l1, l2, k1, k2):
    p = DefectFrameParams(beta=beta)
    lhs = effective_angular(QuantumNumbers(0, l1 + l2, k1 + k2), p)
    rhs = effective_angular(QuantumNumbers(0, l1, k1), p) + effective_angular(QuantumNumbers(0, l2, k2), p)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@given(betas, ints, reals)
def test_effective_angular_flip_is_exact(beta, l, k):
    p = DefectFrameParams(beta=beta)
    assert effective_angular(QuantumNumbers(0, -l, -k), p) == -effective_angular(QuantumNumbers(0, l, k), p)


@given(betas, reals, st.floats(0.1, 5), reals, reals, reals)
def test_b_parameter_slope_in_energy(beta, Omega, mass, A, E, dE):
    p = DefectFrameParams(beta=beta, Omega=Omega, mass=mass)
    q = QuantumNumbers(0, 1, 0.3)
    slope = b_parameter(E + dE, A, q, p) - b_parameter(E, A, q, p)
    assert slope == pytest.approx(2 * mass * dE, rel=1e-9, abs=1e-9)
