"""Confluent Heun reduction of the radial problem and its Frobenius series.

With ``x = rho**2 / beta**2`` and ``G(x) = exp(-m*omega*beta**2*x/2) F(x)`` the
radial equation becomes the confluent Heun equation

    F'' + (alpha + (b+1)/x + (gamma+1)/(x-1)) F' + (mu/x + nu/(x-1)) F = 0

whose regular solution at the origin, ``F = sum a_q x**q`` with ``a_0 = 1``,
obeys a three-term recurrence.  The series reduces to a polynomial of degree
``n`` when ``B = 2*m*omega*(2n+1)`` and ``a_{n+1} = 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import (
    ConvergenceFailure,
    DomainError,
    InternalInconsistency,
    UnphysicalFrequency,
)
from .params import DefectFrameParams, QuantumNumbers

_MU_NU_RTOL = 1e-12


@dataclass(frozen=True)
class HeunParameters:
    alpha: float
    b: float
    gamma: float
    delta: float
    eta: float
    mu: float
    nu: float


@dataclass(frozen=True)
class SeriesSolution:
    """Frobenius coefficients ``a_0..a_N`` for one candidate frequency.

    ``truncation_order`` is the targeted polynomial degree ``n``, or None for
    a generic (non-terminating) series.
    """

    coefficients: np.ndarray
    omega: float
    A: float
    B: float
    truncation_order: Optional[int] = None

    @property
    def is_polynomial(self) -> bool:
        return self.truncation_order is not None

    @property
    def polynomial(self) -> np.ndarray:
        """Coefficients that define F: ``a_0..a_n`` when truncated, else all."""
        if self.truncation_order is None:
            return self.coefficients
        return self.coefficients[: self.truncation_order + 1]


def heun_parameters(A: float, B: float, omega: float, p: DefectFrameParams) -> HeunParameters:
    """Confluent Heun constants, with mu and nu cross-checked two ways.

    ``mu`` and ``nu`` are built from the general confluent Heun relations in
    terms of (alpha, b, gamma, delta, eta) and compared with their reduced
    closed forms; a mismatch raises :class:`InternalInconsistency`.
    """
    m, beta = p.mass, p.beta
    beta2 = beta * beta
    alpha = -m * omega * beta2
    b = -0.5
    gamma = -0.5
    delta = 0.25 * beta2 * B
    eta = 0.375 - 0.25 * A * A - 0.25 * beta2 * B

    mu_general = 0.5 * alpha * (1 + b) - 0.5 * b * (1 + gamma) - 0.5 * gamma - eta
    nu_general = 0.5 * alpha * (1 + gamma) + 0.5 * b * (1 + gamma) + 0.5 * gamma + eta + delta

    mu = -0.25 * m * omega * beta2 + 0.25 * A * A + 0.25 * beta2 * B
    nu = -0.25 * m * omega * beta2 - 0.25 * A * A

    for name, general, reduced in (("mu", mu_general, mu), ("nu", nu_general, nu)):
        if abs(general - reduced) > _MU_NU_RTOL * max(1.0, abs(general), abs(reduced)):
            raise InternalInconsistency(
                f"{name}: general form {general!r} != reduced form {reduced!r}"
            )
    return HeunParameters(alpha, b, gamma, delta, eta, mu, nu)


def frobenius_coefficients(
    A: float,
    B: float,
    omega: float,
    p: DefectFrameParams,
    N: int,
    truncation_order: Optional[int] = None,
) -> SeriesSolution:
    """Coefficients ``a_0..a_N`` of the regular series about ``x = 0``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    m, beta2 = p.mass, p.beta * p.beta
    A2 = A * A
    a = np.empty(N + 1)
    a[0] = 1.0
    a[1] = -0.5 * (A2 + beta2 * (B - m * omega))
    for q in range(N - 1):
        den = 2.0 * (2 + q) * (3 + 2 * q)
        c0 = beta2 * (B - 2.0 * m * omega * (1 + 2 * q))
        c1 = beta2 * (B - m * omega * (5 + 4 * q)) - 4.0 * (1 + q) ** 2 + A2
        a[q + 2] = (c0 * a[q] - c1 * a[q + 1]) / den
    return SeriesSolution(a, float(omega), float(A), float(B), truncation_order)


def truncated_series(
    n: int, A: float, omega: float, p: DefectFrameParams, extra: int = 6
) -> SeriesSolution:
    """Series with ``B = 2*m*omega*(2n+1)`` targeting a degree-``n`` polynomial.

    ``extra`` additional coefficients beyond ``a_n`` are kept so the tail can
    be inspected.
    """
    B = 2.0 * p.mass * omega * (2 * n + 1)
    return frobenius_coefficients(A, B, omega, p, n + 1 + extra, truncation_order=n)


def evaluate_series(s: SeriesSolution, x: float, tail_terms: int = 3) -> float:
    """``F(x)`` summed in ascending order with compensated (fsum) addition.

    Polynomial series evaluate for any ``x >= 0``; generic series only on
    ``0 <= x < 1`` and must show a decaying tail within the stored terms.
    """
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if s.is_polynomial:
        return math.fsum(float(c) * x**q for q, c in enumerate(s.polynomial))
    if x >= 1.0:
        raise DomainError(f"generic series converges only for x < 1, got {x!r}")

    terms = []
    small = 0
    for q, c in enumerate(s.coefficients):
        t = float(c) * x**q
        terms.append(t)
        total = math.fsum(terms)
        if abs(t) < 1e-16 * abs(total):
            small += 1
            if small >= tail_terms:
                return total
        else:
            small = 0
    raise ConvergenceFailure(
        f"series tail did not decay within {len(s.coefficients)} terms at x={x!r}"
    )


def radial_wavefunction(s: SeriesSolution, rho: float, p: DefectFrameParams) -> float:
    """``G(rho) = exp(-m*omega*rho**2/2) F(rho**2/beta**2)``."""
    if rho < 0:
        raise DomainError(f"rho must be non-negative, got {rho!r}")
    if not s.omega > 0:
        raise UnphysicalFrequency(f"omega must be positive, got {s.omega!r}")
    x = (rho / p.beta) ** 2
    return math.exp(-0.5 * p.mass * s.omega * p.beta**2 * x) * evaluate_series(s, x)


def full_wavefunction(
    s: SeriesSolution,
    rho: float,
    phi: float,
    z: float,
    q: QuantumNumbers,
    p: DefectFrameParams,
) -> complex:
    """``Psi = exp(i(l*phi + k*z)) G(rho)``; any real phi is accepted."""
    return cmath.exp(1j * (q.l * phi + q.k * z)) * radial_wavefunction(s, rho, p)


def normalization_constant(s: SeriesSolution, p: DefectFrameParams) -> float:
    """Constant ``c`` with ``int_beta^inf c**2 G**2 sqrt(rho**2 - beta**2) drho = 1``.

    Only the region ``rho >= beta`` is used; below it the metric determinant
    ``rho**2 - beta**2`` is negative and no measure is defined.
    """
    if not s.is_polynomial:
        raise DomainError("normalization requires a polynomial (truncated) series")
    beta = p.beta

    def integrand(rho):
        g = radial_wavefunction(s, rho, p)
        return g * g * math.sqrt(max(rho * rho - beta * beta, 0.0))

    # split at a few Gaussian widths so quad sees the bulk of the mass
    width = 1.0 / math.sqrt(p.mass * s.omega)
    cut = beta + 10.0 * width
    head, _ = integrate.quad(integrand, beta, cut, limit=200, epsabs=0.0, epsrel=1e-11)
    tail, _ = integrate.quad(integrand, cut, np.inf, limit=200)
    norm2 = head + tail
    if not norm2 > 0:
        raise ConvergenceFailure(f"non-positive norm {norm2!r}")
    return 1.0 / math.sqrt(norm2)
