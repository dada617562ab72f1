"""Independent checks on candidate states.

Residuals substitute ``G = exp(-m*omega*rho**2/2) * P`` back into the radial
equation in both the ``rho`` and the ``x = rho**2/beta**2`` form.  Derivatives
come from the product rule applied to polynomial coefficient arrays, never
from finite differences.

The root finder here evaluates ``a_{n+1}(omega)`` only through the recurrence,
so it is independent of the explicit truncation polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InternalInconsistency, NoSignChange, SingularSample, UnphysicalFrequency
from .heun import HeunParameters, SeriesSolution, frobenius_coefficients
from .params import DefectFrameParams, QuantumNumbers, b_parameter

RESIDUAL_TOL = 1e-8
SINGULAR_COLLAR = 1e-6

# multiples of beta: rho << beta, rho ~ beta (outside the collar), rho >> beta
DEFAULT_RHO_OVER_BETA = (0.1, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class ResidualReport:
    equation: str  # "radial" or "transformed"
    samples: Tuple[float, ...]
    max_abs_residual: float
    scale: float  # max |G| over the samples, times beta**2 for the x-form
    tol: float = RESIDUAL_TOL

    @property
    def relative_residual(self) -> float:
        return self.max_abs_residual / self.scale

    @property
    def passed(self) -> bool:
        return self.relative_residual < self.tol

    def as_dict(self) -> dict:
        return {
            "equation": self.equation,
            "samples": [float(x) for x in self.samples],
            "max_abs_residual": float(self.max_abs_residual),
            "scale": float(self.scale),
            "relative_residual": float(self.relative_residual),
            "tol": float(self.tol),
            "passed": bool(self.passed),
        }


def default_rho_samples(p: DefectFrameParams) -> Tuple[float, ...]:
    return tuple(r * p.beta for r in DEFAULT_RHO_OVER_BETA)


def default_x_samples() -> Tuple[float, ...]:
    return tuple(r * r for r in DEFAULT_RHO_OVER_BETA)


def _state_constants(line, p: DefectFrameParams):
    omega = line.omega
    if not omega > 0:
        raise UnphysicalFrequency(f"residual needs omega > 0, got {omega!r}")
    q = QuantumNumbers(line.n, line.l, line.k)
    # B goes through the reported energy, so the energy law is exercised too
    B = b_parameter(line.energy, line.A, q, p)
    return omega, line.A, B


def ode_residual_radial(
    line,
    s: SeriesSolution,
    p: DefectFrameParams,
    samples: Sequence[float] = None,
    tol: float = RESIDUAL_TOL,
) -> ResidualReport:
    """Residual of ``G'' + rho/(rho^2-b^2) G' - A^2/(rho^2-b^2) G - m^2 rho^2 w^2 G + B G``."""
    omega, A, B = _state_constants(line, p)
    m, beta = p.mass, p.beta
    samples = default_rho_samples(p) if samples is None else tuple(samples)
    for rho in samples:
        if abs(rho - beta) < SINGULAR_COLLAR:
            raise SingularSample(f"rho={rho!r} is within the collar around rho=beta")

    # F(x) = F(r^2) as an even polynomial in r = rho/beta; d/drho = (1/beta) d/dr
    a = np.asarray(s.polynomial, dtype=float)
    poly = np.zeros(2 * len(a) - 1)
    poly[::2] = a
    d1 = P.polyder(poly)
    d2 = P.polyder(poly, 2)

    c = m * omega
    residuals = []
    values = []
    for rho in samples:
        env = math.exp(-0.5 * c * rho * rho)
        r = rho / beta
        p0 = P.polyval(r, poly)
        p1 = P.polyval(r, d1) / beta
        p2 = P.polyval(r, d2) / (beta * beta)
        G = env * p0
        G1 = env * (p1 - c * rho * p0)
        G2 = env * (p2 - 2 * c * rho * p1 + (c * c * rho * rho - c) * p0)
        g = rho * rho - beta * beta
        res = G2 + rho / g * G1 - A * A / g * G - m * m * rho * rho * omega * omega * G + B * G
        residuals.append(abs(res))
        values.append(abs(G))
    return ResidualReport("radial", samples, max(residuals), max(values), tol)


def ode_residual_transformed(
    line,
    s: SeriesSolution,
    p: DefectFrameParams,
    samples: Sequence[float] = None,
    tol: float = RESIDUAL_TOL,
) -> ResidualReport:
    """Residual of ``4x G'' + (4x-2)/(x-1) G' - A^2/(x-1) G - m^2 w^2 b^4 x G + b^2 B G``."""
    omega, A, B = _state_constants(line, p)
    m, beta2 = p.mass, p.beta * p.beta
    samples = default_x_samples() if samples is None else tuple(samples)
    for x in samples:
        if x <= 0 or abs(x - 1.0) < SINGULAR_COLLAR:
            raise SingularSample(f"x={x!r} must be positive and outside the collar around 1")

    F = np.asarray(s.polynomial, dtype=float)
    F1 = P.polyder(F)
    F2 = P.polyder(F, 2)
    sdec = 0.5 * m * omega * beta2

    residuals = []
    values = []
    for x in samples:
        env = math.exp(-sdec * x)
        f0, f1, f2 = P.polyval(x, F), P.polyval(x, F1), P.polyval(x, F2)
        G = env * f0
        G1 = env * (f1 - sdec * f0)
        G2 = env * (f2 - 2 * sdec * f1 + sdec * sdec * f0)
        res = (
            4 * x * G2
            + (4 * x - 2) / (x - 1) * G1
            - A * A / (x - 1) * G
            - m * m * omega * omega * beta2 * beta2 * x * G
            + beta2 * B * G
        )
        residuals.append(abs(res))
        values.append(abs(G))
    # the x-form equation is beta**2 times the rho-form one
    return ResidualReport("transformed", samples, max(residuals), beta2 * max(values), tol)


def residual_pair(
    line, s: SeriesSolution, p: DefectFrameParams, tol: float = RESIDUAL_TOL
) -> Tuple[ResidualReport, ResidualReport]:
    """Both residual forms on matching default samples; verdicts must agree."""
    radial = ode_residual_radial(line, s, p, tol=tol)
    transformed = ode_residual_transformed(line, s, p, tol=tol)
    if radial.passed != transformed.passed:
        raise InternalInconsistency(
            f"radial residual {radial.relative_residual:.3e} and transformed residual "
            f"{transformed.relative_residual:.3e} disagree on pass/fail at tol {tol:g}"
        )
    return radial, transformed


def heun_power_residuals(s: SeriesSolution, hp: HeunParameters) -> np.ndarray:
    """Relative residual of each power of x after substituting the series.

    The confluent Heun equation is multiplied through by ``x(x-1)`` and the
    stored coefficients are substituted term by term.  Powers ``x**0`` up to
    ``x**(N-1)`` are fully determined by ``a_0..a_N`` and are returned, each
    divided by the sum of the absolute contributions to that power.
    """
    F = np.asarray(s.coefficients, dtype=float)
    F1, F2 = P.polyder(F), P.polyder(F, 2)
    xx1 = np.array([0.0, -1.0, 1.0])  # x(x-1)
    drift = hp.alpha * xx1 + np.array([-(hp.b + 1), hp.b + 1 + hp.gamma + 1, 0.0])
    potential = np.array([-hp.mu, hp.mu + hp.nu])
    total = P.polyadd(P.polyadd(P.polymul(xx1, F2), P.polymul(drift, F1)), P.polymul(potential, F))

    a_xx1 = np.abs(xx1)
    a_drift = abs(hp.alpha) * a_xx1 + np.array([abs(hp.b + 1), abs(hp.b + 1) + abs(hp.gamma + 1), 0.0])
    a_pot = np.array([abs(hp.mu), abs(hp.mu) + abs(hp.nu)])
    size = P.polyadd(
        P.polyadd(P.polymul(a_xx1, np.abs(F2)), P.polymul(a_drift, np.abs(F1))),
        P.polymul(a_pot, np.abs(F)),
    )
    N = len(F) - 1
    return np.abs(total[:N]) / np.where(size[:N] > 0, size[:N], 1.0)


def truncation_value(n: int, A: float, omega: float, p: DefectFrameParams) -> float:
    """``a_{n+1}`` at ``omega`` with ``B = 2*m*omega*(2n+1)``, via the recurrence."""
    B = 2.0 * p.mass * omega * (2 * n + 1)
    return float(frobenius_coefficients(A, B, omega, p, n + 1).coefficients[n + 1])


def bisection_root(
    n: int, A: float, p: DefectFrameParams, bracket: Tuple[float, float], max_iter: int = 2200
) -> float:
    """Root of ``a_{n+1}(omega)`` inside ``bracket``, bisected to float resolution."""
    lo, hi = float(min(bracket)), float(max(bracket))
    flo, fhi = truncation_value(n, A, lo, p), truncation_value(n, A, hi, p)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"a_{n + 1} has the same sign at {lo!r} and {hi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = truncation_value(n, A, mid, p)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)
