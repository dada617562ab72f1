"""Frequencies and energies of the polynomial (quasi-exact) states.

Two routes are kept side by side:

* ``closed_form`` - the small-beta formulas for n = 0..3.  For n >= 1 they are
  the first-order (linear in ``u = m*beta**2*omega``) solution of the truncation
  condition ``a_{n+1} = 0``, so they are approximations.
* ``exact_root`` - real roots of ``a_{n+1}(omega)`` found by sign scanning plus
  bisection on the recurrence, cross-checked against the companion-matrix
  roots of the truncation polynomial built on coefficient arrays.

The frequency never depends on ``Omega``; only the energy does, through
``E = k**2/2m + omega*(2n+1) - Omega*A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from . import oracle
from .errors import (
    DegenerateState,
    DislocationQHOError,
    InternalInconsistency,
    NoPhysicalRoot,
    RootMismatch,
    SingularParameter,
    UnsupportedOrder,
)
from .heun import SeriesSolution, truncated_series
from .params import DefectFrameParams, QuantumNumbers, effective_angular

MAX_CLOSED_FORM_ORDER = 3
ROOT_RTOL = 1e-9
_SINGULAR_ATOL = 1e-12
_DEGENERATE_ATOL = 1e-12


@dataclass(frozen=True)
class SpectralLine:
    n: int
    l: int
    k: float
    omega: float
    energy: float
    method: str  # "closed_form" or "exact_root"
    A: float
    beta: float
    mass: float
    Omega: float
    physical: bool
    reference_branch: bool = False
    a_next: float = math.nan  # |a_{n+1}| at omega, relative to max |a_0..a_n|
    rel_dev: Optional[float] = None  # |w_closed - w_exact| / |w_closed|
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def params(self) -> DefectFrameParams:
        return DefectFrameParams(beta=self.beta, Omega=self.Omega, mass=self.mass)

    def quantum_numbers(self) -> QuantumNumbers:
        return QuantumNumbers(self.n, self.l, self.k)


@dataclass(frozen=True)
class TruncationPolynomial:
    """``a_{n+1}`` as a polynomial in omega after substituting ``B = 2m*omega*(2n+1)``.

    Coefficients are held in ``u = omega / scale`` with ``scale = 1/(m*beta**2)``;
    :attr:`coefficients` gives them in powers of omega.
    """

    n: int
    A: float
    beta: float
    mass: float
    scale: float
    scaled_coefficients: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.scaled_coefficients) - 1

    @property
    def coefficients(self) -> np.ndarray:
        return self.scaled_coefficients / self.scale ** np.arange(self.degree + 1)

    def __call__(self, omega):
        return P.polyval(np.asarray(omega) / self.scale, self.scaled_coefficients)

    def magnitude(self, omega) -> float:
        """Sum of absolute term sizes at ``omega``; the yardstick for relative errors."""
        t = abs(omega / self.scale)
        return float(sum(abs(c) * t**j for j, c in enumerate(self.scaled_coefficients)))

    def real_roots(self, imag_tol: float = 1e-7) -> List[float]:
        roots = P.polyroots(self.scaled_coefficients)
        real = [z.real for z in roots if abs(z.imag) <= imag_tol * max(1.0, abs(z))]
        return sorted(r * self.scale for r in real)


@dataclass(frozen=True)
class FrequencyRoot:
    omega: float
    physical: bool
    reference_branch: bool = False


def energy_from_frequency(
    q: QuantumNumbers, omega: float, A: float, p: DefectFrameParams
) -> float:
    return q.k * q.k / (2.0 * p.mass) + omega * (2 * q.n + 1) - p.Omega * A


def _closed_form_parts(n: int, A: float) -> Tuple[float, float]:
    """Numerator and denominator (without the beta**2*m factor) as functions of A**2."""
    A2 = A * A
    if n == 0:
        return -A2, 1.0
    if n == 1:
        return -A2 * (A2 - 4.0), 6.0 * (A2 - 2.0)
    if n == 2:
        return -(A2**3) + 20.0 * A2**2 - 64.0 * A2, 5.0 * (3.0 * A2**2 - 40.0 * A2 + 64.0)
    if n == 3:
        # (A-6)(A-4)(A-2)A^2(A+2)(A+4)(A+6) regrouped so only A**2 enters
        num = -A2 * (A2 - 4.0) * (A2 - 16.0) * (A2 - 36.0)
        return num, 28.0 * (A2**3 - 42.0 * A2**2 + 392.0 * A2 - 576.0)
    raise UnsupportedOrder(f"closed forms exist only for n <= {MAX_CLOSED_FORM_ORDER}, got {n}")


def closed_form_frequency(n: int, A: float, p: DefectFrameParams) -> float:
    """Small-beta oscillator frequency for the degree-``n`` polynomial state.

    Exact for ``n = 0``; first order in ``m*beta**2*omega`` for ``n = 1..3``.
    The ``n = 0`` value is always negative.  A zero frequency (``A = 0``, or
    ``A = +-2, +-4, ...`` up to ``2n``) raises :class:`DegenerateState`.
    """
    if n < 0 or n > MAX_CLOSED_FORM_ORDER:
        raise UnsupportedOrder(f"closed forms exist only for 0 <= n <= 3, got {n}")
    if abs(A) <= _DEGENERATE_ATOL:
        raise DegenerateState("A = 0 gives omega = 0, which is not an oscillator")
    num, den = _closed_form_parts(n, A)
    if abs(den) <= _SINGULAR_ATOL:
        raise SingularParameter(f"closed form for n={n} is singular at A={A!r}")
    if num == 0.0:
        # A an even integer no larger than 2n
        raise DegenerateState(f"closed form for n={n} gives omega = 0 at A={A!r}")
    return num / (den * p.beta**2 * p.mass)


def _explicit_closed_energy(n: int, q: QuantumNumbers, A: float, p: DefectFrameParams) -> float:
    """Energies in explicit product form for n = 1..3."""
    m, b2 = p.mass, p.beta**2
    kin = q.k**2 / (2 * m)
    if n == 1:
        mid = -(A**2) * (A**2 - 4) / (2 * b2 * m * (A**2 - 2))
    elif n == 2:
        mid = (-(A**6) + 20 * A**4 - 64 * A**2) / (b2 * m * (3 * A**4 - 40 * A**2 + 64))
    else:
        prod = (A - 6) * (A - 4) * (A - 2) * A**2 * (A + 2) * (A + 4) * (A + 6)
        mid = -prod / (4 * b2 * m * (A**6 - 42 * A**4 + 392 * A**2 - 576))
    return kin + mid - A * p.Omega


def closed_form_energy(n: int, q: QuantumNumbers, p: DefectFrameParams) -> float:
    if not 1 <= n <= MAX_CLOSED_FORM_ORDER:
        raise UnsupportedOrder(f"closed-form energies exist for 1 <= n <= 3, got {n}")
    q = replace(q, n=n)
    A = effective_angular(q, p)
    omega = closed_form_frequency(n, A, p)
    composed = energy_from_frequency(q, omega, A, p)
    explicit = _explicit_closed_energy(n, q, A, p)
    scale = max(abs(q.k**2 / (2 * p.mass)), abs(omega * (2 * n + 1)), abs(p.Omega * A), 1e-300)
    if abs(composed - explicit) > 1e-12 * scale:
        raise InternalInconsistency(f"energy routes disagree: {composed!r} vs {explicit!r}")
    return composed


def frequency_scale(n: int, A: float, p: DefectFrameParams) -> float:
    """Natural magnitude of truncation roots: ``(1 + A**2 + (n+1)**2) / (m*beta**2)``."""
    return (1.0 + A * A + (n + 1) ** 2) / (p.mass * p.beta**2)


def truncation_polynomial(n: int, A: float, p: DefectFrameParams) -> TruncationPolynomial:
    """``a_{n+1}`` as an explicit polynomial in ``u = m*beta**2*omega``.

    With ``B = 2m*omega*(2n+1)`` every recurrence coefficient is affine in
    ``u``, so running the recurrence on coefficient arrays yields the
    polynomial directly.  Sampling ``a_{n+1}`` at nodes and interpolating
    loses several digits for n >= 3 because of the polynomial's dynamic range.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    A2 = A * A
    prev = np.array([1.0])
    cur = np.array([-0.5 * A2, -0.5 * (4 * n + 1)])
    for q in range(n):
        c0 = np.array([0.0, 4.0 * (n - q)])
        c1 = np.array([A2 - 4.0 * (1 + q) ** 2, 4.0 * n - 3.0 - 4.0 * q])
        nxt = P.polysub(P.polymul(c0, prev), P.polymul(c1, cur)) / (2.0 * (2 + q) * (3 + 2 * q))
        prev, cur = cur, nxt
    scale = 1.0 / (p.mass * p.beta**2)
    return TruncationPolynomial(n, float(A), p.beta, p.mass, scale, cur)


def linearized_frequency(n: int, A: float, p: DefectFrameParams) -> float:
    """Root of the truncation polynomial kept to first order in omega.

    For n <= 3 this reproduces the closed forms; for larger n it is the
    reference used to pick the reference branch among exact roots.
    """
    c = truncation_polynomial(n, A, p).coefficients
    return -c[0] / c[1]


def _scan_grid(half_width: float, points: int) -> np.ndarray:
    # sinh spacing: dense near omega = 0 where small physical roots live
    knee = half_width * 1e-4
    s = np.linspace(-np.arcsinh(half_width / knee), np.arcsinh(half_width / knee), points)
    grid = knee * np.sinh(s)
    grid[0], grid[-1] = -half_width, half_width
    return grid


def scan_roots(n: int, A: float, p: DefectFrameParams, points: Optional[int] = None) -> List[float]:
    """All sign changes of ``a_{n+1}`` on the search window, refined by bisection."""
    half_width = 10.0 * frequency_scale(n, A, p)
    grid = _scan_grid(half_width, points or 600 + 200 * n)
    vals = [oracle.truncation_value(n, A, w, p) for w in grid]
    roots = []
    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
        elif f1 != 0.0 and (f0 > 0) != (f1 > 0):
            roots.append(oracle.bisection_root(n, A, p, (grid[i], grid[i + 1])))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return sorted(roots)


def _close(a: float, b: float, rtol: float, atol: float) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b)) + atol


def exact_frequencies(
    n: int, A: float, p: DefectFrameParams, require_physical: bool = False
) -> List[FrequencyRoot]:
    """Every real root of the exact truncation condition, found two ways.

    Raises :class:`RootMismatch` when bisection and companion-matrix roots do
    not pair up within ``1e-9`` relative.  With ``require_physical`` a list
    without any positive root raises :class:`NoPhysicalRoot`.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if abs(A) <= _DEGENERATE_ATOL:
        raise DegenerateState("A = 0 puts a root at omega = 0, which is not an oscillator")
    bisected = scan_roots(n, A, p)
    poly = truncation_polynomial(n, A, p)
    companion = poly.real_roots()
    # absolute floor only matters for roots at omega = 0 (A an even integer)
    atol = 1e-12 * poly.scale
    if len(bisected) != len(companion) or not all(
        _close(r1, r2, ROOT_RTOL, atol) for r1, r2 in zip(bisected, companion)
    ):
        raise RootMismatch(f"bisection roots {bisected} != polynomial roots {companion}")

    try:
        reference = (
            closed_form_frequency(n, A, p)
            if n <= MAX_CLOSED_FORM_ORDER
            else linearized_frequency(n, A, p)
        )
    except (SingularParameter, DegenerateState):
        reference = None
    branch = None
    if reference is not None and bisected:
        branch = min(range(len(bisected)), key=lambda i: (abs(bisected[i] - reference), abs(bisected[i])))

    roots = [FrequencyRoot(w, w > 0, i == branch) for i, w in enumerate(bisected)]
    if require_physical and not any(r.physical for r in roots):
        raise NoPhysicalRoot(f"no positive root for n={n}, A={A!r}")
    return roots


def relative_deviation(omega_closed: float, omega_exact: float) -> float:
    return abs(omega_closed - omega_exact) / abs(omega_closed)


def _a_next(n: int, A: float, omega: float, p: DefectFrameParams) -> float:
    s = truncated_series(n, A, omega, p, extra=1)
    head = np.max(np.abs(s.coefficients[: n + 1]))
    return float(abs(s.coefficients[n + 1]) / head)


def closed_form_line(q: QuantumNumbers, p: DefectFrameParams) -> SpectralLine:
    A = effective_angular(q, p)
    omega = closed_form_frequency(q.n, A, p)
    energy = energy_from_frequency(q, omega, A, p)
    if q.n >= 1:
        if closed_form_energy(q.n, q, p) != energy:
            raise InternalInconsistency("closed-form energy route mismatch")
    return SpectralLine(
        q.n, q.l, q.k, omega, energy, "closed_form", A, p.beta, p.mass, p.Omega,
        physical=omega > 0, reference_branch=True, a_next=_a_next(q.n, A, omega, p),
    )


def exact_line(
    q: QuantumNumbers, p: DefectFrameParams, require_physical: bool = False
) -> SpectralLine:
    """Line for the reference-branch exact root (the root nearest the closed form).

    With ``require_physical`` a non-physical reference branch falls back to the
    smallest positive root; the deviation from the closed form is then not
    reported, since the two describe different branches.
    """
    A = effective_angular(q, p)
    roots = exact_frequencies(q.n, A, p)
    physical = [r for r in roots if r.physical]
    chosen = next((r for r in roots if r.reference_branch), None)
    if chosen is None or (require_physical and not chosen.physical):
        chosen = physical[0] if physical else (roots[-1] if roots else None)
    if chosen is None or (require_physical and not chosen.physical):
        raise NoPhysicalRoot(f"no usable positive root for n={q.n}, A={A!r}")
    omega = chosen.omega
    rel_dev = None
    if q.n <= MAX_CLOSED_FORM_ORDER and chosen.reference_branch:
        try:
            rel_dev = relative_deviation(closed_form_frequency(q.n, A, p), omega)
        except (SingularParameter, DegenerateState):
            pass
    return SpectralLine(
        q.n, q.l, q.k, omega, energy_from_frequency(q, omega, A, p), "exact_root", A,
        p.beta, p.mass, p.Omega, physical=chosen.physical, reference_branch=chosen.reference_branch,
        a_next=_a_next(q.n, A, omega, p), rel_dev=rel_dev,
    )


def solve_state(q: QuantumNumbers, p: DefectFrameParams, extra: int = 6) -> Tuple[SpectralLine, SeriesSolution]:
    """Physical exact state and its truncated Frobenius series."""
    line = exact_line(q, p, require_physical=True)
    return line, truncated_series(q.n, line.A, line.omega, p, extra=extra)


def _error_line(q: QuantumNumbers, p: DefectFrameParams, method: str, exc: DislocationQHOError) -> SpectralLine:
    return SpectralLine(
        q.n, q.l, q.k, math.nan, math.nan, method, effective_angular(q, p),
        p.beta, p.mass, p.Omega, physical=False, error=exc.code,
    )


def state_lines(q: QuantumNumbers, p: DefectFrameParams) -> Tuple[Optional[SpectralLine], SpectralLine]:
    """(closed-form line or None for n > 3, exact line); errors become error lines."""
    closed = None
    if q.n <= MAX_CLOSED_FORM_ORDER:
        try:
            closed = closed_form_line(q, p)
        except DislocationQHOError as exc:
            closed = _error_line(q, p, "closed_form", exc)
    try:
        exact = exact_line(q, p)
    except DislocationQHOError as exc:
        exact = _error_line(q, p, "exact_root", exc)
    if closed is not None and closed.ok and exact.ok:
        closed = replace(closed, rel_dev=exact.rel_dev)
    return closed, exact


def spectral_table(
    n_list: Iterable[int],
    l_list: Iterable[int],
    k_list: Iterable[float],
    beta_list: Iterable[float],
    template: DefectFrameParams,
) -> List[SpectralLine]:
    """Solve the Cartesian product (beta, n, l, k) by both methods.

    Lines come back in input order, closed form before exact for each state.
    Each frequency is recomputed at a different ``Omega`` and must come out
    bit-identical.
    """
    lines: List[SpectralLine] = []
    for beta in beta_list:
        p = replace(template, beta=float(beta))
        p_shift = replace(p, Omega=p.Omega + 1.0)
        for n in n_list:
            for l in l_list:
                for k in k_list:
                    q = QuantumNumbers(n, l, k)
                    pair = state_lines(q, p)
                    shifted = state_lines(q, p_shift)
                    for line, other in zip(pair, shifted):
                        if line is None:
                            continue
                        if line.ok and other.ok and line.omega != other.omega:
                            raise InternalInconsistency(
                                f"omega changed with Omega: {line.omega!r} vs {other.omega!r}"
                            )
                        lines.append(line)
    return lines


def lines_by_state(lines: Sequence[SpectralLine]):
    """Group a flat line list into (closed or None, exact) pairs, preserving order."""
    out = []
    pending = None
    for line in lines:
        if line.method == "closed_form":
            pending = line
        else:
            out.append((pending, line))
            pending = None
    return out
