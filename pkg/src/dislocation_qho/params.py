"""Physical setting, state labels and the derived couplings ``A`` and ``B``.

Units are hbar = 1 throughout.

Sign convention: the shifted energy parameter is ``B = 2m(E + Omega*A) - k**2``
and the spectrum reads ``E = k**2/2m + omega*(2n+1) - Omega*A``.  The
rotating-frame Hamiltonian is usually written ``H0 - Omega.L``; the ``+Omega*A``
inside ``B`` is kept as the authoritative convention for this package, so the
energy of a state with ``A > 0`` falls as the frame spins faster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidQuantumNumber, NonPositiveMass, OutOfRangeBeta


@dataclass(frozen=True)
class DefectFrameParams:
    """Screw dislocation strength, frame angular velocity and particle mass.

    Parameters
    ----------
    beta : float
        Dislocation parameter, restricted to the open interval (0, 1).
    Omega : float
        Angular velocity of the rotating frame; any finite real.
    mass : float
        Particle mass, strictly positive.
    """

    beta: float
    Omega: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        validate(self)


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial order ``n``, angular integer ``l`` and axial momentum ``k``."""

    n: int
    l: int
    k: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise InvalidQuantumNumber(f"n must be a non-negative integer, got {self.n!r}")
        if isinstance(self.l, bool) or int(self.l) != self.l:
            raise InvalidQuantumNumber(f"l must be an integer, got {self.l!r}")
        if not math.isfinite(self.k):
            raise InvalidQuantumNumber(f"k must be finite, got {self.k!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "k", float(self.k))


@dataclass(frozen=True)
class EffectiveCouplings:
    """``A`` and ``B`` together with the energy and frequency they came from."""

    A: float
    B: float
    energy: float
    omega: float


def validate(p: DefectFrameParams) -> None:
    """Raise if ``p`` violates the parameter invariants; return None otherwise."""
    beta, mass, Omega = p.beta, p.mass, p.Omega
    if not (isinstance(beta, (int, float)) and math.isfinite(beta)) or not 0.0 < beta < 1.0:
        raise OutOfRangeBeta(f"beta must lie in (0, 1), got {beta!r}")
    if not (isinstance(mass, (int, float)) and math.isfinite(mass)) or mass <= 0.0:
        raise NonPositiveMass(f"mass must be positive, got {mass!r}")
    if not (isinstance(Omega, (int, float)) and math.isfinite(Omega)):
        raise ValueError(f"Omega must be a finite real, got {Omega!r}")


def effective_angular(q: QuantumNumbers, p: DefectFrameParams) -> float:
    """Effective angular momentum eigenvalue ``A = l - k*beta``."""
    return q.l - q.k * p.beta


def b_parameter(E: float, A: float, q: QuantumNumbers, p: DefectFrameParams) -> float:
    """Shifted energy parameter ``B = 2m(E + Omega*A) - k**2``."""
    return 2.0 * p.mass * (E + p.Omega * A) - q.k * q.k


def effective_couplings(
    q: QuantumNumbers, p: DefectFrameParams, energy: float, omega: float
) -> EffectiveCouplings:
    A = effective_angular(q, p)
    return EffectiveCouplings(A=A, B=b_parameter(energy, A, q, p), energy=energy, omega=omega)
