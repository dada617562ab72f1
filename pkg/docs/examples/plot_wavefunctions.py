"""
Radial profiles and equation residuals
======================================

For an exact root the Frobenius series terminates, and the resulting
polynomial-times-Gaussian solves the radial equation to rounding error.
"""

import numpy as np

from dislocation_qho import (
    DefectFrameParams,
    QuantumNumbers,
    normalization_constant,
    radial_wavefunction,
    solve_state,
)
from dislocation_qho.oracle import residual_pair

p = DefectFrameParams(beta=0.1)
rho = np.linspace(0.0, 1.5, 301)

profiles = {}
for n in (1, 2, 3):
    line, s = solve_state(QuantumNumbers(n, 2, 1.0), p)
    c = normalization_constant(s, p)
    profiles[n] = c * np.array([radial_wavefunction(s, r, p) for r in rho])
    radial, transformed = residual_pair(line, s, p)
    print(f"n={n}: omega={line.omega:.4f}  rho-form residual {radial.relative_residual:.1e}  "
          f"x-form residual {transformed.relative_residual:.1e}")

# %%
# The radial profile of order n has n nodes.
for n, g in profiles.items():
    print(f"n={n}: sign changes = {np.count_nonzero(np.diff(np.sign(g[g != 0])))}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    for n, g in profiles.items():
        plt.plot(rho, g, label=f"n = {n}")
    plt.axvline(p.beta, color="0.6", lw=0.8)
    plt.xlabel("rho")
    plt.ylabel("normalized G")
    plt.legend()
    plt.show()
