"""
Energy levels in a rotating frame
=================================

In a frame rotating with angular velocity Omega the levels shift by
``-Omega * A`` with ``A = l - k*beta``; the frequency itself does not move.
"""

import numpy as np

from dislocation_qho import DefectFrameParams, QuantumNumbers, energy_from_frequency, exact_line
from dislocation_qho.spectrum import closed_form_line

omegas = np.linspace(0.0, 5.0, 21)
betas = (0.100, 0.101, 0.102, 0.103)

curves = {}
for n in (1, 2, 3):
    q = QuantumNumbers(n, 2, 1.0)
    for beta in betas:
        p = DefectFrameParams(beta=beta)
        for method, solve in (("closed", closed_form_line), ("exact", exact_line)):
            line = solve(q, p)
            curves[n, beta, method] = np.array(
                [energy_from_frequency(q, line.omega, line.A, DefectFrameParams(beta, Omega=w)) for w in omegas]
            )

# %%
# Every curve is a straight line with slope -A.
for n in (1, 2, 3):
    e = curves[n, 0.100, "closed"]
    print(f"n={n}: E(0)={e[0]:.4f}  slope={np.polyfit(omegas, e, 1)[0]:.6f}")

# %%
# Flipping the signs of l and k reverses the slope.
q = QuantumNumbers(1, -2, -1.0)
line = exact_line(q, DefectFrameParams(0.1))
e = [energy_from_frequency(q, line.omega, line.A, DefectFrameParams(0.1, Omega=w)) for w in (0.0, 1.0)]
print(f"l=-2, k=-1: slope {e[1] - e[0]:+.4f}")

# %%
# Optional figure, one panel per n.
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.5), sharey=True)
    for ax, n in zip(axes, (1, 2, 3)):
        for beta in betas:
            ax.plot(omegas, curves[n, beta, "closed"], label=f"beta={beta}")
            ax.plot(omegas, curves[n, beta, "exact"], "--", color=ax.lines[-1].get_color())
        ax.set_title(f"n = {n}")
        ax.set_xlabel("Omega")
    axes[0].set_ylabel("E")
    axes[0].legend(fontsize="small")
    fig.tight_layout()
    plt.show()
