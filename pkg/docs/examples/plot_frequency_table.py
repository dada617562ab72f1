"""
Oscillator frequencies near a screw dislocation
===============================================

The closed-form frequencies for n = 1, 2, 3 are compared with the exact roots
of the truncation condition over a small range of the dislocation parameter.
"""

import numpy as np

from dislocation_qho import DefectFrameParams, spectral_table

# l = 2, k = 1, unit mass; beta from 0.100 to 0.103
betas = np.round(np.arange(0.100, 0.1035, 0.001), 3)
lines = spectral_table((1, 2, 3), (2,), (1.0,), betas, DefectFrameParams(beta=0.1))

# %%
# Lines come in pairs: closed form first, then the exact root of the same state.
print(f"{'beta':>6} {'n':>2} {'closed':>10} {'exact':>10} {'rel dev':>9}")
for closed, exact in zip(lines[::2], lines[1::2]):
    print(f"{closed.beta:6.3f} {closed.n:2d} {closed.omega:10.4f} {exact.omega:10.4f} {exact.rel_dev:9.5f}")

# %%
# The closed form overshoots the exact root by a few percent, less for larger n.
devs = np.array([l.rel_dev for l in lines[1::2]]).reshape(len(betas), 3)
print("mean deviation per n:", devs.mean(axis=0).round(4))
