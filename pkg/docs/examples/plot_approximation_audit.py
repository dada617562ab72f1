"""
How good are the closed forms?
==============================

The closed-form frequencies keep only the first order of the truncation
condition in ``u = m*beta**2*omega``.  Here they are audited against the exact
roots, found twice: by companion-matrix eigenvalues and by bisection.
"""

from dislocation_qho import DefectFrameParams, QuantumNumbers, closed_form_frequency, exact_line, truncated_series
from dislocation_qho.oracle import bisection_root, ode_residual_radial
from dislocation_qho.spectrum import closed_form_line, truncation_polynomial

A = 1.9
for beta in (0.1, 0.05, 0.025):
    p = DefectFrameParams(beta=beta)
    companion = min(w for w in truncation_polynomial(1, A, p).real_roots() if w > 0)
    bisected = bisection_root(1, A, p, (0.5 * companion, 2 * companion))
    cf = closed_form_frequency(1, A, p)
    print(f"A fixed, beta={beta:<6} closed={cf:10.4f} exact={bisected:10.4f} "
          f"rel dev={(cf - bisected) / cf:.6f} (methods differ by {abs(companion - bisected):.1e})")

# %%
# At fixed A both frequencies scale as 1/(m beta^2), so their ratio is
# constant.  The deviation shrinks only when l and k are fixed: then
# A = l - k*beta tends to l = 2, where u itself goes to zero and the
# first-order truncation becomes exact.
for beta in (0.1, 0.05, 0.025):
    line = exact_line(QuantumNumbers(1, 2, 1.0), DefectFrameParams(beta=beta))
    print(f"l=2, k=1, beta={beta:<6} A={line.A:.3f} rel dev={line.rel_dev:.6f}")

# %%
# Closed-form frequencies do not terminate the series, so their states fail
# the residual test by a wide margin.
p = DefectFrameParams(beta=0.1)
for n in (1, 2, 3):
    line = closed_form_line(QuantumNumbers(n, 2, 1.0), p)
    rep = ode_residual_radial(line, truncated_series(n, line.A, line.omega, p), p)
    print(f"n={n}: closed-form residual {rep.relative_residual:.2f} (passes: {rep.passed})")
