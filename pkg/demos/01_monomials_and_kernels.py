"""Monomial norms, kernel test functions and their truncated series.

Run: python3 demos/01_monomials_and_kernels.py
"""

import math

import numpy as np

from wdcdiff import DiskGrid, PowerSeries, bloch_norm, monomial_bloch_norm
from wdcdiff.series import choose_order, fa_deriv_closed, fa_series
from wdcdiff.symbols import SpaceParams, StandardPower

grid = DiskGrid()

# Bloch norms of z^n on the sampled disk against the exact optimum.
# The scaled norm n^(alpha-1) ||z^n|| settles near (2 alpha / e)^alpha.
print("n      sampled        exact          n^(a-1) * norm")
alpha = 1.5
for n in (1, 2, 8, 64, 512, 4096):
    got = bloch_norm(PowerSeries.monomial(n), alpha, grid)
    print(f"{n:<6d} {got:.10f}  {monomial_bloch_norm(n, alpha):.10f}  {got * n ** (alpha - 1):.6f}")
print(f"limit (2a/e)^a = {(2 * alpha / math.e) ** alpha:.6f}\n")

# The kernel f_a has a closed m-th derivative; its Maclaurin series needs
# more terms as |a| grows.  choose_order picks N from a rigorous tail bound.
params = SpaceParams(1.0, 1, StandardPower(1.0))
z = 0.9 * np.exp(2j * np.pi * np.arange(16) / 16)
for a in (0.3, 0.7, 0.9):
    N = choose_order(a, params, 0.9, 1e-10, derivative=1)
    s = fa_series(a, params, N).derivative(1)
    err = np.max(np.abs(s(z) - fa_deriv_closed(a, z, params)))
    print(f"|a| = {a}: order {N:4d}, max error on |z| = 0.9 is {err:.1e}")
