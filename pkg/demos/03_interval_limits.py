"""Renormalized eigenvalue limits.

For n = 2 the fractal is the unit interval and the limits are the Dirichlet
eigenvalues (k pi)^2.  For n >= 3 there is no closed form, so only the
stability of the limit is shown.

Run with ``python demos/03_interval_limits.py``.
"""

import math

from pndecimation.decimation import fractal_eigenvalue
from pndecimation.spectrum import full_spectrum

res = fractal_eigenvalue(2, 1, 2.0, "")
print(f"k=1: {res.value:.12f}  (pi^2 = {math.pi ** 2:.12f}), {res.levels_used} levels")

res = fractal_eigenvalue(2, 1, 2.0, "+")
print(f"k=3: {res.value:.12f}  (9 pi^2 = {9 * math.pi ** 2:.12f})")

# 50-digit arithmetic, tolerance far below double precision
res = fractal_eigenvalue(2, 1, 2.0, "", tol=1e-25, precision=50)
print(f"mpmath: {res.value!r}")

for n in (3, 4, 5):
    seed = full_spectrum(n, 2).eigenvalues[0]
    a = fractal_eigenvalue(n, 2, seed, "", tol=1e-10)
    b = fractal_eigenvalue(n, 2, seed, "", tol=5e-11)
    print(f"n={n}: seed {seed:.8f} -> {a.value:.10f}  (tol/2: {b.value:.10f})")
