"""Spectral decimation on the Sierpinski gasket (n = 3), checked by brute force.

Run with ``python demos/02_spectral_decimation_gasket.py``.
"""

import numpy as np

from pndecimation.decimation import Sign, eigenvalue_up, extend_eigenfunction, relative_residual
from pndecimation.graph import build_graph
from pndecimation.spectrum import classify_spectrum, full_spectrum, verify_decimation

n = 3

# The level-1 Dirichlet spectrum is {2, 5, 5}: every value is one of the
# exceptional values 2, n+2, 2n where the extension formula breaks down.
print("level 1:", full_spectrum(n, 1).eigenvalues)

# Every other eigenvalue at level 2 comes from a level-1 parent through
# lam^2 - 5 lam + lam_prev = 0.
for e in classify_spectrum(n, 2).entries:
    print(f"  {e.lam:10.6f} x{e.multiplicity}  {e.tag:15s} parent={e.parent}")

# Extend the level-1 eigenfunction for lambda = 2 (constant on the three
# interior vertices) with both children of 2, and measure the residual.
g1, g2 = build_graph(n, 1), build_graph(n, 2)
u = np.zeros(g1.num_vertices)
u[g1.interior] = 1.0
for sign in (Sign.MINUS, Sign.PLUS):
    lam = eigenvalue_up(n, 2.0, sign)
    ext = extend_eigenfunction(g1, g2, u, lam)
    print(f"child {sign.value}: lambda_2 = {lam:.12f}, residual = {relative_residual(g2, ext, lam):.1e}")

# The same test over every oracle eigenpair up to level 4.
print(verify_decimation(n, 4).summary())
