"""Harmonic extension, the energy renormalization and a point cloud export.

Writes ``gasket_harmonic.txt`` and ``gasket_edges.txt`` to the current
directory; any plotting tool that reads whitespace columns can draw them.

Run with ``python demos/04_harmonic_energy_and_embedding.py``.
"""

import numpy as np

from pndecimation.decimation import harmonic_extend
from pndecimation.geometry import export_point_cloud, hausdorff_dimension
from pndecimation.graph import build_graph, energy, renormalized_energy

n, depth = 3, 5
u = np.array([1.0, 0.0, 0.0])
g_prev = build_graph(n, 0)
print("level 0 energy", energy(g_prev, u))
for m in range(1, depth + 1):
    g = build_graph(n, m)
    u = harmonic_extend(g_prev, g, u)
    e = energy(g, u)
    # the raw energy shrinks by n/(n+2) per level; the renormalized one is constant
    print(f"level {m}: E = {e:.6f}, renormalized = {renormalized_energy(n, m, e):.12f}")
    g_prev = g

cloud = export_point_cloud(n, depth, values=u, graph=g_prev)
with open("gasket_harmonic.txt", "w") as fh:
    fh.write(cloud.to_columns())
with open("gasket_edges.txt", "w") as fh:
    fh.write(cloud.edges_text())
print(len(cloud.addresses), "points written")

for k in range(2, 7):
    print(f"dim K_{k} = {hausdorff_dimension(k):.6f}")
