"""Addresses, cells and the approximating graphs Gamma_m.

Run with ``python demos/01_graphs_and_addresses.py``.
"""

import numpy as np

from pndecimation.address import canonicalize, enumerate_vertices, format_address, representations
from pndecimation.graph import build_graph, structure_report

# A point of V_m is a word of length m followed by a repeated tail symbol.
# "0 2 1 1 1 ..." and "0 1 2 2 2 ..." are the same point of the gasket;
# the canonical spelling is the lexicographically smaller one.
v = canonicalize([0, 2], 1, 3)
print("canonical:", format_address(v, 3))
print("spellings:", sorted(representations(v)))

# |V_m| = n + n (n^m - 1) / 2
for n in (2, 3, 4, 5):
    print(n, [len(enumerate_vertices(n, m)) for m in range(4)])

# Gamma_1 for n = 4: four corners plus six midpoints, 24 edges.
g = build_graph(4, 1)
print("n=4, level 1:", g.num_vertices, "vertices,", g.num_edges, "edges")
print("degrees:", np.bincount(g.degrees))

# Inside one parent cell the new vertices form an octahedron for n = 4.
# The report gives, for each new vertex x_rs, the new vertices adjacent
# to it (F) and those that are not (G).
rep = structure_report(g, ())
print(rep.summary())

# For n = 5 the F sets are triangular prisms.
print(structure_report(build_graph(5, 1), ()).summary())
