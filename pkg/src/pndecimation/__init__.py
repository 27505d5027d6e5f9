"""Spectral decimation on the generalized Sierpinski fractals P^n.

P^2 is the unit interval, P^3 the Sierpinski gasket and P^n for larger n its
higher-dimensional analogue.  The package builds the approximating graphs,
extends Dirichlet eigenfunctions level by level, computes renormalized
eigenvalue limits and checks all of it against a dense eigensolver.
"""

__version__ = "0.1.0"

from .address import (
    VertexAddress,
    canonicalize,
    cell_corners,
    enumerate_vertices,
    format_address,
    is_boundary,
    parse_address,
    representations,
    vertex_count,
)
from .graph import (
    ApproxGraph,
    build_graph,
    dirichlet_matrix,
    energy,
    energy_product,
    laplacian_apply,
    renormalized_energy,
    structure_report,
)
from .decimation import (
    DecimationTrace,
    Sign,
    decimate,
    eigenvalue_down,
    eigenvalue_up,
    extend_eigenfunction,
    forbidden_values,
    fractal_eigenvalue,
    harmonic_extend,
    restrict,
)
from .spectrum import classify_spectrum, full_spectrum, verify_decimation
from .geometry import (
    EmbeddingConfig,
    embed_vertex,
    export_point_cloud,
    hausdorff_dimension,
    regular_simplex,
)
