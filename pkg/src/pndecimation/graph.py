"""The approximating graphs Gamma_m, their Dirichlet Laplacian and energy.

Functions on a graph are plain float64 arrays indexed like
``ApproxGraph.vertices``.  A 2-D array of shape ``(num_vertices, k)`` is
treated as ``k`` functions stacked column-wise wherever that is cheap.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse

from .address import (
    VertexAddress,
    canonicalize,
    cell_words,
    enumerate_vertices,
    format_address,
    is_boundary,
)
from .errors import LevelMismatchError

__all__ = [
    "ApproxGraph",
    "DirichletMatrix",
    "StructureReport",
    "build_graph",
    "laplacian_apply",
    "dirichlet_matrix",
    "energy",
    "energy_product",
    "renormalized_energy",
    "structure_report",
    "lift_indices",
    "graph_to_json",
]


@dataclass(frozen=True, eq=False)
class ApproxGraph:
    """The graph Gamma_m of the level-``m`` approximation of P^n.

    Attributes
    ----------
    n : int
        Alphabet size (number of contractions).
    level : int
        The approximation level ``m``.
    vertices : tuple of VertexAddress
        Canonical addresses in sorted order; the position is the vertex index.
    cells : ndarray of shape (n**m, n)
        ``cells[c, k]`` is the index of corner ``k`` of the ``c``-th cell, cells
        being ordered lexicographically by word.
    edges : ndarray of shape (num_edges, 2)
        Sorted ``(i, j)`` pairs with ``i < j``.
    boundary_mask : ndarray of bool
        True on the ``n`` points of V_0.
    """

    n: int
    level: int
    vertices: tuple
    cells: np.ndarray
    edges: np.ndarray
    boundary_mask: np.ndarray
    index: dict = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix."""
        N = self.num_vertices
        i, j = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(2 * len(i))
        return sparse.csr_matrix(
            (data, (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(N, N)
        )

    @cached_property
    def neighbors(self) -> list:
        """Sorted neighbor index arrays, one per vertex."""
        A = self.adjacency
        return [np.sort(A.indices[A.indptr[k] : A.indptr[k + 1]]) for k in range(A.shape[0])]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    @cached_property
    def interior(self) -> np.ndarray:
        """Indices of V_m minus V_0, ascending."""
        return np.flatnonzero(~self.boundary_mask)

    def index_of(self, v: VertexAddress) -> int:
        return self.index[v]


def build_graph(n: int, m: int, cap: int | None = None) -> ApproxGraph:
    """Build Gamma_m: corners of each ``m``-cell are joined pairwise.

    Raises
    ------
    CapExceededError
        If ``|V_m|`` exceeds ``cap`` (default from :func:`config.vertex_cap`).
    """
    vertices = enumerate_vertices(n, m, cap=cap)
    index = {v: k for k, v in enumerate(vertices)}
    cells = np.empty((n**m, n), dtype=np.int64)
    for c, word in enumerate(cell_words(n, m)):
        for k in range(n):
            cells[c, k] = index[canonicalize(word, k, n)]

    pairs = np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64)
    a = cells[:, pairs[:, 0]].ravel()
    b = cells[:, pairs[:, 1]].ravel()
    edges = np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    edges = edges[order]
    if len(edges) and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
        raise AssertionError("two cells share an edge")
    if np.any(edges[:, 0] == edges[:, 1]):
        raise AssertionError("self-loop in cell corners")

    boundary_mask = np.array([is_boundary(v) for v in vertices], dtype=bool)
    return ApproxGraph(
        n=n,
        level=m,
        vertices=tuple(vertices),
        cells=cells,
        edges=edges,
        boundary_mask=boundary_mask,
        index=index,
    )


def _check_function(g, u):
    u = np.asarray(u, dtype=np.float64)
    if u.shape[0] != g.num_vertices:
        raise LevelMismatchError(
            f"function has {u.shape[0]} values, graph level {g.level} has {g.num_vertices} vertices"
        )
    return u


def laplacian_apply(g: ApproxGraph, u) -> np.ndarray:
    """``deg(x) u(x) - sum_{y~x} u(y)`` at interior ``x``; zero on V_0."""
    u = _check_function(g, u)
    deg = g.degrees if u.ndim == 1 else g.degrees[:, None]
    out = deg * u - g.adjacency @ u
    out[g.boundary_mask] = 0.0
    return out


@dataclass(frozen=True)
class DirichletMatrix:
    """Laplacian restricted to interior vertices (boundary values pinned to 0).

    ``interior[k]`` is the graph index of row/column ``k``.
    """

    matrix: np.ndarray
    interior: np.ndarray

    @property
    def size(self) -> int:
        return len(self.interior)

    def to_graph(self, x, num_vertices: int) -> np.ndarray:
        """Scatter interior values back onto a full-graph array (zeros on V_0)."""
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros((num_vertices,) + x.shape[1:])
        out[self.interior] = x
        return out


def dirichlet_matrix(g: ApproxGraph, dense: bool = True):
    """The Dirichlet Laplacian of ``g`` as a dense array (or CSR if ``dense=False``).

    Returns a :class:`DirichletMatrix`.
    """
    if g.level == 0:
        raise ValueError("Gamma_0 has no interior vertices")
    idx = g.interior
    L = sparse.diags(g.degrees.astype(np.float64)) - g.adjacency
    L = L.tocsr()[idx][:, idx]
    return DirichletMatrix(matrix=L.toarray() if dense else L, interior=idx)


def energy_product(g: ApproxGraph, u, v) -> float:
    """``sum over edges (u(x)-u(y)) (v(x)-v(y))``, each edge once."""
    u = _check_function(g, u)
    v = _check_function(g, v)
    i, j = g.edges[:, 0], g.edges[:, 1]
    return float(np.dot(u[i] - u[j], v[i] - v[j]))


def energy(g: ApproxGraph, u):
    """``E(u, u)``; one value per column when ``u`` is 2-D."""
    u = _check_function(g, u)
    d = u[g.edges[:, 0]] - u[g.edges[:, 1]]
    if d.ndim == 1:
        return float(np.dot(d, d))
    return np.einsum("ek,ek->k", d, d)


def renormalized_energy(n: int, m: int, e: float) -> float:
    """Scale a level-``m`` energy by ``((n+2)/n)**m``."""
    return ((n + 2) / n) ** m * e


def lift_indices(g_prev: ApproxGraph, g: ApproxGraph) -> np.ndarray:
    """Index in ``g`` of each vertex of ``g_prev`` (V_{m-1} sits inside V_m)."""
    if g.n != g_prev.n or g.level != g_prev.level + 1:
        raise LevelMismatchError(
            f"expected consecutive levels, got {g_prev.level} and {g.level}"
        )
    # corner b of child cell p*n + b is corner b of parent cell p
    n = g.n
    out = np.empty(g_prev.num_vertices, dtype=np.int64)
    children = g.cells.reshape(-1, n, n)
    diag = children[:, np.arange(n), np.arange(n)]
    out[g_prev.cells.ravel()] = diag.ravel()
    return out


@dataclass
class StructureReport:
    """Measured neighbourhood counts inside one parent cell.

    ``pairs`` maps each corner pair ``(r, s)`` to a dict of raw counts;
    the ``*_set`` entries hold graph indices.
    """

    n: int
    level: int
    cell: tuple
    new_vertices: np.ndarray
    new_subgraph_degrees: np.ndarray
    old_neighbor_counts: np.ndarray
    pairs: dict

    def summary(self) -> dict:
        """Distinct values of every per-pair count, across all pairs."""
        keys = [k for k in next(iter(self.pairs.values())) if not k.endswith("_set")]
        out = {
            "new_vertices": len(self.new_vertices),
            "new_subgraph_degree": sorted(set(self.new_subgraph_degrees.tolist())),
            "old_neighbors": sorted(set(self.old_neighbor_counts.tolist())),
        }
        for k in keys:
            vals = set()
            for rec in self.pairs.values():
                v = rec[k]
                vals.update(v if isinstance(v, list) else [v])
            out[k] = sorted(vals)
        return out


def structure_report(g: ApproxGraph, cell) -> StructureReport:
    """Neighbourhood counts of the new vertices of the level-(m-1) cell ``cell``.

    New vertices are ``x[b, c] = cell + b + c c c ...`` with ``b != c``.  For
    each pair ``{r, s}`` the set F holds the other new vertices whose label
    meets ``{r, s}`` and G those whose label is disjoint from it.
    """
    n, m = g.n, g.level
    cell = tuple(cell)
    if m < 1 or len(cell) != m - 1:
        raise LevelMismatchError("cell must have level m-1 for a graph of level m >= 1")
    x = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        for c in range(n):
            x[b, c] = g.index[canonicalize(cell + (b,), c, n)]
    labels = [(i, j) for i in range(n) for j in range(i + 1, n)]
    new = np.array([x[i, j] for i, j in labels], dtype=np.int64)
    new_set = set(new.tolist())
    nbrs = {int(v): set(g.neighbors[v].tolist()) for v in new}

    sub_deg = np.array([len(nbrs[int(v)] & new_set) for v in new])
    old_cnt = np.array([len(nbrs[int(v)] - new_set) for v in new])

    pairs = {}
    for r, s in labels:
        here = int(x[r, s])
        F = {int(x[i, j]) for i, j in labels if {i, j} & {r, s} and (i, j) != (r, s)}
        G = {int(x[i, j]) for i, j in labels if not {i, j} & {r, s}}
        pairs[(r, s)] = {
            "F_set": sorted(F),
            "G_set": sorted(G),
            "F_size": len(F),
            "G_size": len(G),
            "F_adjacent_to_center": len(F & nbrs[here]) == len(F),
            "G_adjacent_to_center": len(G & nbrs[here]),
            "F_internal_degree": sorted({len(nbrs[v] & F) for v in F}),
            "G_internal_degree": sorted({len(nbrs[v] & G) for v in G}),
            "G_to_F": sorted({len(nbrs[v] & F) for v in G}),
            "F_to_G": sorted({len(nbrs[v] & G) for v in F}),
        }
    return StructureReport(
        n=n,
        level=m,
        cell=cell,
        new_vertices=new,
        new_subgraph_degrees=sub_deg,
        old_neighbor_counts=old_cnt,
        pairs=pairs,
    )


def graph_to_json(g: ApproxGraph) -> str:
    """Deterministic JSON export of ``g``."""
    doc = {
        "n": g.n,
        "level": g.level,
        "vertices": [format_address(v, g.n) for v in g.vertices],
        "edges": g.edges.tolist(),
        "boundary": np.flatnonzero(g.boundary_mask).tolist(),
    }
    return json.dumps(doc)
