"""Euclidean realization of P^n as the self-similar set K_n in R^{n-1}.

``f_i(x) = (x + x_i) / 2`` for anchor points ``x_0 .. x_{n-1}`` in general
position.  The point ``a_0 .. a_{m-1} k k k ...`` maps to
``f_{a_0} o ... o f_{a_{m-1}}(x_k)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .address import VertexAddress, format_address
from .graph import ApproxGraph, build_graph

__all__ = [
    "EmbeddingConfig",
    "EmbeddedPoint",
    "PointCloud",
    "regular_simplex",
    "contraction",
    "embed_vertex",
    "embed_graph",
    "hausdorff_dimension",
    "export_point_cloud",
]


@dataclass(frozen=True, eq=False)
class EmbeddingConfig:
    """Anchor points ``anchors[i] = x_i``, shape ``(n, n - 1)``."""

    anchors: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.anchors, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != a.shape[0] - 1:
            raise ValueError(f"need n points in R^(n-1), got shape {a.shape}")
        if a.shape[0] > 1 and np.linalg.matrix_rank(a[1:] - a[0]) != a.shape[0] - 1:
            raise ValueError("anchor points lie in a common hyperplane")
        a.setflags(write=False)
        object.__setattr__(self, "anchors", a)

    @property
    def n(self) -> int:
        return self.anchors.shape[0]

    @classmethod
    def from_file(cls, path):
        """Read anchors from a whitespace-delimited text file, one point per row."""
        return cls(np.loadtxt(path, ndmin=2))


@dataclass(frozen=True, eq=False)
class EmbeddedPoint:
    coordinates: np.ndarray
    source: VertexAddress


def regular_simplex(n: int) -> EmbeddingConfig:
    """Unit-edge regular simplex centred at the origin.

    The rows of the Helmert matrix span the sum-zero hyperplane, so the
    scaled basis vectors ``e_i / sqrt(2)`` expressed in them form the simplex.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    H = -scipy.linalg.helmert(n)
    return EmbeddingConfig(H.T / math.sqrt(2.0) + 0.0)


def contraction(cfg: EmbeddingConfig, i: int, x) -> np.ndarray:
    return (np.asarray(x, dtype=np.float64) + cfg.anchors[i]) / 2.0


def _compose(cfg, prefix, tail):
    p = cfg.anchors[tail].copy()
    for a in reversed(prefix):
        p = (p + cfg.anchors[a]) / 2.0
    return p


def embed_vertex(v: VertexAddress, cfg: EmbeddingConfig) -> EmbeddedPoint:
    """Coordinates of ``v``, composing contractions right-to-left from ``x_tail``."""
    if v.tail >= cfg.n or any(s >= cfg.n for s in v.prefix):
        raise ValueError("address uses symbols outside the embedding's alphabet")
    return EmbeddedPoint(_compose(cfg, v.prefix, v.tail), v)


def embed_graph(g: ApproxGraph, cfg: EmbeddingConfig) -> np.ndarray:
    """Coordinates of every vertex of ``g``, shape ``(num_vertices, n - 1)``."""
    if cfg.n != g.n:
        raise ValueError("embedding and graph disagree on n")
    return np.array([_compose(cfg, v.prefix, v.tail) for v in g.vertices])


def hausdorff_dimension(n: int) -> float:
    """``log n / log 2``: n copies scaled by one half."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return math.log(n) / math.log(2.0)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Columnar vertex data plus an edge list, in graph vertex order."""

    addresses: list
    coordinates: np.ndarray
    values: np.ndarray | None
    edges: list

    def header(self) -> list[str]:
        cols = ["address"] + [f"c{k + 1}" for k in range(self.coordinates.shape[1])]
        if self.values is not None:
            cols.append("value")
        return cols

    def rows(self):
        for k, addr in enumerate(self.addresses):
            row = [addr] + [repr(float(c)) for c in self.coordinates[k]]
            if self.values is not None:
                row.append(repr(float(self.values[k])))
            yield row

    def to_columns(self) -> str:
        """Whitespace-delimited text with a ``#`` header line."""
        lines = ["# " + " ".join(self.header())]
        lines.extend(" ".join(r) for r in self.rows())
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        w.writerows(self.rows())
        return buf.getvalue()

    def edges_text(self) -> str:
        lines = ["# source target"]
        lines.extend(f"{a} {b}" for a, b in self.edges)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        doc = {
            "columns": self.header(),
            "addresses": self.addresses,
            "coordinates": self.coordinates.tolist(),
            "edges": [list(e) for e in self.edges],
        }
        if self.values is not None:
            doc["values"] = self.values.tolist()
        return doc


def export_point_cloud(
    n: int,
    m: int,
    cfg: EmbeddingConfig | None = None,
    values=None,
    graph: ApproxGraph | None = None,
) -> PointCloud:
    """Coordinates of V_m with an optional function attached, plus Gamma_m edges."""
    g = graph if graph is not None else build_graph(n, m)
    cfg = cfg if cfg is not None else regular_simplex(n)
    if values is not None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (g.num_vertices,):
            raise ValueError("values must have one entry per vertex")
    addrs = [format_address(v, n) for v in g.vertices]
    return PointCloud(
        addresses=addrs,
        coordinates=embed_graph(g, cfg),
        values=values,
        edges=[(addrs[i], addrs[j]) for i, j in g.edges],
    )
