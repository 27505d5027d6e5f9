"""Dense eigendecomposition oracle and decimation bookkeeping of full spectra.

The oracle only builds the Dirichlet matrix from the graph and hands it to
LAPACK; it shares no formula with the decimation engine, which is what makes
it usable as ground truth for :func:`verify_decimation`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .address import vertex_count
from .config import oracle_cap
from .decimation import (
    Sign,
    eigenvalue_down,
    eigenvalue_up,
    extend_eigenfunction,
    is_forbidden,
    relative_residual,
    restrict,
)
from .errors import CapExceededError
from .graph import build_graph, dirichlet_matrix

__all__ = [
    "EigenPair",
    "Spectrum",
    "SpectrumEntry",
    "SpectrumReport",
    "CheckResult",
    "VerificationReport",
    "full_spectrum",
    "cluster_eigenvalues",
    "classify_spectrum",
    "verify_decimation",
    "spectrum_csv",
]

CLUSTER_TOL = 1e-8
PARENT_TOL = 1e-7


@dataclass(frozen=True)
class EigenPair:
    lam: float
    vector: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All Dirichlet eigenpairs of one Gamma_m.

    ``vectors[:, k]`` lives on the full vertex set, vanishes on V_0 and has
    unit Euclidean norm over the interior.  ``residuals[k]`` is the absolute
    sup-norm residual of pair ``k``.
    """

    n: int
    level: int
    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        for k in range(len(self)):
            yield EigenPair(float(self.eigenvalues[k]), self.vectors[:, k], float(self.residuals[k]))


@lru_cache(maxsize=32)
def _full_spectrum_cached(n, m, cap):
    if m == 0:
        N = n
        return Spectrum(n, 0, np.empty(0), np.empty((N, 0)), np.empty(0))
    size = vertex_count(n, m) - n
    if size > cap:
        raise CapExceededError(f"interior size {size} of Gamma_{m} (n={n}) exceeds oracle cap {cap}")
    g = build_graph(n, m)
    D = dirichlet_matrix(g)
    w, X = scipy.linalg.eigh(D.matrix)
    R = np.max(np.abs(D.matrix @ X - X * w), axis=0)
    if np.any(R > 1e-9 * (1.0 + w)):
        raise np.linalg.LinAlgError("dense eigensolver residual above 1e-9(1+lambda)")
    V = D.to_graph(X, g.num_vertices)
    for a in (w, V, R):
        a.setflags(write=False)
    return Spectrum(n, m, w, V, R)


def full_spectrum(n: int, m: int, cap: int | None = None) -> Spectrum:
    """Complete Dirichlet spectrum of Gamma_m by dense symmetric eigensolve.

    Eigenvalues are ascending.  Results are cached per ``(n, m)``; the
    returned arrays are read-only.

    Raises
    ------
    CapExceededError
        If the interior has more than ``cap`` vertices (default
        :func:`config.oracle_cap`).
    """
    return _full_spectrum_cached(n, m, oracle_cap() if cap is None else cap)


def cluster_eigenvalues(values, tol: float = CLUSTER_TOL) -> list[tuple[float, int, int]]:
    """Group sorted eigenvalues whose consecutive gaps are ``<= tol``.

    Returns ``(mean, multiplicity, first_index)`` per cluster.
    """
    values = np.asarray(values)
    out = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > tol:
            block = values[start:k]
            out.append((float(block.mean()), k - start, start))
            start = k
    return out


def _forbidden_tag(n, f):
    if f == 2.0:
        return "Forbidden(2)"
    if f == n + 2:
        return "Forbidden(n+2)"
    return "Forbidden(2n)"


@dataclass
class SpectrumEntry:
    index: int
    lam: float
    multiplicity: int
    tag: str
    parent: float | None = None
    sign: str | None = None
    residual: float = 0.0


@dataclass
class SpectrumReport:
    """Clustered spectrum of Gamma_m with one decimation tag per cluster.

    Tags are ``DecimatedMinus``, ``DecimatedPlus``, ``Forbidden(2)``,
    ``Forbidden(n+2)``, ``Forbidden(2n)`` and ``Unmatched``.
    """

    n: int
    level: int
    entries: list = field(default_factory=list)

    @property
    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def count(self, prefix: str) -> int:
        """Total multiplicity of entries whose tag starts with ``prefix``."""
        return sum(e.multiplicity for e in self.entries if e.tag.startswith(prefix))

    def find(self, lam: float, tol: float = 1e-7):
        for e in self.entries:
            if abs(e.lam - lam) <= tol:
                return e
        return None


def classify_spectrum(n: int, m: int, cap: int | None = None) -> SpectrumReport:
    """Tag every eigenvalue of Gamma_m by its relation to Gamma_{m-1}.

    A cluster near ``{2, n+2, 2n}`` is Forbidden; otherwise it is Decimated
    when ``(n+2) lam - lam**2`` lies within 1e-7 of a level-(m-1) eigenvalue,
    the sign being the root of the recursion that reproduces it.
    """
    if m < 1:
        raise ValueError("Gamma_0 has no interior spectrum")
    cur = full_spectrum(n, m, cap)
    prev = full_spectrum(n, m - 1, cap).eigenvalues
    report = SpectrumReport(n=n, level=m)
    for k, (lam, mult, first) in enumerate(cluster_eigenvalues(cur.eigenvalues)):
        res = float(np.max(cur.residuals[first : first + mult]))
        entry = SpectrumEntry(index=k, lam=lam, multiplicity=mult, tag="Unmatched", residual=res)
        f = is_forbidden(n, lam)
        if f is not None:
            entry.tag = _forbidden_tag(n, f)
        else:
            parent = eigenvalue_down(n, lam)
            if prev.size and np.min(np.abs(prev - parent)) <= PARENT_TOL:
                entry.parent = float(prev[np.argmin(np.abs(prev - parent))])
                sign = Sign.PLUS if lam > (n + 2) / 2 else Sign.MINUS
                entry.sign = sign.value
                entry.tag = "DecimatedPlus" if sign is Sign.PLUS else "DecimatedMinus"
        report.entries.append(entry)
    return report


def spectrum_csv(reports) -> str:
    """CSV text for one or more reports, ordered by ``(level, lambda)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "index", "lambda", "multiplicity", "tag", "parent_lambda", "sign", "residual"])
    for rep in sorted(reports, key=lambda r: r.level):
        for e in sorted(rep.entries, key=lambda e: e.lam):
            w.writerow([
                rep.level,
                e.index,
                repr(e.lam),
                e.multiplicity,
                e.tag,
                "" if e.parent is None else repr(e.parent),
                e.sign or "",
                repr(e.residual),
            ])
    return buf.getvalue()


@dataclass
class CheckResult:
    kind: str  # "forward" or "converse"
    n: int
    level: int
    lam: float
    residual: float
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    """Every forward/converse check performed, plus aggregate verdict.

    ``near_n`` lists ``(level, lambda, passed)`` for eigenvalues that sit on
    ``n`` itself, which some statements of the theory also exclude.
    """

    n: int
    max_level: int
    tol: float
    checks: list = field(default_factory=list)
    skipped_levels: list = field(default_factory=list)
    near_n: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def max_residual(self, kind: str) -> float:
        vals = [c.residual for c in self.checks if c.kind == kind]
        return max(vals) if vals else 0.0

    def summary(self) -> dict:
        return {
            "n": self.n,
            "max_level": self.max_level,
            "tol": self.tol,
            "passed": self.passed,
            "forward_checks": sum(c.kind == "forward" for c in self.checks),
            "converse_checks": sum(c.kind == "converse" for c in self.checks),
            "failures": len(self.failures),
            "max_forward_residual": self.max_residual("forward"),
            "max_converse_residual": self.max_residual("converse"),
            "skipped_levels": self.skipped_levels,
            "checks_at_lambda_n": len(self.near_n),
            "checks_at_lambda_n_failed": sum(not ok for _, _, ok in self.near_n),
        }


def _forward_checks(n, m, tol, report):
    g_prev = build_graph(n, m - 1)
    g = build_graph(n, m)
    parents = full_spectrum(n, m - 1)
    for pair in parents:
        for sign in (Sign.MINUS, Sign.PLUS):
            lam = eigenvalue_up(n, pair.lam, sign)
            if is_forbidden(n, lam) is not None:
                continue
            u = extend_eigenfunction(g_prev, g, pair.vector, lam)
            res = relative_residual(g, u, lam)
            ok = res <= tol * (1.0 + lam)
            report.checks.append(CheckResult("forward", n, m, lam, res, ok, f"parent {pair.lam:.12g} sign {sign.value}"))
            if abs(lam - n) < 1e-9 * n:
                report.near_n.append((m, lam, ok))


def _converse_checks(n, m, tol, report):
    g_prev = build_graph(n, m - 1)
    g = build_graph(n, m)
    cur = full_spectrum(n, m)
    prev = full_spectrum(n, m - 1).eigenvalues
    for pair in cur:
        if is_forbidden(n, pair.lam) is not None:
            continue
        parent = eigenvalue_down(n, pair.lam)
        gap = float(np.min(np.abs(prev - parent))) if prev.size else math.inf
        r = restrict(g, g_prev, pair.vector)
        size = float(np.max(np.abs(r)))
        nonzero = size > 1e-6 * float(np.max(np.abs(pair.vector)))
        res = relative_residual(g_prev, r, parent) if nonzero else math.inf
        ok = gap <= PARENT_TOL and nonzero and res <= tol * (1.0 + abs(parent))
        report.checks.append(
            CheckResult("converse", n, m, pair.lam, res, ok, f"parent {parent:.12g} gap {gap:.3g}")
        )
        if abs(pair.lam - n) < 1e-9 * n:
            report.near_n.append((m, pair.lam, ok))


def verify_decimation(n: int, max_m: int, tol: float = 1e-8) -> VerificationReport:
    """Check extension and restriction against the oracle for levels up to ``max_m``.

    Forward: every oracle eigenpair of Gamma_{m-1}, extended with each
    non-forbidden root, must satisfy ``residual <= tol (1 + lam)``.
    Converse: every non-forbidden oracle eigenpair of Gamma_m must restrict
    to a nonzero eigenfunction of Gamma_{m-1} whose eigenvalue is in the
    oracle spectrum.  Levels whose oracle would exceed the cap are skipped
    and listed in ``skipped_levels``.
    """
    report = VerificationReport(n=n, max_level=max_m, tol=tol)
    for m in range(1, max_m + 1):
        try:
            full_spectrum(n, m)
        except CapExceededError:
            report.skipped_levels.append(m)
            continue
        if m >= 2:
            _forward_checks(n, m, tol, report)
        _converse_checks(n, m, tol, report)
    return report
