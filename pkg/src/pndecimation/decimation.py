"""Spectral decimation: eigenfunction extension and the eigenvalue recursion.

An eigenfunction of Gamma_{m-1} with eigenvalue ``lam_prev`` extends to an
eigenfunction of Gamma_m with eigenvalue ``lam`` whenever

    lam**2 - (n + 2) * lam + lam_prev == 0

and ``lam`` avoids ``{2, n + 2, 2n}``.  On every parent cell with corner values
``u_0 .. u_{n-1}`` (sum ``S``) the new vertex labelled ``{r, s}`` receives

    ((4 - lam) (u_r + u_s) + 2 (S - u_r - u_s)) / ((2 - lam) (n + 2 - lam)).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .address import vertex_count
from .config import oracle_cap
from .errors import (
    ConvergenceError,
    DiscriminantError,
    ForbiddenEigenvalueError,
    LevelMismatchError,
    OracleMismatchError,
)
from .graph import ApproxGraph, build_graph, laplacian_apply, lift_indices

__all__ = [
    "Sign",
    "DecimationTrace",
    "LimitResult",
    "forbidden_values",
    "is_forbidden",
    "eigenvalue_up",
    "eigenvalue_down",
    "extend_eigenfunction",
    "harmonic_extend",
    "restrict",
    "decimate",
    "fractal_eigenvalue",
    "renormalized_value",
    "parse_signs",
    "relative_residual",
]

FORBIDDEN_RTOL = 1e-9


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"


def parse_signs(signs) -> list[Sign]:
    """Accept ``"+--"``, a list of :class:`Sign`, or a list of ``"+"/"-"``."""
    if isinstance(signs, str):
        signs = signs.strip().replace("−", "-")
        bad = set(signs) - {"+", "-"}
        if bad:
            raise ValueError(f"signs must match [+-]*, got {signs!r}")
    return [s if isinstance(s, Sign) else Sign(s) for s in signs]


def forbidden_values(n: int) -> tuple[float, ...]:
    """The values where the extension formula breaks down, ``{2, n+2, 2n}``."""
    return tuple(sorted({2.0, float(n + 2), float(2 * n)}))


def is_forbidden(n: int, lam: float, rtol: float = FORBIDDEN_RTOL):
    """Return the forbidden value near ``lam`` (within ``rtol*max(1, f)``), else None."""
    for f in forbidden_values(n):
        if abs(lam - f) < rtol * max(1.0, f):
            return f
    return None


def eigenvalue_up(n: int, lam_prev: float, sign) -> float:
    """Root of ``x**2 - (n+2) x + lam_prev = 0`` selected by ``sign``.

    The minus root is computed as ``2 lam_prev / ((n+2) + sqrt(D))`` which
    avoids cancellation for small ``lam_prev``.
    """
    sign = Sign(sign) if not isinstance(sign, Sign) else sign
    a = n + 2
    disc = a * a - 4.0 * lam_prev
    if disc < 0:
        raise DiscriminantError(
            f"no real child of {lam_prev} for n={n}: discriminant {disc} < 0"
        )
    root = math.sqrt(disc)
    if sign is Sign.PLUS:
        return (a + root) / 2.0
    return 2.0 * lam_prev / (a + root)


def eigenvalue_down(n: int, lam: float) -> float:
    """Parent eigenvalue ``(n+2) lam - lam**2``."""
    return (n + 2) * lam - lam * lam


def _new_vertex_values(n, lam, ur, us, total):
    # (4-lam)(ur+us) + 2(total-ur-us) == (2-lam)(ur+us) + 2 total
    return ((2.0 - lam) * (ur + us) + 2.0 * total) / ((2.0 - lam) * (n + 2.0 - lam))


def _check_pair(g_prev, g):
    if g_prev.n != g.n or g.level != g_prev.level + 1:
        raise LevelMismatchError(
            f"need graphs of consecutive levels, got {g_prev.level} and {g.level}"
        )


def extend_eigenfunction(
    g_prev: ApproxGraph, g: ApproxGraph, u, lam: float, *, guard: bool = True
) -> np.ndarray:
    """Extend ``u`` from V_{m-1} to V_m using the eigenvalue ``lam`` of level m.

    Old vertices keep their values; each new vertex is filled from the
    corners of its parent cell.  ``u`` may be 2-D (one function per column).

    Raises
    ------
    ForbiddenEigenvalueError
        If ``guard`` and ``lam`` is within the guard tolerance of
        ``{2, n+2, 2n}``.
    """
    _check_pair(g_prev, g)
    n = g.n
    u = np.asarray(u, dtype=np.float64)
    if u.shape[0] != g_prev.num_vertices:
        raise LevelMismatchError("u is not defined on the coarser graph")
    hit = is_forbidden(n, lam)
    if guard and hit is not None:
        raise ForbiddenEigenvalueError(
            f"lambda={lam} is forbidden (near {hit}) for n={n}", level=g.level, value=lam
        )
    out = np.zeros((g.num_vertices,) + u.shape[1:])
    out[lift_indices(g_prev, g)] = u

    corners = u[g_prev.cells]  # (cells, n, ...)
    total = corners.sum(axis=1)
    # new vertex {r, s} of parent p is corner s of child cell p*n + r
    x = g.cells.reshape(-1, n, n)
    for r in range(n):
        for s in range(r + 1, n):
            out[x[:, r, s]] = _new_vertex_values(
                n, lam, corners[:, r], corners[:, s], total
            )
    return out


def harmonic_extend(g_prev: ApproxGraph, g: ApproxGraph, u) -> np.ndarray:
    """Extension with ``lam = 0``: new vertices get ``2/(n+2)`` of the two
    nearest corners and ``1/(n+2)`` of each remaining one."""
    return extend_eigenfunction(g_prev, g, u, 0.0)


def restrict(g: ApproxGraph, g_prev: ApproxGraph, u) -> np.ndarray:
    """Values of ``u`` (on V_m) at the points of V_{m-1}."""
    _check_pair(g_prev, g)
    u = np.asarray(u, dtype=np.float64)
    if u.shape[0] != g.num_vertices:
        raise LevelMismatchError("u is not defined on the finer graph")
    return u[lift_indices(g_prev, g)]


def relative_residual(g: ApproxGraph, u, lam: float) -> float:
    """``max|Delta u - lam u| / max|u|`` over interior vertices."""
    u = np.asarray(u, dtype=np.float64)
    r = laplacian_apply(g, u) - lam * u
    r[g.boundary_mask] = 0.0
    scale = np.max(np.abs(u[~g.boundary_mask])) if g.level else 0.0
    if scale == 0.0:
        return 0.0 if not np.any(r) else math.inf
    return float(np.max(np.abs(r)) / scale)


def renormalized_value(n: int, m: int, lam: float) -> float:
    """``(n/2) (n+2)**m lam``."""
    return 0.5 * n * (n + 2) ** m * lam


@dataclass
class DecimationTrace:
    """Eigenvalue genealogy from ``seed_level`` upwards.

    ``lambdas[k]`` and ``renormalized[k]`` belong to level ``seed_level + k``.
    ``signs`` is the explicit schedule (minus beyond its end).  When an
    extension was requested, ``function`` holds the result on the deepest
    graph built and ``residuals[k]`` the relative residual at each level.
    """

    n: int
    seed_level: int
    seed_lambda: float
    signs: list
    lambdas: list = field(default_factory=list)
    renormalized: list = field(default_factory=list)
    limit: float | None = None
    valid: bool = True
    forbidden_hit: int | None = None
    residuals: list | None = None
    function: np.ndarray | None = field(default=None, repr=False)

    @property
    def levels(self) -> list[int]:
        return list(range(self.seed_level, self.seed_level + len(self.lambdas)))

    def to_dict(self) -> dict:
        doc = {
            "n": self.n,
            "seed_level": self.seed_level,
            "seed_lambda": self.seed_lambda,
            "signs": "".join(s.value for s in self.signs),
            "lambdas": list(self.lambdas),
            "renormalized": list(self.renormalized),
            "limit": self.limit,
            "valid": self.valid,
            "forbidden_hit": self.forbidden_hit,
        }
        if self.residuals is not None:
            doc["residuals"] = list(self.residuals)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _sign_at(signs, k):
    return signs[k] if k < len(signs) else Sign.MINUS


def decimate(
    n: int,
    seed_level: int,
    seed_lambda: float,
    signs="",
    target_level: int | None = None,
    seed_function=None,
    *,
    check_seed: bool = True,
    raise_on_forbidden: bool = True,
) -> DecimationTrace:
    """Run the eigenvalue recursion from ``(seed_level, seed_lambda)``.

    ``signs[k]`` picks the root used for level ``seed_level + k + 1``.  The
    seed itself is never checked against the forbidden set; every value it
    produces is.  With ``seed_function`` (an array on Gamma_{seed_level}) the
    function is carried along and residuals are measured at every level.

    When ``check_seed`` is set and the seed level is small enough for the
    dense oracle, ``seed_lambda`` must match an oracle eigenvalue.
    """
    signs = parse_signs(signs)
    if target_level is None:
        target_level = seed_level + len(signs)
    if target_level < seed_level:
        raise ValueError("target_level must be >= seed_level")
    if check_seed and seed_level >= 1:
        _check_seed(n, seed_level, seed_lambda)

    trace = DecimationTrace(n=n, seed_level=seed_level, seed_lambda=seed_lambda, signs=signs)
    lam = float(seed_lambda)
    trace.lambdas.append(lam)
    trace.renormalized.append(renormalized_value(n, seed_level, lam))

    g_prev = u = None
    if seed_function is not None:
        g_prev = build_graph(n, seed_level)
        u = np.asarray(seed_function, dtype=np.float64)
        if u.shape[0] != g_prev.num_vertices:
            raise LevelMismatchError("seed function is not defined on the seed graph")
        trace.residuals = [relative_residual(g_prev, u, lam)]

    for k, m in enumerate(range(seed_level + 1, target_level + 1)):
        lam = eigenvalue_up(n, lam, _sign_at(signs, k))
        if is_forbidden(n, lam) is not None:
            trace.valid = False
            trace.forbidden_hit = m
            if raise_on_forbidden:
                raise ForbiddenEigenvalueError(
                    f"level {m}: lambda={lam} is forbidden for n={n}", level=m, value=lam
                )
            break
        trace.lambdas.append(lam)
        trace.renormalized.append(renormalized_value(n, m, lam))
        if u is not None:
            g = build_graph(n, m)
            u = extend_eigenfunction(g_prev, g, u, lam)
            trace.residuals.append(relative_residual(g, u, lam))
            g_prev = g
    trace.function = u
    return trace


def _check_seed(n, level, lam):
    if vertex_count(n, level) - n > oracle_cap():
        return
    from .spectrum import full_spectrum

    evals = full_spectrum(n, level).eigenvalues
    if evals.size == 0 or np.min(np.abs(evals - lam)) > 1e-7 * max(1.0, abs(lam)):
        raise OracleMismatchError(
            f"{lam} is not a Dirichlet eigenvalue of Gamma_{level} for n={n}"
        )


@dataclass
class LimitResult:
    """Outcome of :func:`fractal_eigenvalue`."""

    value: float
    achieved_tol: float
    levels_used: int
    converged: bool
    monotone: bool
    trace: DecimationTrace


def fractal_eigenvalue(
    n: int,
    seed_level: int,
    seed_lambda: float,
    signs="",
    tol: float = 1e-10,
    max_level: int = 200,
    *,
    precision: int | None = None,
    check_seed: bool = False,
) -> LimitResult:
    """Limit of ``(n/2) (n+2)**m lam_m`` along the sign schedule.

    The explicit ``signs`` are applied first, then the minus root until two
    successive renormalized values differ by at most ``tol`` relative.
    ``precision`` (decimal digits) switches the iteration to mpmath.

    Raises
    ------
    ConvergenceError
        If ``max_level`` is reached first.
    ForbiddenEigenvalueError
        If a produced eigenvalue is forbidden.
    """
    signs = parse_signs(signs)
    if check_seed and seed_level >= 1:
        _check_seed(n, seed_level, seed_lambda)
    trace = DecimationTrace(n=n, seed_level=seed_level, seed_lambda=seed_lambda, signs=signs)

    if precision is not None:
        import mpmath

        ctx = mpmath.mp.clone()
        ctx.dps = precision
        lam = ctx.mpf(seed_lambda)
        a = ctx.mpf(n + 2)

        def up(x, sign):
            root = ctx.sqrt(a * a - 4 * x)
            return (a + root) / 2 if sign is Sign.PLUS else 2 * x / (a + root)

        def scale(m, x):
            return ctx.mpf(n) / 2 * a**m * x
    else:
        lam = float(seed_lambda)

        def up(x, sign):
            return eigenvalue_up(n, x, sign)

        def scale(m, x):
            return renormalized_value(n, m, x)

    r = scale(seed_level, lam)
    trace.lambdas.append(float(lam))
    trace.renormalized.append(float(r))
    monotone = True
    achieved = math.inf
    m = seed_level
    k = 0
    while m < max_level:
        m += 1
        lam = up(lam, _sign_at(signs, k))
        if is_forbidden(n, float(lam)) is not None:
            trace.valid = False
            trace.forbidden_hit = m
            raise ForbiddenEigenvalueError(
                f"level {m}: lambda={float(lam)} is forbidden for n={n}", level=m, value=float(lam)
            )
        r_new = scale(m, lam)
        trace.lambdas.append(float(lam))
        trace.renormalized.append(float(r_new))
        past_signs = k >= len(signs)
        k += 1
        if past_signs:
            if r_new < r:
                monotone = False
            achieved = float(abs(r_new - r) / abs(r)) if r != 0 else float(abs(r_new))
            if achieved <= tol:
                trace.limit = float(r_new)
                return LimitResult(
                    value=float(r_new),
                    achieved_tol=achieved,
                    levels_used=m,
                    converged=True,
                    monotone=monotone,
                    trace=trace,
                )
        r = r_new
    raise ConvergenceError(
        f"renormalized sequence did not settle to {tol} by level {max_level} "
        f"(last relative change {achieved})"
    )
