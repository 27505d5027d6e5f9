"""Symbolic addresses of the points of V_m.

A point of V_m is written ``a_0 ... a_{m-1} k k k ...``: a finite prefix word
of length ``m`` followed by a tail symbol repeated forever.  Tail swaps
``w b c c c ... ~ w c b b b ...`` identify points, so every non-boundary
point has two spellings at each level.  The canonical one is the spelling
whose infinite symbol sequence is lexicographically smaller.

The alphabet size ``n`` is passed alongside addresses; it is never stored in
them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import vertex_cap
from .errors import CapExceededError

__all__ = [
    "VertexAddress",
    "canonicalize",
    "representations",
    "is_boundary",
    "cell_corners",
    "cell_words",
    "enumerate_vertices",
    "vertex_count",
    "lift",
    "format_address",
    "parse_address",
]


@dataclass(frozen=True, order=True)
class VertexAddress:
    """A point ``prefix + tail tail tail ...`` of V_m with ``m = len(prefix)``.

    Instances built through :func:`canonicalize` are canonical, so equality
    of values is equality of points at a fixed level.
    """

    prefix: tuple[int, ...]
    tail: int

    @property
    def level(self) -> int:
        return len(self.prefix)

    def __str__(self):
        return format_address(self)


def _check_symbols(symbols, n):
    for s in symbols:
        if not 0 <= s < n:
            raise ValueError(f"symbol {s} outside alphabet [0, {n - 1}]")


def _split(prefix, tail):
    """Return ``(head, q, j)`` with ``prefix == head + (q,) + (tail,) * j``.

    ``q`` is ``None`` when the prefix consists only of the tail symbol.
    """
    j = 0
    m = len(prefix)
    while j < m and prefix[m - 1 - j] == tail:
        j += 1
    if j == m:
        return (), None, j
    return prefix[: m - 1 - j], prefix[m - 1 - j], j


def canonicalize(prefix, tail: int, n: int) -> VertexAddress:
    """Canonical address of the point ``prefix + tail tail ...``.

    Examples
    --------
    >>> canonicalize([0, 2], 1, 3)
    VertexAddress(prefix=(0, 1), tail=2)
    >>> canonicalize([3], 0, 4)
    VertexAddress(prefix=(0,), tail=3)
    """
    prefix = tuple(int(s) for s in prefix)
    tail = int(tail)
    _check_symbols(prefix + (tail,), n)
    head, q, j = _split(prefix, tail)
    if q is None or q < tail:
        return VertexAddress(prefix, tail)
    # w q p^j p... ~ w p q^j q...; the second starts with the smaller symbol
    return VertexAddress(head + (tail,) + (q,) * j, q)


def is_boundary(v: VertexAddress) -> bool:
    """True iff ``v`` is one of the fixed points ``k k k ...`` forming V_0."""
    return all(s == v.tail for s in v.prefix)


def representations(v: VertexAddress) -> set[tuple[tuple[int, ...], int]]:
    """All ``(prefix, tail)`` spellings of ``v`` at its level.

    One spelling for boundary points, two otherwise.
    """
    head, q, j = _split(v.prefix, v.tail)
    if q is None:
        return {(v.prefix, v.tail)}
    return {(v.prefix, v.tail), (head + (v.tail,) + (q,) * j, q)}


def cell_corners(word, n: int) -> list[VertexAddress]:
    """Canonical addresses of the ``n`` corners of the cell indexed by ``word``."""
    return [canonicalize(word, k, n) for k in range(n)]


def cell_words(n: int, m: int):
    """Iterate the ``n**m`` words of length ``m`` in lexicographic order.

    The position of a word in this order is its base-``n`` value, so the
    children of cell ``p`` at the next level are ``p*n + b``.
    """
    return itertools.product(range(n), repeat=m)


def vertex_count(n: int, m: int) -> int:
    """``|V_m| = n + n (n^m - 1) / 2``."""
    return n + n * (n**m - 1) // 2


def enumerate_vertices(n: int, m: int, cap: int | None = None) -> list[VertexAddress]:
    """Sorted canonical addresses of V_m."""
    if n < 2 or m < 0:
        raise ValueError("need n >= 2 and m >= 0")
    cap = vertex_cap() if cap is None else cap
    count = vertex_count(n, m)
    if count > cap:
        raise CapExceededError(f"|V_{m}| = {count} exceeds cap {cap}")
    seen = set()
    for word in cell_words(n, m):
        seen.update(cell_corners(word, n))
    return sorted(seen)


def lift(v: VertexAddress, n: int) -> VertexAddress:
    """The same point re-expressed one level deeper."""
    return canonicalize(v.prefix + (v.tail,), v.tail, n)


def format_address(v: VertexAddress, n: int | None = None) -> str:
    """Text form ``"01|2"``; symbols are comma separated when ``n > 10``."""
    if n is not None and n > 10:
        head = ",".join(str(s) for s in v.prefix)
    elif any(s > 9 for s in v.prefix) or v.tail > 9:
        head = ",".join(str(s) for s in v.prefix)
    else:
        head = "".join(str(s) for s in v.prefix)
    return f"{head}|{v.tail}"


def parse_address(text: str, n: int) -> VertexAddress:
    """Inverse of :func:`format_address`; the result is canonicalized."""
    if "|" not in text:
        raise ValueError(f"address {text!r} lacks the '|' tail separator")
    head, tail = text.strip().split("|", 1)
    if head == "":
        prefix = []
    elif "," in head or n > 10:
        prefix = [int(s) for s in head.split(",")]
    else:
        prefix = [int(s) for s in head]
    return canonicalize(prefix, int(tail), n)

