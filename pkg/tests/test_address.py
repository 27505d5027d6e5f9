import pytest
from hypothesis import given, strategies as st

from pndecimation.address import (
    VertexAddress,
    canonicalize,
    cell_corners,
    enumerate_vertices,
    format_address,
    is_boundary,
    lift,
    parse_address,
    representations,
    vertex_count,
)
from pndecimation.errors import CapExceededError

from oracles import equivalence_classes, infinite_sequence


@pytest.mark.parametrize(
    "n, prefix, tail, expected",
    [
        (3, [0, 2], 1, ((0, 1), 2)),
        (3, [1, 1], 1, ((1, 1), 1)),
        (4, [3], 0, ((0,), 3)),
    ],
)
def test_canonicalize_examples(n, prefix, tail, expected):
    v = canonicalize(prefix, tail, n)
    assert (v.prefix, v.tail) == expected


def test_canonicalize_rejects_out_of_range():
    with pytest.raises(ValueError):
        canonicalize([0, 3], 1, 3)
    with pytest.raises(ValueError):
        canonicalize([0], -1, 3)


@pytest.mark.parametrize(
    "n, prefix, tail, expected",
    [
        (3, (0,), 1, {((0,), 1), ((1,), 0)}),
        (3, (2, 2), 2, {((2, 2), 2)}),
        (4, (0, 1), 2, {((0, 1), 2), ((0, 2), 1)}),
    ],
)
def test_representations_examples(n, prefix, tail, expected):
    assert representations(canonicalize(prefix, tail, n)) == expected


@pytest.mark.parametrize(
    "v, expected",
    [
        (VertexAddress((1, 1), 1), True),
        (VertexAddress((0, 1), 2), False),
        (VertexAddress((), 0), True),
    ],
)
def test_is_boundary(v, expected):
    assert is_boundary(v) is expected


def test_cell_corners():
    assert cell_corners((), 3) == [VertexAddress((), k) for k in range(3)]
    assert cell_corners((0,), 3) == [canonicalize([0], k, 3) for k in range(3)]
    corners = cell_corners((2, 2), 4)
    assert len(set(corners)) == 4
    assert VertexAddress((2, 2), 2) in corners


@pytest.mark.parametrize("n, m, count", [(3, 1, 6), (2, 3, 9), (4, 1, 10)])
def test_enumerate_examples(n, m, count):
    assert len(enumerate_vertices(n, m)) == count
    assert len(equivalence_classes(n, m)) == count


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_canonical_form_matches_brute_force_classes(n, m):
    if n**m * n > 20000:
        pytest.skip("raw enumeration too large")
    classes = equivalence_classes(n, m)
    verts = enumerate_vertices(n, m)
    assert len(classes) == len(verts) == vertex_count(n, m)
    assert verts == sorted(verts)
    for cls in classes:
        canon = {canonicalize(p, t, n) for p, t in cls}
        assert len(canon) == 1
        (v,) = canon
        # canonical = lexicographically smallest infinite expansion
        best = min(cls, key=lambda s: infinite_sequence(*s, m + 2))
        assert (v.prefix, v.tail) == best
        assert len(cls) == (1 if is_boundary(v) else 2)
        assert representations(v) == set(cls)


@pytest.mark.parametrize("n, m", [(2, 4), (3, 3), (4, 3), (5, 2)])
def test_levels_are_nested(n, m):
    coarse = enumerate_vertices(n, m - 1)
    fine = set(enumerate_vertices(n, m))
    assert all(lift(v, n) in fine for v in coarse)


def test_vertex_cap():
    with pytest.raises(CapExceededError):
        enumerate_vertices(3, 6, cap=100)


symbols = st.integers(min_value=0, max_value=6)


@given(n=st.integers(2, 7), data=st.data())
def test_canonicalize_idempotent(n, data):
    prefix = data.draw(st.lists(st.integers(0, n - 1), max_size=8))
    tail = data.draw(st.integers(0, n - 1))
    v = canonicalize(prefix, tail, n)
    assert canonicalize(v.prefix, v.tail, n) == v
    for p, t in representations(v):
        assert canonicalize(p, t, n) == v


@given(n=st.integers(2, 14), data=st.data())
def test_format_parse_roundtrip(n, data):
    prefix = data.draw(st.lists(st.integers(0, n - 1), max_size=6))
    tail = data.draw(st.integers(0, n - 1))
    v = canonicalize(prefix, tail, n)
    assert parse_address(format_address(v, n), n) == v


def test_address_text_form():
    assert format_address(VertexAddress((0, 1), 2), 3) == "01|2"
    assert format_address(VertexAddress((), 1), 3) == "|1"
    assert format_address(VertexAddress((0, 11), 2), 12) == "0,11|2"
    assert parse_address("0,1|2", 3) == VertexAddress((0, 1), 2)
    with pytest.raises(ValueError):
        parse_address("012", 3)
