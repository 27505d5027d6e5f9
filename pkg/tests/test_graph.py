import json
import math

import networkx as nx
import numpy as np
import pytest

from pndecimation.address import cell_words, vertex_count
from pndecimation.graph import (
    build_graph,
    dirichlet_matrix,
    energy,
    energy_product,
    graph_to_json,
    laplacian_apply,
    renormalized_energy,
    structure_report,
)
from pndecimation.errors import LevelMismatchError

from oracles import path_dirichlet_eigenvalues


def test_gasket_level_one():
    g = build_graph(3, 1)
    assert g.num_vertices == 6
    assert g.num_edges == 9
    assert sorted(g.degrees.tolist()) == [2, 2, 2, 4, 4, 4]


def test_interval_is_a_path():
    g = build_graph(2, 2)
    G = nx.Graph(g.edges.tolist())
    assert nx.is_isomorphic(G, nx.path_graph(5))


def test_tetrahedral_level_one_octahedron():
    g = build_graph(4, 1)
    assert (g.num_vertices, g.num_edges) == (10, 24)
    sub = nx.Graph(g.edges.tolist()).subgraph(g.interior.tolist())
    assert nx.is_isomorphic(sub, nx.octahedral_graph())


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_degree_and_edge_laws(n, m):
    g = build_graph(n, m)
    assert g.num_vertices == vertex_count(n, m)
    assert g.num_edges == n**m * n * (n - 1) // 2
    assert np.all(g.degrees[g.boundary_mask] == n - 1)
    assert g.boundary_mask.sum() == n
    if m >= 1:
        assert np.all(g.degrees[~g.boundary_mask] == 2 * (n - 1))
    assert nx.is_connected(nx.Graph(g.edges.tolist()))


def test_laplacian_constant_is_harmonic():
    g = build_graph(4, 2)
    out = laplacian_apply(g, np.full(g.num_vertices, 3.7))
    assert np.allclose(out, 0.0, atol=1e-13)


def test_laplacian_unit_bump():
    g = build_graph(3, 1)
    k = g.interior[0]
    u = np.zeros(g.num_vertices)
    u[k] = 1.0
    out = laplacian_apply(g, u)
    assert out[k] == 4.0
    others = [j for j in g.interior if j != k]
    assert all(out[j] == -1.0 for j in others)
    assert np.all(out[g.boundary_mask] == 0.0)


def test_laplacian_path_eigenfunction():
    g = build_graph(2, 2)
    u = np.array([0.0, 1.0, 0.0, -1.0, 0.0])  # path order 0, 1/4, 1/2, 3/4, 1
    coords = [sum(s / 2 ** (i + 1) for i, s in enumerate(v.prefix + (v.tail,) * 40)) for v in g.vertices]
    u_graph = u[np.argsort(np.argsort(coords))]
    out = laplacian_apply(g, u_graph)
    assert np.allclose(out[g.interior], 2 * u_graph[g.interior])


def test_laplacian_length_mismatch():
    with pytest.raises(LevelMismatchError):
        laplacian_apply(build_graph(3, 1), np.zeros(5))


def test_dirichlet_gasket_level_one():
    D = dirichlet_matrix(build_graph(3, 1))
    assert np.array_equal(D.matrix, 5 * np.eye(3) - np.ones((3, 3)))
    assert np.allclose(np.linalg.eigvalsh(D.matrix), [2, 5, 5])


def test_dirichlet_small_cases():
    assert dirichlet_matrix(build_graph(2, 1)).matrix.tolist() == [[2.0]]
    D = dirichlet_matrix(build_graph(2, 3)).matrix
    assert D.shape == (7, 7)
    assert np.allclose(np.linalg.eigvalsh(D), path_dirichlet_eigenvalues(3))
    with pytest.raises(ValueError):
        dirichlet_matrix(build_graph(3, 0))


@pytest.mark.parametrize("n, m", [(3, 2), (4, 2), (5, 2), (6, 1)])
def test_dirichlet_invariants(n, m):
    g = build_graph(n, m)
    D = dirichlet_matrix(g)
    A = D.matrix
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 2 * (n - 1))
    assert np.trace(A) == 2 * (n - 1) * (g.num_vertices - n)
    assert np.linalg.eigvalsh(A)[0] > 0
    sparse_form = dirichlet_matrix(g, dense=False).matrix
    assert np.array_equal(sparse_form.toarray(), A)


def test_energy_examples():
    g = build_graph(2, 1)
    assert energy(g, np.ones(3)) == 0.0
    u = np.zeros(3)
    u[g.interior] = 1.0
    assert energy(g, u) == 2.0


@pytest.mark.parametrize("n, m", [(2, 3), (3, 2), (4, 2), (6, 2)])
def test_energy_is_laplacian_pairing(n, m):
    rng = np.random.default_rng(n * 10 + m)
    g = build_graph(n, m)
    for _ in range(20):
        u = rng.normal(size=g.num_vertices)
        v = rng.normal(size=g.num_vertices)
        v[g.boundary_mask] = 0.0
        lhs = energy_product(g, u, v)
        rhs = float(np.dot(laplacian_apply(g, u)[g.interior], v[g.interior]))
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        assert energy(g, u) >= 0
        assert energy(g, u) == pytest.approx(energy_product(g, u, u), rel=1e-14)


def test_energy_stacked_columns():
    g = build_graph(3, 2)
    U = np.random.default_rng(0).normal(size=(g.num_vertices, 4))
    assert np.allclose(energy(g, U), [energy(g, U[:, k]) for k in range(4)])


def test_renormalized_energy():
    assert renormalized_energy(3, 1, 5) == pytest.approx(25 / 3)
    assert renormalized_energy(2, 2, 1) == 4
    assert renormalized_energy(7, 0, 1.25) == 1.25


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("m", [1, 2, 3])
def test_structure_counts(n, m):
    g = build_graph(n, m)
    for word in cell_words(n, m - 1):
        rep = structure_report(g, word)
        assert len(rep.new_vertices) == n * (n - 1) // 2
        assert set(rep.new_subgraph_degrees.tolist()) == {2 * (n - 2)}
        assert set(rep.old_neighbor_counts.tolist()) == {2}
        for rec in rep.pairs.values():
            assert rec["F_size"] == 2 * (n - 2)
            assert rec["G_size"] == (n - 2) * (n - 3) // 2
            assert rec["F_adjacent_to_center"] and rec["G_adjacent_to_center"] == 0
            if n > 3:
                assert rec["G_to_F"] == [4]
                assert rec["G_internal_degree"] == [2 * (n - 4)]
            # measured, not the bullet-list wording: two K_{n-2} joined by a matching
            assert rec["F_internal_degree"] == [n - 2]
            assert rec["F_to_G"] == [n - 3]
        if n > 5:
            break  # one cell per level is enough for the larger alphabets


def test_structure_small_cases():
    rep = structure_report(build_graph(4, 1), ())
    G = nx.Graph(build_graph(4, 1).edges.tolist())
    for rec in rep.pairs.values():
        assert nx.is_isomorphic(G.subgraph(rec["F_set"]), nx.cycle_graph(4))
        assert rec["G_size"] == 1
    assert nx.is_isomorphic(G.subgraph(rep.new_vertices.tolist()), nx.octahedral_graph())

    assert all(rec["G_size"] == 0 for rec in structure_report(build_graph(3, 2), (1,)).pairs.values())

    g5 = build_graph(5, 1)
    G5 = nx.Graph(g5.edges.tolist())
    for rec in structure_report(g5, ()).pairs.values():
        assert nx.is_isomorphic(G5.subgraph(rec["F_set"]), nx.circular_ladder_graph(3))


def test_structure_report_level_check():
    with pytest.raises(LevelMismatchError):
        structure_report(build_graph(3, 2), ())


def test_graph_json():
    g = build_graph(3, 1)
    doc = json.loads(graph_to_json(g))
    assert doc["n"] == 3 and doc["level"] == 1
    assert doc["vertices"][0] == "0|0"
    assert len(doc["edges"]) == 9
    assert doc["edges"] == sorted(doc["edges"])
    assert doc["boundary"] == np.flatnonzero(g.boundary_mask).tolist()
    assert graph_to_json(g) == graph_to_json(build_graph(3, 1))
