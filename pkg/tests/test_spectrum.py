import math

import numpy as np
import pytest

import pndecimation.decimation as decimation
from pndecimation.errors import CapExceededError
from pndecimation.graph import build_graph, dirichlet_matrix
from pndecimation.spectrum import (
    classify_spectrum,
    cluster_eigenvalues,
    full_spectrum,
    spectrum_csv,
    verify_decimation,
)

from oracles import gaussian_logdet, jacobi_eigenvalues, path_dirichlet_eigenvalues


def test_gasket_level_one():
    spec = full_spectrum(3, 1)
    assert np.allclose(spec.eigenvalues, [2, 5, 5], atol=1e-12)


def test_interval_spectra():
    assert np.allclose(full_spectrum(2, 3).eigenvalues, path_dirichlet_eigenvalues(3), atol=1e-13)
    assert full_spectrum(2, 1).eigenvalues.tolist() == pytest.approx([2.0])


@pytest.mark.parametrize("n, m", [(3, 2), (4, 2), (5, 1)])
def test_dense_solver_agrees_with_jacobi(n, m):
    A = dirichlet_matrix(build_graph(n, m)).matrix
    assert np.allclose(full_spectrum(n, m).eigenvalues, jacobi_eigenvalues(A), atol=1e-10)


@pytest.mark.parametrize("n, m", [(2, 4), (3, 3), (4, 2), (5, 2), (6, 2)])
def test_oracle_self_checks(n, m):
    g = build_graph(n, m)
    spec = full_spectrum(n, m)
    w, V = spec.eigenvalues, spec.vectors
    assert np.sum(w) == pytest.approx(2 * (n - 1) * (g.num_vertices - n), rel=1e-12)
    logdet = gaussian_logdet(dirichlet_matrix(g).matrix)
    assert np.sum(np.log(w)) == pytest.approx(logdet, rel=1e-6)
    assert np.all(w > 0) and np.all(w <= 4 * (n - 1) + 1e-12)
    assert np.all(spec.residuals <= 1e-9 * (1 + w))
    assert np.all(V[g.boundary_mask] == 0.0)
    gram = V.T @ V
    assert np.allclose(gram, np.eye(len(w)), atol=1e-10)
    assert len(list(spec)) == len(w)


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        full_spectrum(3, 4, cap=50)


def test_cluster():
    out = cluster_eigenvalues([1.0, 1.0 + 1e-10, 2.0, 3.0, 3.0])
    assert [(round(v, 6), k, s) for v, k, s in out] == [(1.0, 2, 0), (2.0, 1, 2), (3.0, 2, 3)]


def test_classify_gasket_level_one():
    rep = classify_spectrum(3, 1)
    assert rep.find(5.0).tag == "Forbidden(n+2)"
    assert rep.find(5.0).multiplicity == 2
    assert rep.find(2.0).tag in ("Forbidden(2)", "Unmatched")
    assert rep.total_multiplicity == 3


def test_classify_gasket_level_two():
    rep = classify_spectrum(3, 2)
    for lam in ((5 - math.sqrt(17)) / 2, (5 + math.sqrt(17)) / 2):
        e = rep.find(lam)
        assert e is not None and e.parent == pytest.approx(2.0)
    assert rep.count("Unmatched") == 0
    assert rep.total_multiplicity == 12


def test_classify_interval():
    rep = classify_spectrum(2, 2)
    tags = [(round(e.lam, 12), e.tag, e.parent) for e in rep.entries]
    assert tags[0][:2] == (round(2 - math.sqrt(2), 12), "DecimatedMinus")
    assert tags[1][:2] == (2.0, "Forbidden(2)")
    assert tags[2][:2] == (round(2 + math.sqrt(2), 12), "DecimatedPlus")
    assert tags[0][2] == pytest.approx(2.0) and tags[2][2] == pytest.approx(2.0)


@pytest.mark.parametrize("n, m", [(2, 4), (3, 4), (4, 3), (5, 3)])
def test_every_non_forbidden_eigenvalue_has_a_parent(n, m):
    rep = classify_spectrum(n, m)
    assert rep.count("Unmatched") == 0
    assert rep.total_multiplicity == build_graph(n, m).num_vertices - n


def test_interval_fully_decimated():
    for m in range(1, 5):
        rep = classify_spectrum(2, m)
        assert rep.count("Unmatched") == 0
        assert rep.count("Forbidden") == 1  # the single newborn 2 at each level


def test_spectrum_csv_layout():
    text = spectrum_csv([classify_spectrum(2, 2), classify_spectrum(2, 1)])
    lines = text.splitlines()
    assert lines[0] == "level,index,lambda,multiplicity,tag,parent_lambda,sign,residual"
    assert [l.split(",")[0] for l in lines[1:]] == ["1", "2", "2", "2"]
    assert lines[2].split(",")[4] == "DecimatedMinus" and lines[2].split(",")[6] == "-"


@pytest.mark.parametrize("n, max_m", [(3, 4), (5, 3), (2, 4)])
def test_verify_passes(n, max_m):
    rep = verify_decimation(n, max_m, 1e-8)
    assert rep.passed, rep.failures[:3]
    assert rep.skipped_levels == []


def test_verify_skips_levels_over_cap(monkeypatch):
    monkeypatch.setenv("PN_ORACLE_CAP", "40")
    rep = verify_decimation(3, 4)
    assert rep.skipped_levels == [4]
    assert rep.passed


def test_verify_detects_faulty_formula(monkeypatch):
    good = decimation._new_vertex_values

    def faulty(n, lam, ur, us, total):
        return good(n + 1, lam, ur, us, total)

    monkeypatch.setattr(decimation, "_new_vertex_values", faulty)
    rep = verify_decimation(3, 3, 1e-8)
    assert not rep.passed
    assert all(c.kind == "forward" for c in rep.failures)
