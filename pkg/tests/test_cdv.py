import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cdvpoly import Graph, cdv_matrix, check_cdv, cube, gap_bound, kernel_match, spectrum
from cdvpoly.cdv import strong_arnold_operator
from cdvpoly.errors import CorankMismatch, SizeMismatch
from cdvpoly.generate import box, crosspolytope, random_hull, simplex


def test_diag_spectrum():
    s = spectrum(np.diag([-1.0, 0.0, 2.0]))
    assert s.eigenvalues == pytest.approx([-1, 0, 2])
    assert s.corank == 1


def test_cube_and_square_spectra():
    assert spectrum(cdv_matrix(cube(3))).eigenvalues == pytest.approx([-8, 0, 0, 0, 4, 4], abs=1e-12)
    assert spectrum(cdv_matrix(cube(2))).eigenvalues == pytest.approx([-2, 0, 0, 2], abs=1e-12)


def test_spectrum_rejects_bad_input():
    with pytest.raises(SizeMismatch):
        spectrum(np.zeros((2, 3)))
    with pytest.raises(SizeMismatch):
        spectrum(np.array([[0.0, 1.0], [2.0, 0.0]]))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (7, 7), elements=st.floats(-10, 10)))
def test_jacobi_matches_lapack(A):
    S = A + A.T
    s = spectrum(S)
    ref = np.linalg.eigvalsh(S)
    scale = max(1.0, np.abs(ref).max())
    assert np.allclose(s.eigenvalues, ref, atol=1e-10 * scale)
    assert np.allclose(s.eigenvectors.T @ s.eigenvectors, np.eye(7), atol=1e-10)
    assert np.allclose(S @ s.eigenvectors, s.eigenvectors * s.eigenvalues, atol=1e-9 * scale)


def test_cube_certificate():
    P = cube(3)
    M = cdv_matrix(P)
    r = check_cdv(M, P.lattice.dual_graph)
    assert r.m1.ok and r.m2.ok and r.m3.ok and r.corank == 3
    km = kernel_match(M, P.normals)
    assert km["pass"] and km["angle"] < 1e-9


def test_simplex_m3_vacuous():
    P = simplex(3)
    r = check_cdv(cdv_matrix(P), P.lattice.dual_graph)
    assert r.m3.ok and r.m3.details["variables"] == 0


def test_m1_fails_when_edge_removed():
    P = cube(3)
    r = check_cdv(cdv_matrix(P), P.lattice.dual_graph.without_edge(0, 2))
    assert not r.m1.ok and r.m1.details["offending"][0][:2] == [0, 2]


def test_m2_and_m3_negative():
    # identity: no negative eigenvalue; zero matrix with empty graph: MX = 0 for all X
    assert not check_cdv(np.eye(3), Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])).m2.ok
    assert not check_cdv(np.diag([-1.0, -2.0, 1.0]), Graph.from_edges(3, [])).m2.ok
    r = check_cdv(np.zeros((3, 3)), Graph.from_edges(3, []))
    assert not r.m3.ok and r.m3.details["nullity"] == 3


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 1000))
def test_arnold_operator_is_mx(seed):
    rng = np.random.default_rng(seed)
    n = 6
    A = rng.standard_normal((n, n))
    M = A + A.T
    G = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    op, pairs = strong_arnold_operator(M, G)
    c = rng.standard_normal(len(pairs))
    X = np.zeros((n, n))
    for k, (i, j) in enumerate(pairs):
        X[i, j] = X[j, i] = c[k]
    assert np.allclose(op @ c, (M @ X).ravel())


def test_kernel_match_4cube_and_perturbation():
    P = cube(4)
    assert kernel_match(cdv_matrix(P), P.normals)["pass"]
    P3 = cube(3)
    M = cdv_matrix(P3)
    M[0, 2] += 1e-3
    M[2, 0] += 1e-3
    with pytest.raises(CorankMismatch):
        kernel_match(M, P3.normals)


def test_gap_bound_cube_box_simplex():
    g = gap_bound(cube(3), spectrum(cdv_matrix(cube(3))))
    assert g["bound"] == pytest.approx(-8) and g["lambda1"] == pytest.approx(-8)
    assert g["equality"] and g["c"] == pytest.approx(0.25)

    B = box(3, [1, 1, 2])
    g = gap_bound(B, spectrum(cdv_matrix(B)))
    oracle = np.linalg.eigvalsh(cdv_matrix(B))[0]
    assert g["bound"] == pytest.approx(-8)
    assert g["lambda1"] == pytest.approx(oracle, abs=1e-10)
    assert g["lambda1"] < -8 - 1e-3 and not g["equality"] and g["holds"]

    S = simplex(3)
    assert gap_bound(S, spectrum(cdv_matrix(S)))["equality"]


@pytest.mark.parametrize("P", [crosspolytope(3), random_hull(4, 9, 1), random_hull(5, 10, 2)])
def test_corank_equals_dimension(P):
    M = cdv_matrix(P)
    r = check_cdv(M, P.lattice.dual_graph)
    assert r.ok and r.corank == P.dim
    assert kernel_match(M, P.normals)["angle"] < 1e-7
