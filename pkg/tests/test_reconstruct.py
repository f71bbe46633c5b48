import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import subspace_angles

from cdvpoly import build_polytope, cdv_matrix, codim2_volume, cube, facet_volume, roundtrip_check, volume
from cdvpoly.errors import ClosingDefect, CorankNot3, UnsupportedDimension
from cdvpoly.generate import crosspolytope, random_hull, simplex
from cdvpoly.reconstruct import NullspaceRep, aligned_nullspace, assemble, check_conditions, facet_polygon, nullspace_normals


def fixture(P):
    return cdv_matrix(P), P.lattice.dual_graph


def test_cube_kernel_rows():
    P = cube(3)
    M, _ = fixture(P)
    rep = nullspace_normals(M)
    assert rep.residual < 1e-14
    # rows are +-e_k up to a common linear map: v_{2k} = -v_{2k+1}, and they span R^3
    assert np.allclose(rep.v[0::2], -rep.v[1::2], atol=1e-14)
    assert np.linalg.matrix_rank(rep.v) == 3
    assert np.max(subspace_angles(rep.basisChoice, P.normals)) < 1e-7


def test_corank_errors():
    with pytest.raises(CorankNot3):
        nullspace_normals(np.diag([0.0, 0.0, 1.0, -1.0]))
    with pytest.raises(UnsupportedDimension):
        nullspace_normals(cdv_matrix(cube(4)))


def test_conditions():
    M, G = fixture(cube(3))
    rep = nullspace_normals(M)
    assert check_conditions(M, G, rep)["pass"]

    v = rep.v.copy()
    v[1] = 0
    c = check_conditions(M, G, NullspaceRep(v, rep.basisChoice, rep.residual))
    assert not c["condition1"]["pass"] and c["condition1"]["failures"][0]["index"] == 1

    v = rep.v.copy()
    a = v[1] / np.linalg.norm(v[1])
    w = np.cross(a, [0.3, 0.5, 0.7])
    for j in G.neighbors(1):
        # every neighbour lands on span(v_1, w): projections share one line
        v[j] = (1 + j) * w + (j - 2.5) * a
    c = check_conditions(M, G, NullspaceRep(v, rep.basisChoice, rep.residual))
    assert not c["condition2"]["pass"]
    assert any(f["index"] == 1 for f in c["condition2"]["failures"])


def test_cube_facet_polygon():
    P = cube(3)
    M, G = fixture(P)
    rep = aligned_nullspace(M, P.normals)
    poly = facet_polygon(M, rep, 0, G)
    assert poly.lengths == pytest.approx([2, 2, 2, 2])
    assert sorted(poly.neighbors) == [2, 3, 4, 5]
    assert poly.area() == pytest.approx(4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_polygon_area_is_facet_area(seed):
    P = random_hull(3, 9, seed)
    M, G = fixture(P)
    rep = aligned_nullspace(M, P.normals)
    for i in range(P.n):
        poly = facet_polygon(M, rep, i, G)
        # convex, counter-clockwise, edge lengths equal the real edges
        e = np.roll(poly.vertices, -1, axis=0) - poly.vertices
        assert np.all(e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0] > 0)
        assert poly.lengths == pytest.approx([codim2_volume(P, i, j) for j in poly.neighbors])
        assert poly.area() == pytest.approx(facet_volume(P, i), rel=1e-9)


def test_zeroed_entry_breaks_closing():
    M, G = fixture(cube(3))
    rep = nullspace_normals(M)
    M[0, 2] = M[2, 0] = 0.0
    with pytest.raises(ClosingDefect) as e:
        facet_polygon(M, rep, 0, G)
    assert e.value.index == 0


def test_orthonormal_basis_gives_linear_image():
    P = random_hull(3, 9, 6)
    M, G = fixture(P)
    res = assemble(M, G, nullspace_normals(M))
    assert res.matrixResidual < 1e-9 and res.polytope.lattice.dual_graph == G


def test_assemble_cube_and_seeded_hull():
    P = cube(3)
    M, G = fixture(P)
    res = assemble(M, G, aligned_nullspace(M, P.normals))
    assert res.matrixResidual < 1e-8
    V = res.polytope.vertices
    ext = V.max(axis=0) - V.min(axis=0)
    assert volume(res.polytope) == pytest.approx(8)
    assert res.polytope.lattice.dual_graph == G
    # a cube of side 2 in some (rotated) frame: all 12 edges have length 2
    assert all(codim2_volume(res.polytope, i, j) == pytest.approx(2) for i, j in G.edges)
    assert ext.max() <= 2 * np.sqrt(3) + 1e-9

    P = random_hull(3, 9, 3)
    M, G = fixture(P)
    assert assemble(M, G, nullspace_normals(M)).matrixResidual < 1e-6
    assert assemble(M, G, aligned_nullspace(M, P.normals)).matrixResidual < 1e-6


def test_scaling_matrix_shrinks_polytope():
    P = random_hull(3, 8, 5)
    M, G = fixture(P)
    ref = assemble(M, G, aligned_nullspace(M, P.normals))
    small = assemble(M / 4, G, aligned_nullspace(M / 4, P.normals))
    for i, j in G.edges:
        assert codim2_volume(small.polytope, i, j) == pytest.approx(codim2_volume(P, i, j) / 4)
    # M is homogeneous of degree d-2 = 1, so M/4 means x/4 and volume / 4^3
    assert volume(small.polytope) == pytest.approx(volume(ref.polytope) / 64)
    assert volume(ref.polytope) == pytest.approx(volume(P))


@pytest.mark.parametrize(
    "P,tol",
    [(cube(3), 1e-8), (simplex(3), 1e-8), (crosspolytope(3), 1e-6)],
    ids=["cube", "simplex", "octahedron"],
)
def test_roundtrip_fixtures(P, tol):
    r = roundtrip_check(P)
    assert r["matrixResidual"] < tol and r["translationResidual"] < tol
    assert r["equalUpToTranslation"] and r["graphMatches"]


def test_roundtrip_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimension):
        roundtrip_check(cube(4))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(5, 12))
def test_roundtrip_random(seed, n):
    P = random_hull(3, n, seed)
    shift = np.random.default_rng(seed).uniform(-0.2, 0.2, 3)
    P = build_polytope(P.normals, P.support + P.normals @ shift)
    r = roundtrip_check(P)
    assert r["equalUpToTranslation"] and r["graphMatches"]
    assert r["matrixResidual"] < 1e-6
    # same vertex set after the reported translation
    R = r["reconstructed"]
    moved = P.vertices + np.array(r["translation"])
    dist = np.linalg.norm(moved[:, None] - R.vertices[None], axis=2)
    assert len(R.vertices) == len(P.vertices) and np.max(dist.min(axis=1)) < 1e-6
