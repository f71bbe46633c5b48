"""Recover a 3-polytope from a corank-3 Colin de Verdiere matrix.

Pipeline: kernel rows as facet normals, one convex polygon per facet from the
2D Minkowski problem (edge normals and lengths), then breadth-first gluing of
the polygons along shared edges, which fixes the support parameters.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cdv import spectrum
from .errors import ClosingDefect, CorankNot3, InconsistentCycle, UnsupportedDimension
from .hessian import cdv_matrix
from .polytope import build_polytope, hyperplane_frame


@dataclass
class NullspaceRep:
    v: np.ndarray  # n x 3, row i is the vector of vertex i
    basisChoice: np.ndarray  # n x 3 kernel basis (columns)
    residual: float  # max |M v| relative to ||M||


def nullspace_normals(M):
    """Rows of an orthonormal basis of ker M, from the Jacobi eigensolver."""
    M = np.asarray(M, dtype=float)
    spec = spectrum(M)
    if spec.corank > 3:
        raise UnsupportedDimension(
            f"corank {spec.corank}: only 3-dimensional reconstruction is supported"
        )
    if spec.corank != 3:
        raise CorankNot3(spec.corank)
    U = spec.kernel
    scale = max(1.0, float(np.max(np.abs(M))))
    return NullspaceRep(U.copy(), U, float(np.max(np.abs(M @ U))) / scale)


def aligned_nullspace(M, V):
    """Kernel rows expressed in the basis of known normals V (rows then approximate V).

    Any basis of ker M gives rows V A for some invertible A; the polytope built
    from them is a linear image of P(V) with the same matrix. Undoing A makes
    the reconstruction comparable with P itself.
    """
    rep = nullspace_normals(M)
    A, *_ = np.linalg.lstsq(np.asarray(V, dtype=float), rep.v, rcond=None)
    return NullspaceRep(rep.v @ np.linalg.inv(A), rep.basisChoice, rep.residual)


def _tol(rep):
    return 1e-9 * float(np.max(np.linalg.norm(rep.v, axis=1)))


def _projections(v, i, nbrs):
    vi = v[i]
    return {j: v[j] - (v[j] @ vi) / (vi @ vi) * vi for j in nbrs}


def check_conditions(M, G, rep):
    """Nondegeneracy conditions on the nullspace representation.

    1. no v_i is zero and no two coincide;
    2. for every i the projections of the neighbours' vectors onto the plane
       orthogonal to v_i are nonzero, pairwise distinct and span that plane.
    """
    v, tol = rep.v, _tol(rep)
    c1 = []
    for i in range(len(v)):
        if np.linalg.norm(v[i]) <= tol:
            c1.append({"index": i, "reason": "zero"})
        for j in range(i + 1, len(v)):
            if np.linalg.norm(v[i] - v[j]) <= tol:
                c1.append({"index": i, "other": j, "reason": "coincident"})
    c2 = []
    for i in range(len(v)):
        if np.linalg.norm(v[i]) <= tol:
            c2.append({"index": i, "reason": "zero normal"})
            continue
        nbrs = G.neighbors(i)
        proj = _projections(v, i, nbrs)
        for j, p in proj.items():
            if np.linalg.norm(p) <= tol:
                c2.append({"index": i, "neighbor": j, "reason": "zero projection"})
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                if np.linalg.norm(proj[nbrs[a]] - proj[nbrs[b]]) <= tol:
                    c2.append({"index": i, "neighbor": nbrs[a], "other": nbrs[b], "reason": "coincident"})
        B = hyperplane_frame(v[i])
        coords = np.array([B.T @ proj[j] for j in nbrs]).reshape(-1, 2)
        s = np.linalg.svd(coords, compute_uv=False) if len(coords) else np.zeros(0)
        if len(s) < 2 or s[1] <= tol:
            c2.append({"index": i, "reason": "projections do not span the plane"})
    return {
        "condition1": {"pass": not c1, "failures": c1},
        "condition2": {"pass": not c2, "failures": c2},
        "pass": not c1 and not c2,
    }


@dataclass
class FacetPolygon:
    index: int
    frame: np.ndarray  # 3 x 2, (frame_u, frame_w, v_i) right-handed
    neighbors: list  # cyclic order of edges
    normals: np.ndarray  # unit outer edge normals in frame coordinates
    lengths: np.ndarray  # A_ij
    vertices: np.ndarray  # vertex t starts edge t
    closingDefect: float

    def edge_midpoint(self, j):
        t = self.neighbors.index(j)
        return 0.5 * (self.vertices[t] + self.vertices[(t + 1) % len(self.vertices)])

    def area(self):
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def oriented_frame(vi):
    B = hyperplane_frame(vi)
    if np.linalg.det(np.column_stack([B, vi])) < 0:
        B = B[:, ::-1]
    return B


def facet_polygon(M, rep, i, G):
    """Convex polygon in the plane orthogonal to v_i with edge normals v_ij and lengths A_ij."""
    v = rep.v
    if v.shape[1] != 3:
        raise UnsupportedDimension("facet polygons need d = 3")
    nbrs = G.neighbors(i)
    proj = _projections(v, i, nbrs)
    B = oriented_frame(v[i])
    ni = np.linalg.norm(v[i])
    A, U = [], []
    for j in nbrs:
        pn = np.linalg.norm(proj[j])
        # ||v_ij|| = ||v_j|| sin(theta_ij)
        A.append(-M[i, j] * ni * pn)
        U.append(B.T @ proj[j] / pn)
    A, U = np.array(A), np.array(U).reshape(-1, 2)
    defect = float(np.linalg.norm(A @ U)) if len(A) else 0.0
    if len(A) < 3 or np.any(A <= 0) or defect > 1e-9 * max(1.0, float(np.sum(np.abs(A)))):
        raise ClosingDefect(i, defect if len(A) else np.inf)
    order = np.argsort(np.arctan2(U[:, 1], U[:, 0]))
    U, A = U[order], A[order]
    edges = A[:, None] * np.column_stack([-U[:, 1], U[:, 0]])
    verts = np.vstack([np.zeros(2), np.cumsum(edges, axis=0)[:-1]])
    verts -= verts.mean(axis=0)
    return FacetPolygon(i, B, [nbrs[k] for k in order], U, A, verts, defect)


@dataclass
class ReconstructionResult:
    polytope: object
    support: np.ndarray
    supportResidual: float
    matrixResidual: float
    edgeResidual: float
    polygons: dict = field(default_factory=dict)
    placed: dict = field(default_factory=dict)  # facet -> 3D polygon vertices

    def to_json(self):
        return {
            "polytope": self.polytope.to_json(),
            "supportResidual": self.supportResidual,
            "matrixResidual": self.matrixResidual,
            "edgeResidual": self.edgeResidual,
        }


def assemble(M, G, rep, anchor=0, rel_tol=1e-6):
    """Glue the facet polygons into a polytope and recompute its matrix.

    Facet ``anchor`` gets support 1 and is centred on the foot of the
    perpendicular from the origin; every other support is read off a shared
    edge during a breadth-first traversal of G.
    """
    M = np.asarray(M, dtype=float)
    v = rep.v
    n = len(v)
    polys = {i: facet_polygon(M, rep, i, G) for i in range(n)}
    x = np.full(n, np.nan)
    placed = {}
    x[anchor] = 1.0
    centre = v[anchor] / (v[anchor] @ v[anchor])
    placed[anchor] = centre + polys[anchor].vertices @ polys[anchor].frame.T
    support_res = edge_res = 0.0
    queue = deque([anchor])
    seen = {anchor}
    while queue:
        i = queue.popleft()
        Pi = polys[i]
        for j in Pi.neighbors:
            t = Pi.neighbors.index(j)
            k = len(Pi.vertices)
            q = 0.5 * (placed[i][t] + placed[i][(t + 1) % k])
            if j not in seen:
                x[j] = v[j] @ q
                Pj = polys[j]
                mid_local = Pj.edge_midpoint(i)
                placed[j] = q + (Pj.vertices - mid_local) @ Pj.frame.T
                seen.add(j)
                queue.append(j)
            else:
                support_res = max(support_res, abs(v[j] @ q - x[j]))
                Pj = polys[j]
                tj = Pj.neighbors.index(i)
                kj = len(Pj.vertices)
                qj = 0.5 * (placed[j][tj] + placed[j][(tj + 1) % kj])
                edge_res = max(edge_res, float(np.linalg.norm(qj - q)))
    if len(seen) != n:
        raise InconsistentCycle(f"graph is disconnected: reached {len(seen)} of {n} facets")
    scale = max(1.0, float(np.max(np.abs(x))))
    if support_res > rel_tol * scale:
        raise InconsistentCycle(f"support residual {support_res:.3e} exceeds {rel_tol:g} * {scale:.3e}")
    P = build_polytope(v, x)
    M2 = cdv_matrix(P)
    return ReconstructionResult(
        polytope=P,
        support=x,
        supportResidual=float(support_res),
        matrixResidual=float(np.max(np.abs(M2 - M))),
        edgeResidual=edge_res,
        polygons=polys,
        placed=placed,
    )


def reconstruct(M, G):
    rep = nullspace_normals(M)
    return assemble(M, G, rep), rep


def roundtrip_check(P):
    """cdv_matrix -> kernel -> polygons -> polytope, compared with P up to translation."""
    if P.dim != 3:
        raise UnsupportedDimension("round trip is defined for 3-polytopes")
    M = cdv_matrix(P)
    G = P.lattice.dual_graph
    rep = nullspace_normals(M)
    res = assemble(M, G, rep)
    res_al = assemble(M, G, aligned_nullspace(M, P.normals))
    V = P.normals
    diff = res_al.support - P.support
    p, *_ = np.linalg.lstsq(V, diff, rcond=None)
    trans_res = float(np.max(np.abs(diff - V @ p)))
    scale = max(1.0, float(np.max(np.abs(P.support))))
    return {
        "matrixResidual": res.matrixResidual,
        "supportResidual": res.supportResidual,
        "alignedMatrixResidual": res_al.matrixResidual,
        "translationResidual": trans_res,
        "translation": p.tolist(),
        "equalUpToTranslation": trans_res <= 1e-6 * scale,
        "graphMatches": res.polytope.lattice.dual_graph == G,
        "reconstructed": res_al.polytope,
    }
