"""Lovasz's matrix for a 3-polytope Q and its rigidity interpretation.

Q is given by its vertices ``v_i`` with the origin in its interior. The polar
dual Q* = {p : v_i . p <= 1} supplies the dual vertices ``w_f`` (one per face
``f`` of Q) and the face structure of Q.
"""

from dataclasses import dataclass, field

import numpy as np

from .cdv import spectrum
from .errors import DegenerateFace, DegenerateTetrahedron, NonParallelResidual, NotDimension3
from .graph import Graph
from .hessian import cdv_matrix
from .polytope import hyperplane_frame, polar_from_points


@dataclass
class LovaszResult:
    m: np.ndarray
    dualVertices: dict  # face index -> w_f
    faces: dict  # face index -> vertex indices of Q on that face
    skeleton: Graph
    orientation: dict = field(default_factory=dict)  # (i, j) -> (f, g) with w_f - w_g = M_ij v_i x v_j


def _as_points(Q):
    Q = np.array(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[1] != 3:
        raise NotDimension3(f"expected points in R^3, got array of shape {Q.shape}")
    return Q


def lovasz_matrix(Q):
    """Matrix M from w_f - w_g = M_ij (v_i x v_j) and sum_j M_ij v_j = 0."""
    Q = _as_points(Q)
    P = polar_from_points(Q)
    n, tol = len(Q), P.tol
    M = np.zeros((n, n))
    orient = {}
    for (i, j), verts in P.lattice.codim2.items():
        if len(verts) != 2:
            raise DegenerateFace(f"dual edge of {i}{j} has {len(verts)} endpoints")
        f, g = verts
        diff = P.vertices[f] - P.vertices[g]
        c = np.cross(Q[i], Q[j])
        mij = (diff @ c) / (c @ c)
        resid = np.linalg.norm(diff - mij * c)
        if resid > tol:
            raise NonParallelResidual(f"edge {i}{j}: w_f - w_g off v_i x v_j by {resid:.3e}")
        if mij > 0:
            f, g, mij = g, f, -mij
        M[i, j] = M[j, i] = mij
        orient[(i, j)] = (f, g)
    for i in range(n):
        vp = M[i] @ Q
        M[i, i] = -(vp @ Q[i]) / (Q[i] @ Q[i]) + 0.0
        resid = np.linalg.norm(vp + M[i, i] * Q[i])
        if resid > tol * max(1.0, np.abs(M[i]) @ np.linalg.norm(Q, axis=1)):
            raise NonParallelResidual(f"vertex {i}: v_i' not parallel to v_i (residual {resid:.3e})")
    return LovaszResult(
        m=M,
        dualVertices={k: P.vertices[k].copy() for k in range(len(P.vertices))},
        faces={k: tuple(sorted(P.tight[k])) for k in range(len(P.vertices))},
        skeleton=P.lattice.dual_graph,
        orientation=orient,
    )


def compare_lovasz_hessian(Q):
    """Max entrywise gap between Lovasz's matrix and minus the Hessian of vol(Q*)."""
    Q = _as_points(Q)
    lov = lovasz_matrix(Q)
    return float(np.max(np.abs(lov.m - cdv_matrix(polar_from_points(Q)))))


# ---------------------------------------------------------------------------
# radial deformation of the pyramids over a triangulated boundary
# ---------------------------------------------------------------------------


def tetra_dihedrals(L):
    """Dihedral angles of a tetrahedron from its 4x4 matrix of edge lengths.

    ``D[i, j]`` is the interior angle at edge ij, obtained from the spherical
    law of cosines on the link of vertex i.
    """
    D = np.zeros((4, 4))
    for i in range(4):
        others = [k for k in range(4) if k != i]
        cosg = {}
        for a in range(3):
            for b in range(a + 1, 3):
                j, k = others[a], others[b]
                c = (L[i, j] ** 2 + L[i, k] ** 2 - L[j, k] ** 2) / (2 * L[i, j] * L[i, k])
                if not -1 < c < 1:
                    raise DegenerateTetrahedron(f"triangle ({i},{j},{k}) violates the triangle inequality")
                cosg[(j, k)] = cosg[(k, j)] = c
        for j in others:
            k, m = [o for o in others if o != j]
            cjk, cjm, ckm = cosg[(j, k)], cosg[(j, m)], cosg[(k, m)]
            cd = (ckm - cjk * cjm) / np.sqrt((1 - cjk**2) * (1 - cjm**2))
            if not -1 < cd < 1:
                raise DegenerateTetrahedron("edge lengths do not span a tetrahedron")
            D[i, j] = np.arccos(cd)
    return D


def face_cycles(Q):
    """Faces of Q as counter-clockwise vertex cycles (seen from outside)."""
    Q = _as_points(Q)
    P = polar_from_points(Q)
    cycles = []
    for k in range(len(P.vertices)):
        w = P.vertices[k]
        idx = sorted(P.tight[k])
        B = hyperplane_frame(w)
        if np.linalg.det(np.column_stack([B, w])) < 0:
            B = B[:, ::-1]
        loc = (Q[idx] - Q[idx].mean(axis=0)) @ B
        order = [idx[t] for t in np.argsort(np.arctan2(loc[:, 1], loc[:, 0]))]
        s = order.index(min(order))
        cycles.append(order[s:] + order[:s])
    return cycles, P.lattice.dual_graph


def fan_triangulation(cycles):
    """Triangulate each face cycle by diagonals from its lowest-index vertex."""
    tris = []
    for cyc in cycles:
        a = cyc[0]
        for t in range(1, len(cyc) - 1):
            tris.append((a, cyc[t], cyc[t + 1]))
    return tris


@dataclass
class RadialState:
    q: np.ndarray
    r: np.ndarray
    triangulation: list
    omega: np.ndarray
    kappa: np.ndarray
    edgeLengths: dict  # boundary edge (i, j) -> length, diagonals included
    outerDihedrals: dict  # boundary edge (i, j) -> pi - interior dihedral
    diagonals: frozenset

    def schlafli_functional(self):
        """S(r) = sum r_i kappa_i + sum over boundary edges of l_e theta_e."""
        return float(self.r @ self.kappa) + sum(
            self.edgeLengths[e] * self.outerDihedrals[e] for e in self.edgeLengths
        )


def cone_angles(Q, r, _topology=None):
    """Total angles around the radial edges after changing their lengths to ``r``.

    Boundary edge lengths stay those of Q; each pyramid over a triangle of the
    fan triangulation is rebuilt from its six edge lengths.
    """
    Q = _as_points(Q)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DegenerateTetrahedron("radial lengths must be positive")
    cycles, G = _topology or face_cycles(Q)
    tris = fan_triangulation(cycles)
    n = len(Q)
    omega = np.zeros(n)
    interior = {}
    lengths = {}
    for a, b, c in tris:
        verts = (a, b, c)
        L = np.zeros((4, 4))
        for s, i in enumerate(verts, start=1):
            L[0, s] = L[s, 0] = r[i]
            for t, j in enumerate(verts, start=1):
                if s < t:
                    L[s, t] = L[t, s] = np.linalg.norm(Q[i] - Q[j])
        D = tetra_dihedrals(L)
        for s, i in enumerate(verts, start=1):
            omega[i] += D[0, s]
        for s, t in ((1, 2), (2, 3), (1, 3)):
            i, j = verts[s - 1], verts[t - 1]
            e = (min(i, j), max(i, j))
            interior[e] = interior.get(e, 0.0) + D[s, t]
            lengths[e] = L[s, t]
    diag = frozenset(e for e in lengths if not G.has_edge(*e))
    return RadialState(
        q=Q,
        r=r,
        triangulation=tris,
        omega=omega,
        kappa=2 * np.pi - omega,
        edgeLengths=lengths,
        outerDihedrals={e: np.pi - a for e, a in interior.items()},
        diagonals=diag,
    )


def rigidity_check(Q, step=1e-5, n_points=5, seed=0, spread=0.02):
    """Compare d omega_i / d r_j with the rescaled Lovasz matrix and check Schlafli.

    Returns a dict with the analytic matrix ``R``, its finite-difference
    counterpart, the maximum deviation, the Schlafli residual at the base
    point and at ``n_points`` random nearby points (draws whose pyramids do
    not exist are redrawn and counted), and the corank of R.
    """
    Q = _as_points(Q)
    lov = lovasz_matrix(Q)
    norms = np.linalg.norm(Q, axis=1)
    R = lov.m * np.outer(norms, norms)
    topo = face_cycles(Q)
    n = len(Q)

    def omega(r):
        return cone_angles(Q, r, topo).omega

    def S(r):
        return cone_angles(Q, r, topo).schlafli_functional()

    E = np.eye(n) * step
    R_fd = np.column_stack([(omega(norms + E[j]) - omega(norms - E[j])) / (2 * step) for j in range(n)])

    def schlafli_residual(r):
        grad = np.array([(S(r + E[i]) - S(r - E[i])) / (2 * step) for i in range(n)])
        return float(np.max(np.abs(grad - cone_angles(Q, r, topo).kappa)))

    rng = np.random.default_rng(seed)
    base_res = schlafli_residual(norms)
    pts_res, rejected = [], 0
    # flat pyramids can be pushed through their base; redraw such points
    while len(pts_res) < n_points and rejected < 50 * n_points:
        try:
            pts_res.append(schlafli_residual(norms * (1 + rng.uniform(-spread, spread, n))))
        except DegenerateTetrahedron:
            rejected += 1
    spec = spectrum(R)
    base = cone_angles(Q, norms, topo)
    return {
        "R": R,
        "R_fd": R_fd,
        "maxDeviation": float(np.max(np.abs(R_fd - R))),
        "baseKappaMax": float(np.max(np.abs(base.kappa))),
        "schlafliBase": base_res,
        "schlafliPoints": pts_res,
        "rejectedPoints": rejected,
        "schlafliResidual": max([base_res] + pts_res),
        "corank": spec.corank,
        "eigenvalues": spec.eigenvalues,
    }
