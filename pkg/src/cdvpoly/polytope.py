"""Polytopes with fixed facet normals, P(x) = {p : v_i . p <= x_i}.

Normals are never normalised on the public surface: the support parameter
``x_i`` equals ``||v_i||`` times the signed distance of facet ``i`` from the
origin, and every formula carries the ``||v_i||`` factors explicitly.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from . import config
from ._kernels import enumerate_vertices_kernel
from .errors import (
    BadParams,
    DegenerateFace,
    DuplicateNormal,
    Empty,
    NotAdjacent,
    OriginNotInterior,
    RedundantFacet,
    Unbounded,
)
from .graph import Graph


@dataclass(frozen=True)
class FaceLattice:
    vertices: np.ndarray
    tight: tuple  # frozenset of facet indices per vertex
    facet_vertices: tuple  # sorted vertex indices per facet
    codim2: dict  # (i, j) with i < j -> vertex indices of F_ij
    dual_graph: Graph


class HPolytope:
    """A validated polytope; construct with :func:`build_polytope`."""

    def __init__(self, normals, support, vertices, tight, tol):
        self.normals = normals
        self.support = support
        self.vertices = vertices
        self.tight = tight
        self.tol = tol
        self.norms = np.linalg.norm(normals, axis=1)
        self._face_cache = {}
        for a in (self.normals, self.support, self.vertices, self.norms):
            a.setflags(write=False)

    @property
    def dim(self):
        return self.normals.shape[1]

    @property
    def n(self):
        return self.normals.shape[0]

    @cached_property
    def facet_sets(self):
        sets = [set() for _ in range(self.n)]
        for k, t in enumerate(self.tight):
            for i in t:
                sets[i].add(k)
        return tuple(frozenset(s) for s in sets)

    @cached_property
    def lattice(self):
        return _build_lattice(self)

    def with_support(self, support):
        return build_polytope(self.normals, support)

    def to_json(self):
        return {
            "dimension": self.dim,
            "normals": self.normals.tolist(),
            "support": self.support.tolist(),
        }

    def __repr__(self):
        return f"HPolytope(d={self.dim}, n={self.n}, vertices={len(self.vertices)})"


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

_BOUNDED_CACHE = {}


def origin_interior(points):
    """True iff the origin is interior to conv(points).

    Solved as an LP: maximise t subject to sum l_i q_i = 0, sum l_i = 1, l_i >= t.
    A positive optimum puts 0 in the relative interior; full rank makes it interior.
    """
    Q = np.asarray(points, dtype=float)
    m, d = Q.shape
    if m < d + 1 or np.linalg.matrix_rank(Q) < d:
        return False
    U = Q / np.linalg.norm(Q, axis=1)[:, None]
    key = U.tobytes()
    if key in _BOUNDED_CACHE:
        return _BOUNDED_CACHE[key]
    # variables: l_1..l_m, t ; minimise -t
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((d + 1, m + 1))
    A_eq[:d, :m] = U.T
    A_eq[d, :m] = 1.0
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1.0
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, 1.0)], method="highs")
    ok = bool(res.status == 0 and -res.fun > 1e-12)
    if len(_BOUNDED_CACHE) > 4096:
        _BOUNDED_CACHE.clear()
    _BOUNDED_CACHE[key] = ok
    return ok


def _affine_dim(points, tol):
    if len(points) <= 1:
        return 0
    c = points - points.mean(axis=0)
    s = np.linalg.svd(c, compute_uv=False)
    return int(np.sum(s > tol))


def build_polytope(normals, support):
    """Validate ``normals`` and ``support`` and return the polytope P(x).

    Raises Unbounded, Empty, DuplicateNormal or RedundantFacet when the system
    does not describe a full-dimensional bounded polytope with n irredundant
    facets.
    """
    V = np.array(normals, dtype=float)
    x = np.array(support, dtype=float)
    if V.ndim != 2 or x.ndim != 1 or V.shape[0] != x.shape[0] or V.shape[0] == 0:
        raise BadParams(f"inconsistent shapes: normals {V.shape}, support {x.shape}")
    n, d = V.shape
    if d < 2:
        raise BadParams("dimension must be at least 2")
    if not (np.all(np.isfinite(V)) and np.all(np.isfinite(x))):
        raise BadParams("non-finite input")
    norms = np.linalg.norm(V, axis=1)
    if np.any(norms == 0):
        raise BadParams(f"zero normal at index {int(np.argmin(norms))}")
    U = V / norms[:, None]
    for i in range(n):
        close = np.nonzero(np.linalg.norm(U[i + 1 :] - U[i], axis=1) < 1e-12)[0]
        if len(close):
            raise DuplicateNormal(i, i + 1 + int(close[0]))
    if n < d + 1 or not origin_interior(V):
        raise Unbounded("the normals do not positively span R^d; a recession direction exists")
    h = x / norms
    tol = config.tol_geom(V, x)
    pts = enumerate_vertices_kernel(U, h, tol)
    if len(pts) == 0:
        raise Empty("no vertices: the inequality system is infeasible")
    if _affine_dim(pts, tol) < d:
        raise Empty("the solution set has empty interior")
    dist = np.abs(pts @ U.T - h)
    tight = tuple(frozenset(np.nonzero(row <= tol)[0].tolist()) for row in dist)
    P = HPolytope(V, x, pts, tight, tol)
    for i, verts in enumerate(P.facet_sets):
        if len(verts) < d or _affine_dim(pts[sorted(verts)], tol) != d - 1:
            raise RedundantFacet(i)
    return P


def enumerate_vertices(P):
    """Vertices of P with the index set of facets tight at each."""
    return [(P.vertices[k].copy(), P.tight[k]) for k in range(len(P.vertices))]


def _build_lattice(P):
    d, tol = P.dim, P.tol
    fs = P.facet_sets
    codim2 = {}
    for i in range(P.n):
        for j in range(i + 1, P.n):
            s = fs[i] & fs[j]
            if len(s) < d - 1:
                continue
            adim = _affine_dim(P.vertices[sorted(s)], tol)
            if adim > d - 2:
                raise DegenerateFace(f"facets {i} and {j} share a face of dimension {adim}")
            if adim == d - 2:
                codim2[(i, j)] = tuple(sorted(s))
    return FaceLattice(
        vertices=P.vertices,
        tight=P.tight,
        facet_vertices=tuple(tuple(sorted(s)) for s in fs),
        codim2=codim2,
        dual_graph=Graph(P.n, tuple(sorted(codim2))),
    )


def face_lattice(P):
    return P.lattice


# ---------------------------------------------------------------------------
# volumes
# ---------------------------------------------------------------------------


def hyperplane_frame(normal):
    """Orthonormal basis (columns) of ``normal``'s orthogonal complement.

    Gram-Schmidt over the standard basis with the axis of the largest
    ``|normal|`` component dropped, so the frame is deterministic.
    """
    u = np.asarray(normal, dtype=float)
    u = u / np.sqrt(u @ u)
    k = len(u)
    keep = [m for m in range(k) if m != int(np.argmax(np.abs(u)))]
    W = np.eye(k)[:, keep] - np.outer(u, u[keep])
    for c in range(k - 1):
        w = W[:, c]
        if c:
            w -= W[:, :c] @ (W[:, :c].T @ w)
        w /= np.sqrt(w @ w)
    return W


def _polygon_area(local):
    c = local.mean(axis=0)
    p = local[np.argsort(np.arctan2(local[:, 1] - c[1], local[:, 0] - c[0]))]
    q = np.concatenate([p[1:], p[:1]])
    return 0.5 * abs(np.sum(p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]))


def _face_volume(P, verts, origin, frame):
    """Volume of the face spanned by ``verts`` in its own orthonormal frame.

    ``origin`` lies on the face's affine hull and ``frame`` spans its direction
    space. Sub-faces are found among the remaining facets and the pyramid
    formula is applied with apex at ``origin``.
    """
    cache = P._face_cache
    if verts in cache:
        return cache[verts]
    k = frame.shape[1]
    local = (P.vertices[sorted(verts)] - origin) @ frame
    if k == 0:
        vol = 1.0
    elif k == 1:
        vol = float(local.max() - local.min())
    elif k == 2:
        vol = float(_polygon_area(local))
    else:
        # facets of the face are the maximal proper intersections with facets of P
        cands = {}
        for j, fj in enumerate(P.facet_sets):
            s = verts & fj
            if len(s) >= k and s != verts and s not in cands:
                cands[s] = j
        subs = {}
        for s in sorted(cands, key=len, reverse=True):
            if not any(s < t for t in subs):
                subs[s] = cands[s]
        total = 0.0
        for s, j in subs.items():
            nj = frame.T @ P.normals[j]
            nrm = np.sqrt(nj @ nj)
            unit = nj / nrm
            height = (P.support[j] - P.normals[j] @ origin) / nrm
            if s in cache:
                total += height * cache[s]
                continue
            sub_origin = origin + frame @ (height * unit)
            sub_frame = frame @ hyperplane_frame(unit)
            total += height * _face_volume(P, s, sub_origin, sub_frame)
        vol = total / k
    cache[verts] = vol
    return vol


def _facet_frame(P, i):
    unit = P.normals[i] / P.norms[i]
    return (P.support[i] / P.norms[i]) * unit, hyperplane_frame(unit)


def volume(P):
    """d-dimensional volume by the pyramid recursion over facets."""
    key = "volume"
    if key in P._face_cache:
        return P._face_cache[key]
    if P.dim == 2:
        vol = float(_polygon_area(P.vertices))
    else:
        h = P.support / P.norms
        vol = sum(h[i] * facet_volume(P, i) for i in range(P.n)) / P.dim
    P._face_cache[key] = vol
    return vol


def facet_volume(P, i):
    if not 0 <= i < P.n:
        raise BadParams(f"no facet {i}")
    o, B = _facet_frame(P, i)
    return _face_volume(P, P.facet_sets[i], o, B)


def codim2_volume(P, i, j):
    """(d-2)-volume of F_i intersect F_j; raises NotAdjacent if they do not share one."""
    key = (min(i, j), max(i, j))
    if i == j or key not in P.lattice.codim2:
        raise NotAdjacent(i, j)
    o, B = _facet_frame(P, i)
    nj = B.T @ P.normals[j]
    nrm = np.linalg.norm(nj)
    unit = nj / nrm
    height = (P.support[j] - P.normals[j] @ o) / nrm
    verts = P.facet_sets[i] & P.facet_sets[j]
    return _face_volume(P, verts, o + B @ (height * unit), B @ hyperplane_frame(unit))


def polar_from_points(points):
    """Polar dual of conv(points) as the H-polytope {p : q.p <= 1}."""
    Q = np.array(points, dtype=float)
    if Q.ndim != 2:
        raise BadParams("points must be a 2D array")
    if not origin_interior(Q):
        raise OriginNotInterior("the origin is not interior to the convex hull of the points")
    return build_polytope(Q, np.ones(len(Q)))


def translate_support(P, p):
    """Support vector of P translated by ``p``: x + V p."""
    return P.support + P.normals @ np.asarray(p, dtype=float)
