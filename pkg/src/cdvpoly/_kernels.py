"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Two loops dominate runtime: brute-force vertex enumeration over d-subsets of
facet hyperplanes, and the cyclic Jacobi eigensolver. Each has an ``_nb``
implementation compiled with ``@njit`` and an ``_np`` implementation that
computes the same thing with vectorised numpy. ``CDV_NUMBA=0`` (or a missing
numba install) selects the numpy path.
"""

from itertools import combinations
from math import comb

import numpy as np

from . import config

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


PIVOT_TOL = 1e-10


def numba_active():
    return HAVE_NUMBA and config.USE_NUMBA


# ---------------------------------------------------------------------------
# vertex enumeration
# ---------------------------------------------------------------------------


@njit(cache=True)
def _solve_small_nb(A, b, out):
    d = A.shape[0]
    M = A.copy()
    r = b.copy()
    for k in range(d):
        p = k
        best = abs(M[k, k])
        for i in range(k + 1, d):
            if abs(M[i, k]) > best:
                best = abs(M[i, k])
                p = i
        if best < PIVOT_TOL:
            return False
        if p != k:
            for j in range(d):
                tmp = M[k, j]
                M[k, j] = M[p, j]
                M[p, j] = tmp
            tmp = r[k]
            r[k] = r[p]
            r[p] = tmp
        for i in range(k + 1, d):
            f = M[i, k] / M[k, k]
            for j in range(k, d):
                M[i, j] -= f * M[k, j]
            r[i] -= f * r[k]
    for k in range(d - 1, -1, -1):
        s = r[k]
        for j in range(k + 1, d):
            s -= M[k, j] * out[j]
        out[k] = s / M[k, k]
    return True


@njit(cache=True)
def _enumerate_nb(V, x, tol, cap):
    n, d = V.shape
    kept = np.empty((cap, d))
    count = 0
    idx = np.arange(d)
    A = np.empty((d, d))
    b = np.empty(d)
    p = np.empty(d)
    while True:
        for r in range(d):
            for c in range(d):
                A[r, c] = V[idx[r], c]
            b[r] = x[idx[r]]
        if _solve_small_nb(A, b, p):
            feasible = True
            for i in range(n):
                s = 0.0
                for c in range(d):
                    s += V[i, c] * p[c]
                if s > x[i] + tol:
                    feasible = False
                    break
            if feasible:
                dup = False
                for k in range(count):
                    dist2 = 0.0
                    for c in range(d):
                        diff = kept[k, c] - p[c]
                        dist2 += diff * diff
                    if dist2 < tol * tol:
                        dup = True
                        break
                if not dup and count < cap:
                    for c in range(d):
                        kept[count, c] = p[c]
                    count += 1
        # next lexicographic d-subset of range(n)
        i = d - 1
        while i >= 0 and idx[i] == n - d + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, d):
            idx[j] = idx[j - 1] + 1
    return kept[:count]


def _merge_np(points, tol):
    kept = []
    remaining = points
    while len(remaining):
        head = remaining[0]
        kept.append(head)
        far = np.linalg.norm(remaining - head, axis=1) >= tol
        remaining = remaining[far]
    return np.array(kept).reshape(-1, points.shape[1])


def _enumerate_np(V, x, tol, chunk=20000):
    n, d = V.shape
    found = []
    it = combinations(range(n), d)
    while True:
        block = np.fromiter(
            (i for c in _take(it, chunk) for i in c), dtype=np.intp
        ).reshape(-1, d)
        if len(block) == 0:
            break
        A = V[block]
        b = x[block]
        # Same singularity rule as the numba path: partial-pivot LU pivot size.
        ok = _min_pivot(A) >= PIVOT_TOL
        if not ok.any():
            continue
        sol = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
        feas = np.all(sol @ V.T <= x + tol, axis=1)
        if feas.any():
            found.append(sol[feas])
    if not found:
        return np.empty((0, d))
    return _merge_np(np.concatenate(found), tol)


def _take(it, k):
    for _ in range(k):
        try:
            yield next(it)
        except StopIteration:
            return


def _min_pivot(A):
    """Smallest partial-pivoting pivot of each matrix in a stack."""
    M = np.array(A, dtype=float)
    m, d, _ = M.shape
    rows = np.arange(m)
    out = np.full(m, np.inf)
    for k in range(d):
        col = np.abs(M[:, k:, k])
        p = k + np.argmax(col, axis=1)
        piv = col[rows, p - k]
        out = np.minimum(out, piv)
        swap = M[rows, p].copy()
        M[rows, p] = M[:, k]
        M[:, k] = swap
        safe = np.where(piv > 0, M[:, k, k], 1.0)
        f = M[:, k + 1 :, k] / safe[:, None]
        M[:, k + 1 :, :] -= f[:, :, None] * M[:, k, None, :]
    return out


def enumerate_vertices_kernel(unit_normals, heights, tol):
    """All points of ``{p : n_i.p <= h_i}`` cut out by d independent hyperplanes.

    ``unit_normals`` must have unit rows so that ``tol`` is a distance.
    Duplicates closer than ``tol`` are merged, keeping the first found.
    """
    V = np.ascontiguousarray(unit_normals, dtype=float)
    h = np.ascontiguousarray(heights, dtype=float)
    n, d = V.shape
    if numba_active():
        cap = min(comb(n, d), 200000)
        return _enumerate_nb(V, h, float(tol), cap)
    return _enumerate_np(V, h, float(tol))


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver
# ---------------------------------------------------------------------------


@njit(cache=True)
def _jacobi_nb(A, rel_tol, max_sweeps):
    n = A.shape[0]
    a = A.copy()
    v = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = np.sqrt(scale)
    target = rel_tol * scale
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if np.sqrt(2.0 * off) <= target:
            return np.diag(a).copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, max_sweeps, False


def _jacobi_np(A, rel_tol, max_sweeps):
    a = np.array(A, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = rel_tol * np.linalg.norm(a)
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        if np.sqrt(2.0 * np.sum(a[iu] ** 2)) <= target:
            return np.diag(a).copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0)), theta)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v, max_sweeps, False


def jacobi_eigh(A, rel_tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps, converged)`` with eigenvalues
    unsorted, eigenvectors as columns.
    """
    A = np.ascontiguousarray(A, dtype=float)
    if numba_active():
        return _jacobi_nb(A, float(rel_tol), int(max_sweeps))
    return _jacobi_np(A, float(rel_tol), int(max_sweeps))
