"""Certification of the Colin de Verdiere properties (M1)-(M3) and the spectral bounds."""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import subspace_angles

from . import config
from ._kernels import jacobi_eigh
from .errors import CorankMismatch, NoConvergence, SizeMismatch
from .polytope import facet_volume, volume


@dataclass
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns, same order
    corank: int
    tolRank: float
    sweeps: int = 0

    @property
    def kernel(self):
        return self.eigenvectors[:, np.abs(self.eigenvalues) <= self.tolRank]

    def counts(self):
        """(#positive, #zero, #negative) at the rank tolerance."""
        w, t = self.eigenvalues, self.tolRank
        return int(np.sum(w > t)), int(np.sum(np.abs(w) <= t)), int(np.sum(w < -t))


def spectrum(M, max_sweeps=100):
    """Full symmetric eigendecomposition by cyclic Jacobi rotations."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SizeMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.array_equal(M, M.T):
        raise SizeMismatch("matrix is not exactly symmetric")
    w, Q, sweeps, ok = jacobi_eigh(M, 1e-12, max_sweeps)
    if not ok:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    order = np.argsort(w, kind="stable")
    w, Q = w[order], Q[:, order]
    # fix the sign of each eigenvector: largest-magnitude entry positive
    lead = np.argmax(np.abs(Q), axis=0)
    Q = Q * np.where(Q[lead, np.arange(len(w))] < 0, -1.0, 1.0)
    tol = config.TOL_RANK_FACTOR * max(1.0, float(np.max(np.abs(w), initial=0.0)))
    corank = int(np.sum(np.abs(w) <= tol))
    return Spectrum(w, Q, corank, tol, sweeps)


@dataclass
class CheckResult:
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"pass": self.ok, **self.details}


@dataclass
class CdVReport:
    m1: CheckResult
    m2: CheckResult
    m3: CheckResult
    corank: int
    spectrum: Spectrum
    kernelMatch: dict = None
    gap: dict = None

    @property
    def ok(self):
        parts = [self.m1.ok, self.m2.ok, self.m3.ok]
        if self.kernelMatch is not None:
            parts.append(self.kernelMatch["pass"])
        if self.gap is not None:
            parts.append(self.gap["holds"])
        return all(parts)

    def to_json(self):
        return {
            "pass": self.ok,
            "m1": self.m1.to_json(),
            "m2": self.m2.to_json(),
            "m3": self.m3.to_json(),
            "corank": self.corank,
            "eigenvalues": self.spectrum.eigenvalues.tolist(),
            "kernelAngle": None if self.kernelMatch is None else self.kernelMatch["angle"],
            "kernelMatch": self.kernelMatch,
            "gap": self.gap,
            "tolerances": {"tolRank": self.spectrum.tolRank, **config.tolerances()},
        }


def strong_arnold_operator(M, G):
    """Matrix of X -> MX on symmetric X supported on the non-edges of G.

    One column per non-edge {i, j}: X = E_ij + E_ji, flattened row-major.
    """
    n = M.shape[0]
    pairs = G.non_edges()
    A = np.zeros((n * n, len(pairs)))
    for c, (i, j) in enumerate(pairs):
        MX = np.zeros((n, n))
        MX[:, j] = M[:, i]
        MX[:, i] = M[:, j]
        A[:, c] = MX.ravel()
    return A, pairs


def check_m1(M, G):
    bad = []
    n = M.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if G.has_edge(i, j):
                if not M[i, j] < 0:
                    bad.append([i, j, float(M[i, j])])
            elif M[i, j] != 0:
                bad.append([i, j, float(M[i, j])])
    return CheckResult(not bad, {"offending": bad})


def check_m2(spec):
    neg = spec.eigenvalues[spec.eigenvalues < -spec.tolRank]
    simple = len(neg) == 1 and (
        len(spec.eigenvalues) == 1 or spec.eigenvalues[1] - spec.eigenvalues[0] > spec.tolRank
    )
    return CheckResult(
        len(neg) == 1 and simple,
        {"negativeCount": int(len(neg)), "lambda1": float(spec.eigenvalues[0]), "simple": bool(simple)},
    )


def check_m3(M, G):
    A, pairs = strong_arnold_operator(M, G)
    if not pairs:
        return CheckResult(True, {"nullity": 0, "variables": 0, "sigmaMin": None})
    s = np.linalg.svd(A, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(M))))
    thresh = 1e-8 * scale
    nullity = int(np.sum(s <= thresh)) + max(0, len(pairs) - len(s))
    return CheckResult(
        nullity == 0,
        {"nullity": nullity, "variables": len(pairs), "sigmaMin": float(s.min())},
    )


def check_cdv(M, G, spec=None):
    """Check (M1), (M2) and (M3) of ``M`` against graph ``G``."""
    M = np.asarray(M, dtype=float)
    if M.shape != (G.n, G.n):
        raise SizeMismatch(f"matrix is {M.shape}, graph has {G.n} vertices")
    spec = spec or spectrum(M)
    return CdVReport(check_m1(M, G), check_m2(spec), check_m3(M, G), spec.corank, spec)


def kernel_match(M, V, spec=None):
    """Largest principal angle between ker M and the column space of V."""
    V = np.asarray(V, dtype=float)
    spec = spec or spectrum(M)
    d = V.shape[1]
    if spec.corank != d:
        raise CorankMismatch(spec.corank, d)
    angle = float(np.max(subspace_angles(spec.kernel, V)))
    return {"pass": angle < 1e-7, "angle": angle, "corank": spec.corank, "dimension": d}


def gap_bound(P, spec):
    """Upper bound -d(d-1) vol / ||x||^2 on the negative eigenvalue, plus the equality test."""
    d, x = P.dim, P.support
    vol = volume(P)
    bound = -d * (d - 1) * vol / float(x @ x)
    lam1 = float(spec.eigenvalues[0])
    g = np.array([facet_volume(P, i) for i in range(P.n)]) / P.norms
    c = float(x @ g) / float(g @ g)
    resid = float(np.max(np.abs(x - c * g)))
    equality = resid <= P.tol
    holds = lam1 <= bound + 1e-9 * abs(bound)
    return {
        "bound": bound,
        "lambda1": lam1,
        "equality": bool(equality),
        "c": c,
        "proportionalityResidual": resid,
        "holds": bool(holds),
    }
