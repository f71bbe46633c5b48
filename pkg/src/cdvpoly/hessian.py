"""First and second derivatives of vol(P(x)) in the support parameters."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CdvError, InconsistentDiagonal, StepTooLarge
from .polytope import build_polytope, codim2_volume, facet_volume, volume


@dataclass
class HessianReport:
    phi: np.ndarray
    m: np.ndarray
    gradient: np.ndarray
    fdMaxError: Optional[float] = None


def sin_angle(u, v):
    """Sine of the angle between u and v via the Gram determinant."""
    uu, vv, uv = u @ u, v @ v, u @ v
    return np.sqrt(max(uu * vv - uv * uv, 0.0)) / np.sqrt(uu * vv)


def volume_gradient(P):
    return np.array([facet_volume(P, i) for i in range(P.n)]) / P.norms


def volume_hessian(P):
    """Analytic Hessian of the volume (the form Phi).

    Off-diagonal entries come from the codimension-2 faces; each diagonal
    entry is then the unique scalar making ``sum_j Phi_ij v_j = 0``.
    """
    n = P.n
    V, norms = P.normals, P.norms
    phi = np.zeros((n, n))
    for i, j in P.lattice.codim2:
        val = codim2_volume(P, i, j) / (norms[i] * norms[j] * sin_angle(V[i], V[j]))
        phi[i, j] = phi[j, i] = val
    for i in range(n):
        w = phi[i] @ V
        phi[i, i] = -(w @ V[i]) / norms[i] ** 2 + 0.0
        resid = np.linalg.norm(phi[i, i] * V[i] + w)
        scale = np.abs(phi[i]) @ norms
        if resid > P.tol * max(scale, 1e-300) + 1e-300:
            raise InconsistentDiagonal(
                f"row {i}: sum_j Phi_ij v_j has residual {resid:.3e} (scale {scale:.3e})"
            )
    return phi


def cdv_matrix(P):
    """Candidate Colin de Verdiere matrix M = -Hessian of the volume."""
    return 0.0 - volume_hessian(P)  # no negative zeros off the graph


def _vol_at(V, x):
    try:
        return volume(build_polytope(V, x))
    except CdvError as e:
        raise StepTooLarge(f"perturbed polytope invalid: {type(e).__name__}: {e}") from None


def hessian_fd(P, step=1e-4):
    """Central second differences of the volume on the support vector."""
    V, x, n = P.normals, P.support, P.n
    h = float(step)
    f0 = volume(P)
    E = np.eye(n) * h
    plus = [_vol_at(V, x + E[i]) for i in range(n)]
    minus = [_vol_at(V, x - E[i]) for i in range(n)]
    H = np.zeros((n, n))
    for i in range(n):
        H[i, i] = (plus[i] - 2.0 * f0 + minus[i]) / h**2
        for j in range(i + 1, n):
            fpp = _vol_at(V, x + E[i] + E[j])
            fpm = _vol_at(V, x + E[i] - E[j])
            fmp = _vol_at(V, x - E[i] + E[j])
            fmm = _vol_at(V, x - E[i] - E[j])
            H[i, j] = H[j, i] = (fpp - fpm - fmp + fmm) / (4.0 * h**2)
    return H


def gradient_fd(P, step=1e-5):
    V, x = P.normals, P.support
    E = np.eye(P.n) * step
    return np.array(
        [(_vol_at(V, x + E[i]) - _vol_at(V, x - E[i])) / (2 * step) for i in range(P.n)]
    )


def hessian_report(P, fd_step=None):
    phi = volume_hessian(P)
    rep = HessianReport(phi=phi, m=-phi, gradient=volume_gradient(P))
    if fd_step is not None:
        rep.fdMaxError = float(np.max(np.abs(hessian_fd(P, fd_step) - phi)))
    return rep
