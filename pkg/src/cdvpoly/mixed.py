"""Two-body mixed volumes inside a fixed-normal family and the Minkowski checks."""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import IllConditionedFit, RefinementViolated
from .hessian import volume_hessian
from .polytope import build_polytope, volume

REFINE_TS = (1e-3, 1e-2, 0.1, 0.5, 1.0)


def _combinatorial_type(P):
    return sorted(tuple(sorted(t)) for t in P.tight)


def refines(V, y, x):
    """Operational test that the normal fan of P(y) refines that of P(x).

    P(x + t y) must keep one combinatorial type for every sampled t (and P(y)
    must share it), and each vertex of P(x) must be tight on a superset of the
    facets of the nearest vertex of P(x + 1e-3 y).
    """
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    Px = build_polytope(V, x)
    build_polytope(V, y)
    types = [_combinatorial_type(build_polytope(V, x + t * y)) for t in REFINE_TS]
    types.append(_combinatorial_type(build_polytope(V, y)))
    if any(t != types[0] for t in types[1:]):
        return False
    Pe = build_polytope(V, x + REFINE_TS[0] * y)
    for p, tight in zip(Pe.vertices, Pe.tight):
        k = int(np.argmin(np.linalg.norm(Px.vertices - p, axis=1)))
        if not tight <= Px.tight[k]:
            return False
    return True


@dataclass
class MixedVolumes:
    mv: np.ndarray  # mv[k] = vol(Q x k, P x (d-k))
    fitResidual: float
    samples: np.ndarray

    def to_json(self):
        return {"mv": self.mv.tolist(), "fitResidual": self.fitResidual}


def mixed_volumes(V, x, y, check=True):
    """Mixed volumes of P = P(x) and Q = P(y) from the polynomial vol(x + t y).

    vol(x + t y) is sampled at t = k/d, interpolated exactly by a degree-d
    polynomial, and its coefficients divided by binomial(d, k).
    """
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = V.shape[1]
    if check and not refines(V, y, x):
        raise RefinementViolated("the normal fan of P(y) does not refine that of P(x)")
    ts = np.arange(d + 1) / d
    vals = np.array([volume(build_polytope(V, x + t * y)) for t in ts])
    coef = np.linalg.solve(np.vander(ts, d + 1, increasing=True), vals)
    extra = (0.35, 0.85)
    defects = [abs(np.polyval(coef[::-1], t) - volume(build_polytope(V, x + t * y))) for t in extra]
    scale = float(np.max(np.abs(vals)))
    resid = float(max(defects))
    if resid > 1e-7 * scale:
        raise IllConditionedFit(f"interpolation defect {resid:.3e} exceeds 1e-7 * {scale:.3e}")
    mv = np.array([coef[k] / comb(d, k) for k in range(d + 1)])
    return MixedVolumes(mv, resid, vals)


def homothety_fit(V, x, y):
    """Least squares for x = lam * y + V p; returns (lam, p, residual)."""
    A = np.column_stack([y, V])
    sol, *_ = np.linalg.lstsq(A, x, rcond=None)
    resid = float(np.max(np.abs(A @ sol - x)))
    return float(sol[0]), sol[1:], resid


@dataclass
class MinkowskiReport:
    lhs: float
    rhs: float
    detPhi2x2: float
    homothetic: bool
    equalityWithinTol: bool
    lam: float
    consistent: bool
    detNonpositive: bool = True

    @property
    def holds(self):
        return self.lhs >= self.rhs - 1e-9 * max(abs(self.lhs), abs(self.rhs))

    def to_json(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "detPhi2x2": self.detPhi2x2,
            "homothetic": self.homothetic,
            "equalityWithinTol": self.equalityWithinTol,
            "lambda": self.lam,
            "inequalityHolds": self.holds,
            "equalityIffHomothetic": self.consistent,
            "detNonpositive": self.detNonpositive,
        }


def minkowski_check(V, x, y, rel_tol=1e-9):
    """Second Minkowski inequality vol(Q,P..P)^2 >= vol(P) vol(Q,Q,P..P) and its equality case."""
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = mixed_volumes(V, x, y)
    lhs = float(m.mv[1] ** 2)
    rhs = float(m.mv[0] * m.mv[2])
    phi = volume_hessian(build_polytope(V, x))
    a, b, c = float(x @ phi @ x), float(x @ phi @ y), float(y @ phi @ y)
    det = a * c - b * b
    det_ok = det <= 1e-9 * (abs(a * c) + b * b)
    lam, _, resid = homothety_fit(V, x, y)
    P = build_polytope(V, x)
    homothetic = lam > 0 and resid < P.tol
    equal = abs(lhs - rhs) <= rel_tol * max(abs(lhs), abs(rhs))
    return MinkowskiReport(lhs, rhs, det, bool(homothetic), bool(equal), lam, equal == homothetic, bool(det_ok))


def phi_consistency(V, x, y, rel_tol=1e-7):
    """Compare the Hessian form at x with d(d-1) times the mixed volumes."""
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = V.shape[1]
    m = mixed_volumes(V, x, y)
    phi = volume_hessian(build_polytope(V, x))
    k = d * (d - 1)
    pairs = {
        "yy": (float(y @ phi @ y), k * m.mv[2]),
        "xy": (float(x @ phi @ y), k * m.mv[1]),
        "xx": (float(x @ phi @ x), k * m.mv[0]),
    }
    scale = max(abs(b) for _, b in pairs.values())
    errs = {key: abs(a - b) / scale for key, (a, b) in pairs.items()}
    return {
        "values": {key: a for key, (a, _) in pairs.items()},
        "expected": {key: float(b) for key, (_, b) in pairs.items()},
        "relErrors": errs,
        "pass": all(e <= rel_tol for e in errs.values()),
    }
