"""Deterministic fixture polytopes and the seeded batch used by the property suite."""

from dataclasses import dataclass

import numpy as np

from .errors import BadParams, RedundantFacet, Unbounded
from .polytope import build_polytope, origin_interior, volume

KINDS = ("cube", "simplex", "crosspolytope", "box", "randomHull", "product")


def box(d, sides):
    """Axis box with half-widths ``sides``; facet order +e_1, -e_1, +e_2, ..."""
    sides = np.asarray(sides, dtype=float)
    if sides.shape != (d,) or np.any(sides <= 0):
        raise BadParams(f"box needs {d} positive half-widths, got {sides.tolist()}")
    normals = np.zeros((2 * d, d))
    for k in range(d):
        normals[2 * k, k] = 1.0
        normals[2 * k + 1, k] = -1.0
    return build_polytope(normals, np.repeat(sides, 2))


def cube(d):
    return box(d, np.ones(d))


def simplex_normals(d):
    """Unit outer normals of the regular d-simplex centred at the origin."""
    E = np.eye(d + 1) - 1.0 / (d + 1)
    # orthonormal basis of the sum-zero hyperplane in R^{d+1}
    B = np.linalg.qr(E[:, :d])[0]
    N = E @ B
    return N / np.linalg.norm(N, axis=1)[:, None]


def simplex(d):
    """Regular simplex with inscribed unit ball centred at the origin."""
    return build_polytope(simplex_normals(d), np.ones(d + 1))


def crosspolytope(d):
    """{p : sum |p_k| <= 1} with the 2^d sign vectors as (unnormalised) normals."""
    signs = np.array(np.meshgrid(*[[1.0, -1.0]] * d, indexing="ij")).reshape(d, -1).T
    return build_polytope(signs, np.ones(len(signs)))


def random_hull(d, n, seed):
    """Random unit normals with support 1; redundant inequalities are dropped."""
    if n < d + 1:
        raise BadParams(f"randomHull needs n >= d+1, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        U = rng.standard_normal((n, d))
        U /= np.linalg.norm(U, axis=1)[:, None]
        if origin_interior(U):
            break
    else:
        raise BadParams("could not draw positively spanning normals")
    while True:
        try:
            return build_polytope(U, np.ones(len(U)))
        except RedundantFacet as e:
            U = np.delete(U, e.index, axis=0)


def product(P1, P2):
    d1, d2 = P1.dim, P2.dim
    N = np.zeros((P1.n + P2.n, d1 + d2))
    N[: P1.n, :d1] = P1.normals
    N[P1.n :, d1:] = P2.normals
    return build_polytope(N, np.concatenate([P1.support, P2.support]))


def generate(kind, params=None, seed=None):
    """Dispatch by name; ``params`` is a dict (``dim``, ``sides``, ``n``, ``factors``)."""
    params = dict(params or {})
    try:
        if kind == "cube":
            return cube(int(params["dim"]))
        if kind == "simplex":
            return simplex(int(params["dim"]))
        if kind == "crosspolytope":
            return crosspolytope(int(params["dim"]))
        if kind == "box":
            sides = params["sides"]
            return box(int(params.get("dim", len(sides))), sides)
        if kind == "randomHull":
            return random_hull(int(params["dim"]), int(params["n"]), 0 if seed is None else seed)
        if kind == "product":
            P1, P2 = params["factors"]
            return product(P1, P2)
    except KeyError as e:
        raise BadParams(f"{kind}: missing parameter {e}") from None
    except Unbounded as e:
        raise BadParams(f"{kind}: {e}") from None
    raise BadParams(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


def random_rotation(d, rng):
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    return Q * np.sign(np.diag(R))


@dataclass
class SuiteInstance:
    index: int
    label: str
    polytope: object
    regular: bool  # untranslated regular polytope: gap bound is attained


SUITE_KINDS = ("cube", "simplex", "crosspolytope", "box", "randomHull")


def _rescaled(P, size):
    """P scaled about the origin so that vol(P)^(1/d) equals ``size``."""
    lam = size / volume(P) ** (1.0 / P.dim)
    return build_polytope(P.normals, lam * P.support)


def suite_instances(seed=0, count=100, dims=(2, 3, 4, 5)):
    """Seeded batch spanning ``dims`` and every kind in ``SUITE_KINDS``.

    Every instance is rescaled so that vol^(1/d) is uniform in [0.8, 1.6]
    (keeps absolute finite-difference tolerances meaningful). Regular kinds
    are randomly rotated; every other repetition is also translated, which
    breaks the equality case of the gap bound. The 5-dimensional
    cross-polytope (32 facets) is replaced by a random hull to keep the batch
    at desk scale.
    """
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        d = dims[idx % len(dims)]
        kind = SUITE_KINDS[(idx // len(dims)) % len(SUITE_KINDS)]
        rep = idx // (len(dims) * len(SUITE_KINDS))
        sub = int(rng.integers(0, 2**31 - 1))
        local = np.random.default_rng(sub)
        size = float(local.uniform(0.8, 1.6))
        if kind == "crosspolytope" and d >= 5:
            kind = "randomHull"
        if kind in ("cube", "simplex", "crosspolytope"):
            base = generate(kind, {"dim": d})
            R = random_rotation(d, local)
            P = _rescaled(build_polytope(base.normals @ R, base.support), size)
            translated = rep % 2 == 1
            if translated:
                shift = local.uniform(-0.1, 0.1, size=d) * size
                P = build_polytope(P.normals, P.support + P.normals @ shift)
            label = f"{kind}{d}" + ("+shift" if translated else "")
            out.append(SuiteInstance(idx, label, P, not translated))
        elif kind == "box":
            sides = local.uniform(0.5, 2.0, size=d)
            out.append(SuiteInstance(idx, f"box{d}", _rescaled(box(d, sides), size), False))
        else:
            n = int(local.integers(d + 2, d + 6))
            P = _rescaled(random_hull(d, n, sub), size)
            out.append(SuiteInstance(idx, f"randomHull{d}(n={P.n})", P, False))
    return out
