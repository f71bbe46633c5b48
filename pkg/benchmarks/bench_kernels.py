"""Numba vs numpy timings for the two hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are called directly (the CDV_NUMBA flag is not consulted), on
the same inputs, after one warm-up call so JIT compilation is excluded.
"""

import argparse
import timeit
from math import comb

import numpy as np

from cdvpoly import _kernels as K
from cdvpoly.generate import crosspolytope, random_hull
from cdvpoly.hessian import cdv_matrix


def enum_inputs():
    out = []
    for label, P in [
        ("cross4 (n=16, d=4)", crosspolytope(4)),
        ("randomHull5 (n=12)", random_hull(5, 12, 3)),
        ("randomHull3 (n=30)", random_hull(3, 30, 1)),
        ("cross5 (n=32, d=5)", crosspolytope(5)),
    ]:
        U = P.normals / P.norms[:, None]
        out.append((label, U, P.support / P.norms, P.tol))
    return out


def jacobi_inputs():
    out = []
    for label, P in [("cross4 M (16x16)", crosspolytope(4)), ("randomHull3 M (30x30)", random_hull(3, 30, 1))]:
        out.append((label, cdv_matrix(P)))
    rng = np.random.default_rng(0)
    A = rng.standard_normal((60, 60))
    out.append(("random symmetric 60x60", A + A.T))
    return out


def best(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not importable")
    rows = []
    for label, U, h, tol in enum_inputs():
        n, d = U.shape
        cap = min(comb(n, d), 200000)
        t_nb = best(lambda: K._enumerate_nb(U, h, tol, cap), args.repeat)
        t_np = best(lambda: K._enumerate_np(U, h, tol), args.repeat)
        a, b = K._enumerate_nb(U, h, tol, cap), K._enumerate_np(U, h, tol)
        same = len(a) == len(b)
        rows.append(("vertices", label, t_nb, t_np, same))
    for label, A in jacobi_inputs():
        t_nb = best(lambda: K._jacobi_nb(A, 1e-12, 100), args.repeat)
        t_np = best(lambda: K._jacobi_np(A, 1e-12, 100), args.repeat)
        w1 = np.sort(K._jacobi_nb(A, 1e-12, 100)[0])
        w2 = np.sort(K._jacobi_np(A, 1e-12, 100)[0])
        rows.append(("jacobi", label, t_nb, t_np, bool(np.allclose(w1, w2, atol=1e-9 * np.abs(w1).max()))))
    print(f"{'kernel':<9} {'input':<24} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  agree")
    for kern, label, a, b, same in rows:
        print(f"{kern:<9} {label:<24} {a * 1e3:>10.3f} {b * 1e3:>10.3f} {b / a:>8.1f}  {same}")


if __name__ == "__main__":
    main()
