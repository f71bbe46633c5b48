"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are printed
even under output capture).
"""

import json
import time

import numpy as np
import pytest

from cdvpoly import (
    build_polytope,
    cdv_matrix,
    check_cdv,
    codim2_volume,
    compare_lovasz_hessian,
    cube,
    gap_bound,
    hessian_fd,
    kernel_match,
    minkowski_check,
    mixed_volumes,
    rigidity_check,
    roundtrip_check,
    spectrum,
    volume_hessian,
)
from cdvpoly.cli import main
from cdvpoly.errors import NotAdjacent
from cdvpoly.generate import box, random_hull
from cdvpoly.pipeline import analyze
from cdvpoly.reconstruct import assemble, nullspace_normals

OCTA = np.vstack([np.eye(3), -np.eye(3)])
CUBE_PTS = np.array([[a, b, c] for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)], float)
# random_hull(3, 8, seed=0) supports for which the fan condition fails
BAD_Y = [
    1.1643540247857451, 0.7237440565166444, 0.44916822872343365, 0.419833162634235,
    1.375924287040327, 1.495306692733266, 1.1279629309206158, 1.275395873180798,
]


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def suite_runs(suite):
    t0 = time.perf_counter()
    runs = []
    for inst in suite:
        P = inst.polytope
        M = cdv_matrix(P)
        spec = spectrum(M)
        rep = check_cdv(M, P.lattice.dual_graph, spec)
        km = kernel_match(M, P.normals, spec)
        runs.append((inst, M, spec, rep, km, gap_bound(P, spec)))
    return runs, time.perf_counter() - t0


def test_criterion_01_cube_certificate(capsys):
    t0 = time.perf_counter()
    P = cube(3)
    rep, M, G = analyze(P)
    dt = time.perf_counter() - t0
    A = G.adjacency()
    octahedral = sorted(G.edges) == sorted(
        (a, b) for a in range(6) for b in range(a + 1, 6) if a // 2 != b // 2
    )
    ok = (
        octahedral
        and np.allclose(M, -2 * A, atol=1e-12, rtol=0)
        and np.allclose(rep["eigenvalues"], [-8, 0, 0, 0, 4, 4], atol=1e-9, rtol=0)
        and rep["corank"] == 3
        and rep["m1"]["pass"] and rep["m2"]["pass"] and rep["m3"]["pass"]
        and abs(rep["gap"]["bound"] + 8) < 1e-9
        and abs(rep["gap"]["lambda1"] + 8) < 1e-9
        and rep["gap"]["equality"]
        and dt < 1.0
    )
    verdict(
        capsys, 1, ok,
        f"cube spectrum {np.round(rep['eigenvalues'], 12).tolist()}, corank {rep['corank']}, "
        f"gap {rep['gap']['bound']:.12g} equality={rep['gap']['equality']}, {dt:.3f}s",
    )


def test_criterion_02_corank_equals_dimension(capsys, suite_runs):
    runs, dt = suite_runs
    bad = [
        r[0].label for r in runs
        if not (r[3].m1.ok and r[3].m2.ok and r[3].m3.ok and r[3].corank == r[0].polytope.dim and r[4]["angle"] < 1e-7)
    ]
    worst = max(r[4]["angle"] for r in runs)
    dims = sorted({r[0].polytope.dim for r in runs})
    ok = not bad and len(runs) == 100 and dt < 60
    verdict(
        capsys, 2, ok,
        f"{len(runs) - len(bad)}/{len(runs)} pass (d in {dims}), worst kernel angle {worst:.2e}, {dt:.2f}s"
        + (f"; failing {bad}" if bad else ""),
    )


def test_criterion_03_hessian_fd(capsys, suite):
    errs = []
    for inst in suite:
        P = inst.polytope
        errs.append((float(np.max(np.abs(hessian_fd(P, 1e-4) - volume_hessian(P)))), inst.label))
    bad = [(lab, e) for e, lab in errs if e > 1e-5]
    worst = max(errs)
    ok = not bad
    detail = f"{len(errs) - len(bad)}/{len(errs)} within 1e-5 at step 1e-4, worst {worst[0]:.2e} ({worst[1]})"
    if bad:
        kinds = sorted({lab for lab, _ in bad})
        detail += f"; over tolerance: {kinds}"
    verdict(capsys, 3, ok, detail)


def test_criterion_04_lovasz_equals_hessian(capsys):
    cases = [("octahedron", OCTA), ("cube", CUBE_PTS)] + [
        (f"randomHull3 seed {s}", random_hull(3, 8, s).vertices) for s in range(5)
    ]
    gaps = [(compare_lovasz_hessian(Q), name) for name, Q in cases]
    worst = max(gaps)
    verdict(capsys, 4, worst[0] <= 1e-8, f"max entrywise gap {worst[0]:.2e} ({worst[1]}) over {len(cases)} point sets")


def test_criterion_05_rigidity(capsys):
    parts, ok = [], True
    for name, Q in (("octahedron", OCTA), ("cube", CUBE_PTS)):
        r = rigidity_check(Q)
        good = r["maxDeviation"] < 1e-4 and r["schlafliResidual"] < 1e-5 and r["corank"] == 3
        ok &= good
        parts.append(f"{name}: dev {r['maxDeviation']:.1e}, schlafli {r['schlafliResidual']:.1e}, corank {r['corank']}")
    verdict(capsys, 5, ok, "; ".join(parts))


def test_criterion_06_mixed_volumes(capsys):
    C, B = cube(3), box(3, [1, 2, 3])
    V, x = C.normals, C.support
    mv = mixed_volumes(V, x, B.support).mv
    exact = np.array([8, 16, 88 / 3, 48])
    mv_ok = np.all(np.abs(mv - exact) <= 1e-8 * np.abs(exact))
    strict = minkowski_check(V, x, B.support)
    dbl = minkowski_check(V, x, 2 * x)
    tr = minkowski_check(V, x, x + V @ np.array([0.3, -0.1, 0.2]))
    strict_ok = (
        abs(strict.lhs - 256) <= 1e-8 * 256 and abs(strict.rhs - 88 * 8 / 3) <= 1e-8 * 256
        and strict.lhs > strict.rhs and not strict.homothetic and not strict.equalityWithinTol
    )
    homo_ok = all(
        r.homothetic and abs(r.lhs - r.rhs) <= 1e-9 * max(r.lhs, r.rhs) for r in (dbl, tr)
    )
    verdict(
        capsys, 6, bool(mv_ok and strict_ok and homo_ok),
        f"mv {np.round(mv, 12).tolist()}, strict {strict.lhs:.6g} > {strict.rhs:.6g}, "
        f"homothetic equality: 2x {dbl.equalityWithinTol}/{dbl.homothetic}, translate {tr.equalityWithinTol}/{tr.homothetic}",
    )


def test_criterion_07_signature(capsys, suite_runs):
    runs, _ = suite_runs
    bad = []
    for inst, M, spec, rep, _, _ in runs:
        d, n = inst.polytope.dim, inst.polytope.n
        pos, zero, neg = spec.counts()
        # Phi = -M: its positive eigenvalue is M's negative one
        phi_counts = (neg, zero, pos)
        separated = spec.eigenvalues[1] - spec.eigenvalues[0] > spec.tolRank
        if phi_counts != (1, d, n - d - 1) or not separated:
            bad.append(inst.label)
    verdict(capsys, 7, not bad, f"{len(runs) - len(bad)}/{len(runs)} have signature (1, d, n-d-1) with a simple positive eigenvalue")


def test_criterion_08_gap_bound(capsys, suite_runs):
    runs, _ = suite_runs
    holds = [g["lambda1"] <= g["bound"] + 1e-9 * abs(g["bound"]) for *_, g in runs]
    eq_ok = [g["equality"] == inst.regular for inst, *_, g in runs]
    n_eq = sum(inst.regular for inst, *_ in runs)
    B = box(3, [1, 1, 2])
    g = gap_bound(B, spectrum(cdv_matrix(B)))
    oracle = float(np.linalg.eigvalsh(cdv_matrix(B))[0])
    box_ok = abs(g["bound"] + 8) < 1e-12 and abs(g["lambda1"] - oracle) < 1e-10 and g["lambda1"] < g["bound"] and not g["equality"]
    ok = all(holds) and all(eq_ok) and box_ok
    verdict(
        capsys, 8, ok,
        f"bound holds {sum(holds)}/{len(runs)}, equality flag correct {sum(eq_ok)}/{len(runs)} "
        f"({n_eq} regular), box(1,1,1,1,2,2): lambda1 {g['lambda1']:.6f} < bound {g['bound']:.6g}",
    )


def test_criterion_09_reconstruction(capsys):
    t0 = time.perf_counter()
    worst_m = worst_s = 0.0
    bad = []
    for k in range(20):
        base = random_hull(3, 6 + k % 7, 100 + k)
        shift = np.random.default_rng(k).uniform(-0.2, 0.2, 3)
        P = build_polytope(base.normals, base.support + base.normals @ shift)
        M, G = cdv_matrix(P), P.lattice.dual_graph
        res = assemble(M, G, nullspace_normals(M))
        rt = roundtrip_check(P)
        scale = max(1.0, float(np.max(np.abs(res.support))))
        worst_m = max(worst_m, res.matrixResidual, rt["matrixResidual"])
        worst_s = max(worst_s, res.supportResidual / scale)
        if not (res.matrixResidual < 1e-6 and res.supportResidual < 1e-6 * scale and rt["equalUpToTranslation"]):
            bad.append(k)
    dt = time.perf_counter() - t0
    verdict(
        capsys, 9, not bad and dt < 30,
        f"{20 - len(bad)}/20 translates recovered, matrixResidual <= {worst_m:.1e}, "
        f"supportResidual/scale <= {worst_s:.1e}, {dt:.2f}s",
    )


def test_criterion_10_negative_controls(capsys, tmp_path):
    def cli(*argv):
        import contextlib
        import io

        err = io.StringIO()
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(io.StringIO()):
            code = main([str(a) for a in argv])
        return code, err.getvalue()

    def dump(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return p

    results = {}
    results["Unbounded"] = cli("analyze", dump("u.json", {"dimension": 2, "normals": [[1, 0], [0, 1]], "support": [1, 1]}))
    r = 2 ** -0.5
    results["RedundantFacet"] = cli(
        "analyze",
        dump("r.json", {"dimension": 2, "normals": [[1, 0], [-1, 0], [0, 1], [0, -1], [r, r]], "support": [1, 1, 1, 1, 3]}),
    )
    results["CorankNot3"] = cli(
        "reconstruct",
        dump("m2.json", {"n": 4, "rows": np.diag([0.0, 0.0, 1.0, -1.0]).tolist()}),
        dump("g2.json", {"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]]}),
    )
    # perturb a polytope matrix inside the complement of its kernel: corank stays 3,
    # but mass moves onto non-edges so the facet polygons no longer close
    P = random_hull(3, 8, 0)
    Pi = np.eye(P.n) - P.normals @ np.linalg.pinv(P.normals)
    S = np.random.default_rng(0).standard_normal((P.n, P.n))
    M = cdv_matrix(P) + 0.1 * Pi @ (S + S.T) @ Pi
    M = (M + M.T) / 2
    results["ClosingDefect"] = cli(
        "reconstruct", dump("mc.json", {"n": P.n, "rows": M.tolist()}), dump("gc.json", P.lattice.dual_graph.to_json())
    )
    C = cube(3)
    results["RefinementViolated"] = cli(
        "mixed",
        dump("x.json", P.to_json()),
        dump("y.json", {"dimension": 3, "normals": P.normals.tolist(), "support": BAD_Y}),
    )
    try:
        codim2_volume(C, 0, 1)
        results["NotAdjacent"] = (0, "")
    except NotAdjacent as e:
        results["NotAdjacent"] = (1, f"NotAdjacent: {e}")
    ok = all(code == 1 and err.startswith(name) for name, (code, err) in results.items())
    verdict(capsys, 10, ok, ", ".join(f"{name} -> exit {code}" for name, (code, _) in results.items()))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
