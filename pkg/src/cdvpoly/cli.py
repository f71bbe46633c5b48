"""Command line: ``cdvpoly <command> ...``.

Exit status 0 when every check passes, 2 when a mathematical check fails and
1 for input or validation errors (the error class is printed on stderr).
"""

import argparse
import sys

import numpy as np

from . import config
from . import io as jio
from .errors import BadParams, CdvError
from .generate import KINDS, generate
from .lovasz import compare_lovasz_hessian, lovasz_matrix, rigidity_check
from .mixed import minkowski_check, mixed_volumes, phi_consistency
from .pipeline import analyze, run_suite
from .reconstruct import aligned_nullspace, assemble, check_conditions, nullspace_normals, roundtrip_check


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(report, args):
    if args.format == "text":
        report = jio.to_plain(report)
        lines = []
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)):
                continue
            lines.append(f"{k}: {v!r}")
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        text = jio.write_json(report, args.output)
        if not args.output:
            sys.stdout.write(text)


def cmd_gen(args):
    if args.kind == "product":
        raise BadParams("product is available from the library only")
    params = {"dim": args.dim, "n": args.n, "sides": args.sides}
    if args.dim is None and args.sides is not None:
        params["dim"] = len(args.sides)
    params = {k: v for k, v in params.items() if v is not None}
    P = generate(args.kind, params, args.seed)
    data = {"points": P.vertices} if args.as_points else P.to_json()
    if args.output:
        jio.write_json(data, args.output)
    else:
        sys.stdout.write(jio.dumps(data))
    return 0


def _out(args, report):
    _emit(report, args)
    return 0 if report.get("pass", False) else 2


def cmd_analyze(args):
    P = jio.polytope_from_json(jio.read_json(args.file))
    report, M, G = analyze(P, args.fd_step)
    if args.matrix_out:
        jio.write_json(jio.matrix_to_json(M), args.matrix_out)
    if args.graph_out:
        jio.write_json(G.to_json(), args.graph_out)
    return _out(args, report)


def cmd_lovasz(args):
    Q = jio.points_from_json(jio.read_json(args.file))
    lov = lovasz_matrix(Q)
    gap = compare_lovasz_hessian(Q)
    if args.matrix_out:
        jio.write_json(jio.matrix_to_json(lov.m), args.matrix_out)
    report = {
        "matrix": jio.matrix_to_json(lov.m),
        "skeleton": lov.skeleton.to_json(),
        "hessianGap": gap,
        "pass": gap <= args.tol,
        "tolerance": args.tol,
    }
    return _out(args, report)


def cmd_rigidity(args):
    Q = jio.points_from_json(jio.read_json(args.file))
    r = rigidity_check(Q, step=args.step, seed=args.seed)
    ok = r["maxDeviation"] <= 1e-4 and r["schlafliResidual"] <= 1e-5 and r["corank"] == 3
    report = {
        "rigidityMatrix": jio.matrix_to_json(r["R"]),
        "maxDeviation": r["maxDeviation"],
        "schlafliResidual": r["schlafliResidual"],
        "schlafliBase": r["schlafliBase"],
        "corank": r["corank"],
        "eigenvalues": r["eigenvalues"],
        "pass": ok,
    }
    return _out(args, report)


def cmd_mixed(args):
    Px = jio.polytope_from_json(jio.read_json(args.file_x))
    Py = jio.polytope_from_json(jio.read_json(args.file_y))
    if Px.normals.shape != Py.normals.shape or not np.allclose(Px.normals, Py.normals, rtol=0, atol=1e-12):
        raise BadParams("both polytopes must share the same normal vectors")
    V, x, y = Px.normals, Px.support, Py.support
    mv = mixed_volumes(V, x, y)
    mk = minkowski_check(V, x, y)
    pc = phi_consistency(V, x, y)
    report = {
        "mv": mv.mv,
        "fitResidual": mv.fitResidual,
        "minkowski": mk.to_json(),
        "phiConsistency": pc,
        "pass": bool(mk.holds and mk.consistent and mk.detNonpositive and pc["pass"]),
    }
    return _out(args, report)


def cmd_reconstruct(args):
    M = jio.matrix_from_json(jio.read_json(args.matrix))
    G = jio.graph_from_json(jio.read_json(args.graph))
    if G.n != M.shape[0]:
        raise BadParams(f"graph has {G.n} vertices, matrix is {M.shape[0]} x {M.shape[0]}")
    if args.basis:
        V = jio.polytope_from_json(jio.read_json(args.basis)).normals
        if V.shape != (M.shape[0], 3):
            raise BadParams(f"basis normals have shape {V.shape}, expected ({M.shape[0]}, 3)")
        rep = aligned_nullspace(M, V)
    else:
        rep = nullspace_normals(M)
    cond = check_conditions(M, G, rep)
    res = assemble(M, G, rep)
    scale = max(1.0, float(np.max(np.abs(res.support))))
    report = {
        "polytope": res.polytope.to_json(),
        "conditions": cond,
        "kernelResidual": rep.residual,
        "matrixResidual": res.matrixResidual,
        "supportResidual": res.supportResidual,
        "edgeResidual": res.edgeResidual,
        "graphMatches": res.polytope.lattice.dual_graph == G,
        "pass": bool(cond["pass"] and res.matrixResidual < 1e-6 and res.supportResidual < 1e-6 * scale),
    }
    if args.polytope_out:
        jio.write_json(res.polytope.to_json(), args.polytope_out)
    return _out(args, report)


def cmd_roundtrip(args):
    P = jio.polytope_from_json(jio.read_json(args.file))
    r = roundtrip_check(P)
    r["reconstructed"] = r["reconstructed"].to_json()
    r["pass"] = bool(r["equalUpToTranslation"] and r["matrixResidual"] < 1e-6 and r["graphMatches"])
    return _out(args, r)


def cmd_suite(args):
    report = run_suite(args.seed, args.count, args.fd_step, args.fd_tol)
    return _out(args, report)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tol-geom", type=float, help="relative geometric tolerance factor")
    common.add_argument("--tol-rank", type=float, help="relative rank tolerance factor")

    p = _Parser(prog="cdvpoly", description="Colin de Verdiere matrices of convex polytopes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="write a fixture polytope")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--dim", type=int)
    g.add_argument("--sides", type=_floats, help="box half-widths, comma separated")
    g.add_argument("--n", type=int, help="number of normals for randomHull")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--as-points", action="store_true", help="emit the vertices as a point set")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", parents=[common], help="Hessian, certificate, kernel and gap bound")
    a.add_argument("file")
    a.add_argument("--matrix-out")
    a.add_argument("--graph-out")
    a.add_argument("--fd-step", type=float, help="also compare with finite differences")
    a.set_defaults(func=cmd_analyze)

    lv = sub.add_parser("lovasz", parents=[common], help="Lovasz matrix of a point set")
    lv.add_argument("file")
    lv.add_argument("--matrix-out")
    lv.add_argument("--tol", type=float, default=1e-8)
    lv.set_defaults(func=cmd_lovasz)

    r = sub.add_parser("rigidity", parents=[common], help="radial deformation checks")
    r.add_argument("file")
    r.add_argument("--step", type=float, default=1e-5)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_rigidity)

    m = sub.add_parser("mixed", parents=[common], help="mixed volumes and Minkowski inequality")
    m.add_argument("file_x")
    m.add_argument("file_y")
    m.set_defaults(func=cmd_mixed)

    rc = sub.add_parser("reconstruct", parents=[common], help="polytope from a matrix and its graph")
    rc.add_argument("matrix")
    rc.add_argument("graph")
    rc.add_argument("--polytope-out")
    rc.add_argument("--basis", help="polytope JSON whose normals fix the kernel basis (else orthonormal)")
    rc.set_defaults(func=cmd_reconstruct)

    rt = sub.add_parser("roundtrip", parents=[common], help="matrix and back for a 3-polytope")
    rt.add_argument("file")
    rt.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("suite", parents=[common], help="batch property run")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--fd-step", type=float)
    s.add_argument("--fd-tol", type=float, default=1e-5)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"UsageError: {e}", file=sys.stderr)
        return 1
    saved = config.TOL_GEOM_FACTOR, config.TOL_RANK_FACTOR
    if args.tol_geom is not None:
        config.TOL_GEOM_FACTOR = args.tol_geom
    if args.tol_rank is not None:
        config.TOL_RANK_FACTOR = args.tol_rank
    try:
        return args.func(args)
    except CdvError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (ValueError, np.linalg.LinAlgError) as e:
        print(f"InputError: {e}", file=sys.stderr)
        return 1
    finally:
        config.TOL_GEOM_FACTOR, config.TOL_RANK_FACTOR = saved


if __name__ == "__main__":
    sys.exit(main())
