"""Command-line front end.

Subcommands: triangle, interp, constants, mesh, fem.  Reports are written
as CSV and/or JSON (plus an optional SVG convergence plot) under --out;
the primary report is also printed to stdout.  Identical configurations
produce byte-identical outputs: floats are formatted with 17 significant
digits and every random sweep is seeded (the seed is echoed).

Exit codes: 0 success (audits pass), 1 an asserted bound failed, 2 usage
error, 3 degenerate triangle input, 4 numerical failure (no convergence /
ill-conditioning).
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import constants, fem, interp, mesh, report
from .errors import (
    CircumlabError,
    DegenerateTriangle,
    IllConditioned,
    InvalidFamily,
    NoConvergence,
    UnknownField,
)
from .fields import get_field
from .geometry import (
    Triangle,
    canonicalize,
    condition_flags,
    metrics,
    needle_triangle,
)
from .quadrature import make_rule

EXIT_OK = 0
EXIT_AUDIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERICAL = 4


class UsageError(CircumlabError):
    pass


def _parse_vertex(token: str) -> tuple[float, float]:
    parts = token.split(",")
    if len(parts) != 2:
        raise UsageError(f"vertex {token!r} is not 'x,y'")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"vertex {token!r} has non-numeric coordinates") from None


def _triangle_from_args(args) -> Triangle:
    if args.needle is not None:
        h, alpha = args.needle
        return needle_triangle(h, alpha)
    if len(args.vertices) != 3:
        raise UsageError("give three vertices 'x1,y1 x2,y2 x3,y3' or --needle H ALPHA")
    return Triangle(*(_parse_vertex(t) for t in args.vertices))


def _emit(args, name: str, columns, rows, json_doc: str) -> None:
    if args.format in ("csv", "both") and columns is not None:
        text = report.csv_text(columns, rows)
        if args.out:
            report.write_text(f"{args.out}/{name}.csv", text)
    if args.format in ("json", "both"):
        if args.out:
            report.write_text(f"{args.out}/{name}.json", json_doc)
    sys.stdout.write(json_doc)


def _cmd_triangle(args) -> int:
    tri = _triangle_from_args(args)
    m = metrics(tri)
    flags = condition_flags(m, args.theta0, args.theta1, args.sigma)
    form = canonicalize(tri)
    results = {
        "vertices": [list(tri.p1), list(tri.p2), list(tri.p3)],
        "metrics": {
            "A": m.A, "B": m.B, "C": m.C, "S": m.S, "h_K": m.h_K,
            "rho_K": m.rho_K, "R_K": m.R_K, "theta_min": m.theta_min,
            "theta_max": m.theta_max, "C_K": m.C_K,
        },
        "condition_flags": flags,
        "canonical": {
            "s": form.s, "t": form.t, "eta": form.eta, "a": form.a,
            "b": form.b, "X": form.X, "Y": form.Y, "ratio": form.ratio,
            "canonical_circumradius": form.canonical_circumradius,
        },
    }
    config = {
        "vertices": args.vertices, "needle": args.needle,
        "theta0": args.theta0, "theta1": args.theta1, "sigma": args.sigma,
    }
    _emit(args, "triangle", None, None,
          report.json_text("triangle", config, results))
    return EXIT_OK


def _cmd_interp(args) -> int:
    field = get_field(args.field)
    p = math.inf if args.p == "inf" else float(args.p)
    if args.needle_study is not None:
        hs = [2.0 ** -(k + 2) for k in range(args.levels)]
        rows = interp.needle_study(hs, args.needle_study, field, p)
        csv_rows = [interp.needle_row_csv(r) for r in rows]
        config = {
            "field": args.field, "p": args.p, "alpha": args.needle_study,
            "levels": args.levels,
        }
        doc = report.json_text("interp", config,
                               {"rows": [r.to_dict() for r in rows]})
        _emit(args, "interp", interp.NEEDLE_CSV_COLUMNS, csv_rows, doc)
        return EXIT_OK if all(r.report.bound_satisfied for r in rows) else EXIT_AUDIT_FAILED
    tri = _triangle_from_args(args)
    rule = None
    if args.quad_degree is not None:
        rule = make_rule(args.quad_degree)
    rep = interp.error_report(tri, field, p, rule=rule)
    config = {
        "field": args.field, "p": args.p, "vertices": args.vertices,
        "needle": args.needle, "quad_degree": args.quad_degree,
    }
    doc = report.json_text("interp", config, rep.to_dict())
    _emit(args, "interp", None, None, doc)
    return EXIT_OK if rep.bound_satisfied else EXIT_AUDIT_FAILED


def _audit_triangles(args, rng) -> list[tuple[str, Triangle]]:
    tris = [("reference", Triangle((0, 0), (1, 0), (0, 1)))]
    for k in range(args.right):
        a, b = rng.uniform(0.1, 2.0, size=2)
        tris.append((f"right_{k}", Triangle((0, 0), (a, 0), (0, b))))
    for k in range(args.canonical):
        s = rng.uniform(-0.9, 0.9)
        eta_hi = math.sqrt((3.0 + abs(s)) / (1.0 + abs(s)))
        eta = rng.uniform(0.3, eta_hi)
        t = math.sqrt(1.0 - s * s)
        tris.append((f"canonical_{k}", Triangle((-1, 0), (1, 0), (s, eta * t))))
    return tris


def _cmd_constants(args) -> int:
    if args.babuska_aziz:
        root = constants.babuska_aziz_root()
        residual = 1.0 / root + math.tan(1.0 / root)
        results = {"root": root, "residual": residual, "A2": 1.0 / root}
        doc = report.json_text("constants", {"babuska_aziz": True}, results)
        _emit(args, "constants", None, None, doc)
        return EXIT_OK
    if args.audit:
        rng = np.random.default_rng(args.seed)
        records = []
        ok = True
        for label, tri in _audit_triangles(args, rng):
            rec = constants.lemma_inequality_audit(tri, degree=args.degree)
            ok = ok and rec.all_pass
            d = rec.to_dict()
            d["label"] = label
            records.append(d)
        config = {
            "audit": True, "seed": args.seed, "degree": args.degree,
            "right": args.right, "canonical": args.canonical,
        }
        columns = ("label", "lemma", "computed", "bound", "pass")
        rows = [
            (d["label"], e["lemma"], e["computed"], e["bound"], e["pass"])
            for d in records
            for e in d["entries"]
        ]
        doc = report.json_text("constants", config, {"records": records})
        _emit(args, "constants_audit", columns, rows, doc)
        return EXIT_OK if ok else EXIT_AUDIT_FAILED
    tri = _triangle_from_args(args)
    solver = {
        "A1": lambda: constants.rayleigh_A(tri, 1, args.degree),
        "A2": lambda: constants.rayleigh_A(tri, 2, args.degree),
        "B": lambda: constants.rayleigh_B(tri, args.degree),
        "D": lambda: constants.rayleigh_D(tri, args.degree),
    }
    if args.kind not in solver:
        raise UsageError(f"--kind {args.kind!r} not one of A1, A2, B, D")
    est = solver[args.kind]()
    results = {
        "kind": est.kind,
        "degree": est.subspace_degree,
        "value": est.value,
        "uncertainty": est.uncertainty,
        "history": [{"degree": d, "value": v} for d, v in est.history],
    }
    config = {
        "kind": args.kind, "degree": args.degree,
        "vertices": args.vertices, "needle": args.needle,
    }
    doc = report.json_text("constants", config, results)
    _emit(args, "constants", None, None, doc)
    return EXIT_OK


def _cmd_mesh(args) -> int:
    if args.check:
        with open(args.check, encoding="utf-8") as fh:
            m = mesh.read_mesh(fh.read())
        st = mesh.stats(m)
        results = {"stats": st.to_dict(), "warnings": m.warnings}
        doc = report.json_text("mesh", {"check": args.check}, results)
        _emit(args, "mesh", None, None, doc)
        return EXIT_OK
    if args.family == "uniform":
        m = mesh.gen_uniform(args.n)
    elif args.family == "crisscross":
        m = mesh.gen_crisscross_aniso(args.n, args.alpha)
    elif args.family == "lens":
        m = mesh.gen_lens(args.n)
    else:
        raise UsageError(f"--family {args.family!r} not one of uniform, crisscross, lens")
    st = mesh.stats(m)
    config = {"family": args.family, "n": args.n, "alpha": args.alpha}
    doc = report.json_text("mesh", config, {"stats": st.to_dict()})
    if args.out:
        report.write_text(f"{args.out}/mesh_{args.family}_{args.n}.txt",
                          mesh.write_mesh(m))
    _emit(args, "mesh", None, None, doc)
    return EXIT_OK


def _cmd_fem(args) -> int:
    field = get_field(args.field)
    ns = [args.n0 * 2 ** k for k in range(args.levels)]
    if args.family == "uniform":
        factory = mesh.gen_uniform
    elif args.family == "crisscross":
        factory = lambda n: mesh.gen_crisscross_aniso(n, args.alpha)
    else:
        raise UsageError(f"--family {args.family!r} not one of uniform, crisscross")
    rep = fem.cea_study(factory, ns, field, family=args.family)
    columns = fem.CEA_CSV_COLUMNS
    rows = [[r.to_dict()[c] for c in columns] for r in rep.rows]
    config = {
        "family": args.family, "alpha": args.alpha, "field": args.field,
        "levels": args.levels, "n0": args.n0,
    }
    doc = report.json_text("fem", config,
                           {"rows": [r.to_dict() for r in rep.rows]})
    _emit(args, "fem", columns, rows, doc)
    if args.svg and args.out:
        series = {
            "interp_h1": [(r.max_R_K, r.interp_h1) for r in rep.rows],
            "h1_seminorm_error": [(r.max_R_K, r.h1_seminorm_error) for r in rep.rows],
            "h1_norm_error": [(r.max_R_K, r.h1_norm_error) for r in rep.rows],
        }
        svg = report.svg_loglog(series, xlabel="max R_K", ylabel="error",
                                title=f"{args.family} / {args.field}")
        report.write_text(f"{args.out}/fem.svg", svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circumlab",
        description="Triangle quality, interpolation-error constants, and "
                    "FEM convergence under the circumradius condition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json", "both"), default="both")
        p.add_argument("--svg", action="store_true", help="also write an SVG plot")
        p.add_argument("--seed", type=int, default=0, help="seed for random sweeps")
        p.add_argument("--quad-degree", type=int, default=None,
                       help="fixed quadrature degree override")

    def triangle_args(p):
        p.add_argument("vertices", nargs="*", default=[],
                       help="three vertices: x1,y1 x2,y2 x3,y3")
        p.add_argument("--needle", nargs=2, type=float, metavar=("H", "ALPHA"),
                       default=None, help="isosceles base H, height H**ALPHA")

    p = sub.add_parser("triangle", help="metrics, condition flags, canonical form")
    common(p)
    triangle_args(p)
    p.add_argument("--theta0", type=float, default=math.pi / 6)
    p.add_argument("--theta1", type=float, default=2 * math.pi / 3)
    p.add_argument("--sigma", type=float, default=math.inf)
    p.set_defaults(handler=_cmd_triangle)

    p = sub.add_parser("interp", help="interpolation-error reports and studies")
    common(p)
    triangle_args(p)
    p.add_argument("--field", default="sinsin")
    p.add_argument("--p", default="2")
    p.add_argument("--needle-study", type=float, default=None, metavar="ALPHA")
    p.add_argument("--levels", type=int, default=9,
                   help="rows h = 2^-2 .. 2^-(levels+1)")
    p.set_defaults(handler=_cmd_interp)

    p = sub.add_parser("constants", help="quotient constants and bound audits")
    common(p)
    triangle_args(p)
    p.add_argument("--babuska-aziz", action="store_true")
    p.add_argument("--kind", default="A1", help="A1, A2, B, or D")
    p.add_argument("--degree", type=int, default=12)
    p.add_argument("--audit", action="store_true",
                   help="run the lower-bound audits over seeded triangles")
    p.add_argument("--right", type=int, default=20,
                   help="audit: number of seeded right triangles")
    p.add_argument("--canonical", type=int, default=50,
                   help="audit: number of seeded canonical triangles")
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("mesh", help="generators, statistics, file checking")
    common(p)
    p.add_argument("--family", default="uniform")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--check", default=None, metavar="FILE",
                   help="validate a mesh file instead of generating")
    p.set_defaults(handler=_cmd_mesh)

    p = sub.add_parser("fem", help="Poisson convergence studies")
    common(p)
    p.add_argument("--family", default="crisscross")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--field", default="sinsin")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--n0", type=int, default=8, help="coarsest n")
    p.set_defaults(handler=_cmd_fem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownField as exc:
        print(f"unknown field: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidFamily as exc:
        print(f"invalid family: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateTriangle as exc:
        print(f"degenerate triangle: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (NoConvergence, IllConditioned) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CircumlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
