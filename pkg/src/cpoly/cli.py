"""Command-line interface: ``cpoly <command> ...``.

Exit codes: 0 success or property true, 1 property false, 2 invalid
input, 3 numerical failure.  Every command accepts ``--json``; otherwise
results are printed as tab-separated ``key<TAB>value`` lines.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from . import fileio, generators
from .continuation import (
    PathSpec,
    congruent_via_deformation,
    deform,
    fit_congruence,
)
from .errors import (
    CpolyError,
    GenerationFailed,
    InputError,
    NotLocallyCongruent,
    NumericalError,
)
from .polyhedron import Shallowness, unitary_edges
from .report import analyze
from .rigidity import (
    RANK_TAU,
    jacobian,
    kernel_flex_residual,
    measure,
    numerical_rank,
)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("cpoly")


def _emit(args, data: dict, lines=None) -> None:
    if args.json:
        print(fileio.dumps(data))
        return
    for row in lines if lines is not None else data.items():
        print("\t".join(_cell(x) for x in row))


def _cell(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    if isinstance(x, (list, tuple)):
        return ",".join(_cell(v) for v in x)
    if x is None:
        return "-"
    return str(x)


def _default_seed(seed):
    if seed is not None:
        return seed
    return int(os.environ.get("CPOLY_SEED", "0"))


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    P = fileio.load(args.file)
    _emit(args, {"valid": True, "n": P.n, "edges": P.triangulation.m,
                 "faces": len(P.triangulation.faces)})
    return EXIT_OK


def cmd_analyze(args) -> int:
    P = fileio.load(args.file)
    rep = analyze(P)
    d = rep.to_dict()
    if args.json:
        _emit(args, d)
        return EXIT_OK
    lines = [
        ("strictly_convex", rep.strictly_convex),
        ("convex", rep.convex),
        ("edge_determinant_sign", rep.edge_determinant_sign),
        ("min_abs_determinant", rep.min_abs_determinant),
        ("hyperbolic", rep.hyperbolic),
        ("shallowness", rep.shallowness.value),
        ("unitary_edges", ["-".join(map(str, e)) for e in rep.unitary_edges] or None),
        ("proper", rep.proper if rep.proper is not None else rep.proper_error),
    ]
    for v, a, b, m in rep.witnesses:
        lines.append(("witness", f"vertex={v}", f"point_neighbor={a}", f"disk_neighbor={b}",
                      f"margin={m!r}"))
    for f, why in rep.hyperbolic_failures.items():
        lines.append(("non_hyperbolic_face", f, why))
    _emit(args, d, lines)
    return EXIT_OK


def cmd_measures(args) -> int:
    P = fileio.load(args.file)
    f = measure(P)
    tri = P.triangulation
    rows = []
    for k, (i, j) in enumerate(tri.edges):
        rows.append(("edge", tri.ids[i], tri.ids[j], float(f[k])))
    for i in range(P.n):
        rows.append(("vertex", tri.ids[i], tri.ids[i], float(f[tri.m + i])))
    if args.json:
        _emit(args, {"measures": [float(x) for x in f],
                     "index": [[kind, a, b] for kind, a, b, _ in rows]})
    else:
        print("kind\ti\tj\tvalue")
        _emit(args, {}, rows)
    return EXIT_OK


def cmd_rank(args) -> int:
    P = fileio.load(args.file)
    J = jacobian(P)
    rep = numerical_rank(J, args.tau)
    convex = analyze(P).strictly_convex
    data = {
        "rank": rep.rank,
        "expected": rep.expected,
        "gap": rep.gap,
        "relative_floor": rep.relative_floor,
        "kernel_flex_residual": kernel_flex_residual(P, J),
        "theorem_applies": convex,
        "singular_values": [float(x) for x in rep.singular_values],
    }
    if args.figure:
        from .figures import rank_figure

        rank_figure(rep, args.figure, args.tau)
        data["figure"] = args.figure
    if args.json:
        _emit(args, data)
    else:
        print(f"rank {rep.rank} / expected {rep.expected}")
        _emit(args, {k: v for k, v in data.items() if k not in ("rank", "expected", "singular_values")})
    if not convex:
        log.warning("not strictly convex: the rank is not covered by the rigidity theorem")
    return EXIT_OK if rep.full else EXIT_FALSE


def _map_rows(m):
    return [[float(x) for x in row] for row in m.m] if m is not None else None


def cmd_congruent(args) -> int:
    P, Q = fileio.load(args.a), fileio.load(args.b)
    try:
        if args.via_deformation:
            ev = congruent_via_deformation(P, Q, args.mu, args.steps, args.tol, args.direction)
            res = ev.result
        else:
            ev, res = None, fit_congruence(P, Q, tol=args.tol)
    except NotLocallyCongruent as exc:
        _emit(args, {"congruent": False, "reason": f"not locally congruent: {exc}"})
        return EXIT_FALSE
    ids = P.triangulation.ids
    data = {
        "congruent": res.congruent,
        "residual": res.residual,
        "pairing_residual": res.pairing_residual,
        "anchor_face": [ids[i] for i in res.anchor_face] if res.anchor_face else None,
        "map": _map_rows(res.map),
    }
    if ev is not None:
        data.update(
            deformed=ev.deformed,
            grid_t=ev.ts[1:],
            grid_congruent=[r.congruent for r in ev.grid_fits],
            grid_residuals=[r.residual for r in ev.grid_fits],
            trail_t=ev.trail_ts,
            trail_differences=ev.trail_differences,
            final_difference=ev.final_difference,
            limit_gap=ev.limit_gap,
        )
        if args.figure:
            from .figures import congruence_figure

            congruence_figure(ev, args.figure)
            data["figure"] = args.figure
    if args.json:
        _emit(args, data)
    else:
        lines = [(k, v) for k, v in data.items() if k not in ("map", "grid_t", "grid_congruent",
                                                             "grid_residuals", "trail_t",
                                                             "trail_differences")]
        if res.map is not None:
            lines += [("map_row", *row) for row in _map_rows(res.map)]
        if ev is not None and ev.deformed:
            lines.append(("grid", "t", "congruent", "residual"))
            lines += [("grid", t, r.congruent, r.residual) for t, r in zip(ev.ts[1:], ev.grid_fits)]
            diffs = [math.nan] * (len(ev.trail_ts) - len(ev.trail_differences)) + ev.trail_differences
            lines.append(("trail", "t", "successive_difference"))
            lines += [("trail", t, d) for t, d in zip(ev.trail_ts, diffs)]
        _emit(args, data, lines)
    return EXIT_OK if res.congruent else EXIT_FALSE


def cmd_deform(args) -> int:
    P = fileio.load(args.file)
    edges = unitary_edges(P)
    spec = PathSpec(tuple(edges), args.mu, args.steps, args.deform_direction)
    pre = analyze(P)
    if not (pre.strictly_convex and pre.hyperbolic and pre.proper):
        _emit(args, {"deformed": False, "reason": "input is not strictly convex, hyperbolic and proper"})
        return EXIT_FALSE
    result = deform(P, spec)
    final = result.final.to_polyhedron()
    ids = P.triangulation.ids
    labels = {e: f"{ids[e[0]]}-{ids[e[1]]}" for e in spec.unitary_edge_set}
    if args.output:
        fileio.save(final, args.output, {
            "deformed_from": os.path.basename(args.file), "mu": args.mu, "steps": args.steps,
            "direction": args.deform_direction, "edges": [labels[e] for e in spec.unitary_edge_set],
        })
    post = analyze(final)
    data = {
        "deformed_edges": [labels[e] for e in spec.unitary_edge_set],
        "t_final": result.ts[-1],
        "max_measure_residual": result.max_residual,
        "halvings": result.halvings,
        "strictly_convex": post.strictly_convex,
        "hyperbolic": post.hyperbolic,
        "proper": post.proper,
        "unitary_edges_after": ["-".join(map(str, e)) for e in post.unitary_edges],
        "output": args.output,
    }
    if args.figure:
        from .figures import deform_figure

        deform_figure(result, labels, args.figure)
        data["figure"] = args.figure
    _emit(args, data)
    return EXIT_OK


# What every generated instance must satisfy before it is written.
_ADVERTISED = {
    "tetra-koebe": dict(shallowness=Shallowness.KOEBE, proper=True),
    "octa-koebe": dict(shallowness=Shallowness.KOEBE, proper=True),
    "tetra-hyperideal": dict(shallowness=Shallowness.HYPERIDEAL, proper=True),
    "random-shallow": dict(globally_shallow=True, proper=True),
    "transported": dict(),
    "deep-overlap-star": dict(proper=False),
}


def _certify_generated(kind, P) -> None:
    rep = analyze(P)
    want = _ADVERTISED[kind]
    ok = rep.strictly_convex and rep.hyperbolic
    if "shallowness" in want:
        ok &= rep.shallowness is want["shallowness"]
    if "globally_shallow" in want:
        ok &= rep.shallowness.globally_shallow
    if "proper" in want:
        ok &= rep.proper is want["proper"]
    if not ok:
        raise GenerationFailed(f"{kind}: generated instance fails its certificate")


def cmd_generate(args) -> int:
    seed = _default_seed(args.seed)
    base = None
    if args.kind == "transported":
        base = fileio.load(args.base) if args.base else generators.generate(args.base_kind)
    if args.kind in ("tetra-koebe", "octa-koebe") and args.seed is not None:
        P = {"tetra-koebe": generators.tetra_koebe,
             "octa-koebe": generators.octa_koebe}[args.kind](seed)
    else:
        P = generators.generate(args.kind, h=args.h, n=args.n, seed=seed,
                                scale=args.scale, base=base)
    if args.kind in _ADVERTISED and args.kind != "transported":
        _certify_generated(args.kind, P)
    meta = {"kind": args.kind, "seed": seed}
    if args.kind == "tetra-hyperideal":
        meta["h"] = args.h
    if args.kind == "random-shallow":
        meta["n"] = args.n
    if args.kind == "transported":
        meta.update(scale=args.scale, base=args.base or args.base_kind)
    if args.output:
        fileio.save(P, args.output, meta)
    _emit(args, {"kind": args.kind, "n": P.n, "seed": seed, "output": args.output})
    if not args.output and not args.json:
        print(fileio.dumps(fileio.to_document(P, meta)))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import LAYERS, RenderSpec, render

    P = fileio.load(args.file)
    layers = tuple(args.layers.split(",")) if args.layers else ("disks", "orthocircles", "tangency")
    if args.vertex is not None and "link" not in layers:
        layers += ("link",)
    if args.vertex is not None and args.vertex not in P.triangulation.ids:
        raise InputError(f"no vertex {args.vertex}")
    bad = [x for x in layers if x not in LAYERS]
    if bad:
        raise InputError(f"unknown layers {bad}; choose from {','.join(LAYERS)}")
    spec = RenderSpec(pole=tuple(args.pole) if args.pole else None, layers=layers,
                      vertex=args.vertex, size=args.size)
    svg = render(P, spec)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    _emit(args, {"output": args.output, "layers": list(layers)})
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpoly", description="Circle polyhedra on the de Sitter sphere.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check a polyhedron file")
    sp.add_argument("file")

    sp = add("analyze", cmd_analyze, "convexity, hyperbolicity, shallowness, properness")
    sp.add_argument("file")

    sp = add("measures", cmd_measures, "inversive measure vector (edges, then vertices)")
    sp.add_argument("file")

    sp = add("rank", cmd_rank, "rank of the measure Jacobian")
    sp.add_argument("file")
    sp.add_argument("--tau", type=float, default=RANK_TAU)
    sp.add_argument("--figure", help="write a singular-value plot (png/pdf/svg)")

    sp = add("congruent", cmd_congruent, "decide Möbius congruence of two polyhedra")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--via-deformation", action="store_true")
    sp.add_argument("--mu", type=float, default=0.1)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--deform-direction", dest="direction", choices=["disjoint", "overlap"],
                    default="disjoint")
    sp.add_argument("--figure", help="write the evidence-trail plot")

    sp = add("deform", cmd_deform, "push tangent edges away from Inv = 1")
    sp.add_argument("file")
    sp.add_argument("--mu", type=float, default=0.1)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--deform-direction", choices=["disjoint", "overlap"], default="disjoint")
    sp.add_argument("-o", "--output")
    sp.add_argument("--figure", help="write Inv and residual along the path")

    sp = add("generate", cmd_generate, "write a canonical or random instance")
    sp.add_argument("kind", choices=generators.KINDS)
    sp.add_argument("--h", type=float, default=0.7, help="cap offset for tetra-hyperideal")
    sp.add_argument("--n", type=int, default=8, help="vertex count for random-shallow")
    sp.add_argument("--seed", type=int, default=None, help="default: $CPOLY_SEED or 0")
    sp.add_argument("--scale", type=float, default=1.0, help="transport size")
    sp.add_argument("--base", help="base file for 'transported'")
    sp.add_argument("--base-kind", default="tetra-koebe", help="base kind when --base is absent")
    sp.add_argument("-o", "--output")

    sp = add("render", cmd_render, "SVG picture by stereographic projection")
    sp.add_argument("file")
    sp.add_argument("--vertex", type=int, help="draw the link of this vertex id")
    sp.add_argument("--pole", type=float, nargs=3, metavar=("X", "Y", "Z"))
    sp.add_argument("--layers", help="comma list of disks,orthocircles,link,tangency")
    sp.add_argument("--size", type=int, default=600)
    sp.add_argument("-o", "--output", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        with np.errstate(all="ignore"):
            return args.func(args)
    except NotLocallyCongruent as exc:
        print(f"error: not locally congruent: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (InputError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, ArithmeticError, CpolyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
