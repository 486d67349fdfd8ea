"""Command-line front end.

Every subcommand prints canonical JSON (or SVG text) on stdout, or writes it
to ``--out``; diagnostics go to stderr.  Exit codes: 0 success, 2 usage,
3 invalid input, 4 violated mathematical precondition, 5 internal invariant
breach.  ``--manifest FILE`` records the command line, the SHA-256 digests
of every input and output file, the seed and the tool version.

Polytopes, polygons and weights are given as JSON files or by the names of
bundled examples (see ``POLYTOPES`` and ``NAMED_WEIGHTS``).
"""

from __future__ import annotations

import argparse
import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .base import anticanonical_weights, build_base_complex, quintic_quadratic_weights
from .errors import InputError, InvariantError, SyzError
from .fan import max_crepant_subdivision, normal_fan, primitivity_report
from .lattice import is_primitive
from .locus import build_locus
from .moment import (
    TorusPoint, amoeba_sample, coefficients_from_weights, fattening_distance, moment_eval,
)
from .monodromy import (
    TYPE_II_TRIPLE, TYPE_III_TRIPLE, classify_vertex, dual_loop_monodromy, leg_monodromy, loop_monodromy,
    type_one_basis, verify_duality,
)
from .plfun import WeightFunction, convex_on_polygon, extend_pl, movable_cone_member
from .polytope import (
    CUBIC_DUAL_VERTICES, CUBIC_VERTICES, DEGREE5_TRIANGLE, QUARTIC_VERTICES, QUINTIC_VERTICES, SQUARE_VERTICES,
    UNIT_TRIANGLE, Polytope, ReflexivePolytope, dual_polytope, is_reflexive,
)
from .serialize import (
    dumps, float17, fraction_text, load_file, loads, parse_integer_vector, parse_rational_vector, points_json,
    polytope_json, rational_vector_json, read_matrix, read_polytope, read_weights, sha256_file, sha256_text,
    weights_json,
)
from .slicing import SlicingSystem, read_section
from .subdivision import (
    alternative_weights, check_polygon, gamma_graph, quadratic_polygon_weights, regular_subdivision,
    second_alternative_weights, standard_weights, wall_weights,
)
from .svg import SvgStyle, render_svg

POLYTOPES = {
    "quintic": QUINTIC_VERTICES,
    "quartic": QUARTIC_VERTICES,
    "cubic": CUBIC_VERTICES,
    "cubic-dual": CUBIC_DUAL_VERTICES,
    "square": SQUARE_VERTICES,
    "degree5-triangle": DEGREE5_TRIANGLE,
    "unit-triangle": UNIT_TRIANGLE,
}

NAMED_WEIGHTS: dict[str, Callable[[list], WeightFunction]] = {
    "standard": standard_weights,
    "alternative": alternative_weights,
    "second-alternative": second_alternative_weights,
    "wall": wall_weights,
    "quadratic": quadratic_polygon_weights,
    "anticanonical": anticanonical_weights,
    "quintic-quadratic": quintic_quadratic_weights,
}

NAMED_TRIPLES = {"type-II": TYPE_II_TRIPLE, "type-III": TYPE_III_TRIPLE}


class Run:
    """Inputs read and outputs written by one invocation, for the manifest."""

    def __init__(self, argv: Sequence[str]):
        self.argv = list(argv)
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.seed: int | None = None

    def read_json(self, path: str) -> Any:
        data = load_file(path)
        self.inputs[path] = sha256_file(path)
        return data


# -- argument resolution -------------------------------------------------------


def _polytope(run: Run, arg: str) -> Polytope:
    if arg in POLYTOPES and not Path(arg).exists():
        return Polytope.from_points(POLYTOPES[arg])
    return read_polytope(run.read_json(arg))


def _reflexive(run: Run, arg: str) -> ReflexivePolytope:
    return ReflexivePolytope(_polytope(run, arg))


def _polygon(run: Run, arg: str) -> Polytope:
    P = _polytope(run, arg)
    check_polygon(P)
    return P


def _weights(run: Run, arg: str, points: Sequence[tuple[int, ...]]) -> WeightFunction:
    if arg in NAMED_WEIGHTS and not Path(arg).exists():
        return NAMED_WEIGHTS[arg](list(points))
    return read_weights(run.read_json(arg))


def _integer_vector(text: str) -> tuple[int, ...]:
    try:
        return parse_integer_vector([int(x) for x in text.split(",")])
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _base_pair(run: Run, args, validate: bool = True):
    R = _reflexive(run, args.polytope)
    w = _weights(run, args.w, R.skeleton_points())
    v = _weights(run, args.v, R.swapped().skeleton_points())
    return R, w, v, build_base_complex(R, w, v, validate=validate)


# -- handlers -------------------------------------------------------------------


def cmd_polytope_dual(run: Run, args) -> dict:
    P = _polytope(run, args.polytope)
    return polytope_json(dual_polytope(P))


def cmd_polytope_points(run: Run, args) -> dict:
    P = _polytope(run, args.polytope)
    if args.interior:
        pts = P.interior_lattice_points()
    elif args.boundary:
        pts = P.boundary_lattice_points()
    elif args.skeleton is not None:
        pts = ReflexivePolytope(P).skeleton_points(args.skeleton)
    else:
        pts = P.lattice_points()
    return {"count": len(pts), **points_json(pts)}


def cmd_polytope_check_reflexive(run: Run, args) -> dict:
    P = _polytope(run, args.polytope)
    out: dict[str, Any] = {"reflexive": is_reflexive(P)}
    if out["reflexive"]:
        out["dual"] = polytope_json(dual_polytope(P))
    return out


def _fan(run: Run, args):
    R = _reflexive(run, args.polytope)
    F = normal_fan(R)
    return max_crepant_subdivision(F, R) if args.crepant else F


def cmd_fan_build(run: Run, args) -> dict:
    return _fan(run, args).to_json()


def cmd_fan_report(run: Run, args) -> dict:
    F = _fan(run, args)
    if not all(len(c) == F.rank for c in F.cones):
        return {"simplicial": False, "cones": [list(c) for c in F.cones]}
    report = primitivity_report(F)
    return {
        "simplicial": True,
        "cones": [{"cone": list(c), "volume": vol} for c, vol in report],
        "smooth": all(vol == 1 for _, vol in report),
        "rays_primitive": all(is_primitive(r) for r in F.rays),
    }


def _weight_domain(run: Run, arg: str | None) -> list[tuple[int, ...]]:
    """Boundary points of a polytope around the origin (weights on fan rays), all lattice points otherwise."""
    if arg is None:
        return []
    P = _polytope(run, arg)
    if P.contains_in_interior((0,) * P.rank):
        return P.boundary_lattice_points()
    return P.lattice_points()


def cmd_weights_check(run: Run, args) -> dict:
    w = _weights(run, args.weights, _weight_domain(run, args.polytope))
    out: dict[str, Any] = {}
    if any(not any(p) for p in w.points):
        # weights on a polygon through the origin: only the polygon convexity question makes sense
        out["member"] = None
    else:
        report = movable_cone_member(w, skeleton_only=args.skeleton, strict=args.strict)
        out.update({
            "member": report.member,
            "integral": report.integral,
            "failures": [list(p) for p in report.failures],
            "witnesses": [
                {"point": list(p), "witness": None if m is None else rational_vector_json(m)}
                for p, m in sorted(report.witnesses.items())
            ],
        })
    if w.rank == 2 and (args.polytope is None or not _polytope(run, args.polytope).contains_in_interior((0, 0))):
        conv = convex_on_polygon(w)
        out["polygon_convex"] = conv.convex
        out["polygon_failures"] = [list(p) for p in conv.failures]
    return out


def cmd_weights_extend(run: Run, args) -> dict:
    w = _weights(run, args.weights, _weight_domain(run, args.polytope))
    n = _integer_vector(args.n)
    return {"n": list(n), "value": fraction_text(extend_pl(w, n))}


def _gamma(run: Run, args):
    polygon = _polygon(run, args.polygon)
    w = _weights(run, args.weights, polygon.lattice_points()).scaled(args.scale)
    sub = regular_subdivision(polygon, w)
    return sub, gamma_graph(sub)


def cmd_gamma_build(run: Run, args) -> dict:
    sub, g = _gamma(run, args)
    return {
        "betti_1": g.betti_1,
        "graph": g.to_json(),
        "interior_points": len(sub.polygon.interior_lattice_points()),
        "subdivision": {
            "cells": [list(c) for c in sub.cells],
            "points": [list(p) for p in sub.points],
            "weights": weights_json(sub.weights),
        },
    }


def cmd_gamma_svg(run: Run, args) -> str:
    sub, g = _gamma(run, args)
    style = SvgStyle(skew=not args.square, show_gamma=not args.no_gamma)
    return render_svg(sub, g, style)


def cmd_locus_build(run: Run, args) -> dict:
    R, w, v, pair = _base_pair(run, args)
    locus = build_locus(R, w, v, pair)
    return {"counts": locus.counts(), **locus.to_json()}


def cmd_locus_type(run: Run, args) -> dict:
    R, w, v, pair = _base_pair(run, args, validate=False)
    locus = build_locus(R, w, v, pair)
    x = parse_rational_vector(args.point, R.rank)
    label = locus.fiber_type(x)
    return {"point": rational_vector_json(x), "stratum": label.stratum, "fiber_type": label.fiber_type}


def cmd_base_build(run: Run, args) -> dict:
    _, _, _, pair = _base_pair(run, args)
    out = {}
    for side, cx in (("on_v", pair.on_v), ("on_w", pair.on_w)):
        dims: dict[str, int] = {}
        for c in cx.cells:
            dims[str(c.dim)] = dims.get(str(c.dim), 0) + 1
        out[side] = {
            "cells_by_dim": dims,
            "simplices": len(cx.simplices),
            "cells": [
                {"a": [rational_vector_json(p) for p in a], "b": [rational_vector_json(p) for p in b],
                 "dim": c.dim, "point": rational_vector_json(cx.points[i])}
                for i, c in enumerate(cx.cells) for a, b in [cx.key(i)]
            ],
        }
    out["phi_cells"] = [[i, j] for i, j in sorted(pair.cell_bijection.items())]
    return out


def cmd_base_phi(run: Run, args) -> dict:
    R, _, _, pair = _base_pair(run, args, validate=False)
    x = parse_rational_vector(args.point, R.rank)
    y = pair.phi_inverse(x) if args.inverse else pair.phi(x)
    return {"point": rational_vector_json(x), "image": rational_vector_json(y),
            "map": "phi_inverse" if args.inverse else "phi"}


def cmd_base_pihat(run: Run, args) -> dict:
    R, _, _, pair = _base_pair(run, args, validate=False)
    x = parse_rational_vector(args.point, R.rank)
    y = pair.pi_hat_w(x) if args.side == "w" else pair.pi_hat_v(x)
    return {"point": rational_vector_json(x), "side": args.side, "image": rational_vector_json(y)}


def cmd_monodromy_loop(run: Run, args) -> dict:
    vecs = [_integer_vector(t) for t in (args.n, args.m, args.nprime, args.mprime)]
    T = loop_monodromy(*vecs)
    D = dual_loop_monodromy(*vecs)
    return {
        "operator": T.to_json(),
        "dual": D.to_json(),
        "determinant": T.determinant(),
        "unipotent": T.is_unipotent(),
        "duality": verify_duality(T, D),
    }


def cmd_monodromy_leg(run: Run, args) -> dict:
    R, w, v, pair = _base_pair(run, args, validate=False)
    locus = build_locus(R, w, v, pair)
    leg = _integer_vector(args.leg)
    if len(leg) != 2:
        raise InputError("a leg is given by two cell indices")
    T = leg_monodromy(locus, (leg[0], leg[1]))
    return {"leg": list(leg), "operator": T.to_json(), "type_one_basis": [list(r) for r in type_one_basis(T)]}


def cmd_monodromy_classify(run: Run, args) -> dict:
    if args.triple in NAMED_TRIPLES and not Path(args.triple).exists():
        mats = NAMED_TRIPLES[args.triple]
    else:
        data = loads(args.triple) if args.triple.lstrip().startswith("[") else run.read_json(args.triple)
        if isinstance(data, dict):
            data = data.get("matrices")
        if not isinstance(data, list) or len(data) != 3:
            raise InputError("expected a list of three matrices")
        mats = tuple(read_matrix(M) for M in data)
    return {"matrices": [[list(r) for r in M] for M in mats], "type": classify_vertex(*mats)}


def cmd_slice_reduce(run: Run, args) -> dict:
    R = _reflexive(run, args.polytope)
    system = SlicingSystem(R)
    s = read_section(R, run.read_json(args.section))
    out_s, record, trace = system.slice_reduce(s, tol=args.tol, max_iter=args.max_iter)
    replayed = system.replay(s, record)
    return {
        "iterations": len(record),
        "trace": [float17(t) for t in trace],
        "replay_error": float17(float(abs(replayed.values - out_s.values).max())),
        **out_s.to_json(),
    }


def cmd_moment_amoeba(run: Run, args) -> dict:
    run.seed = args.seed
    polygon = _polygon(run, args.polygon)
    w = _weights(run, args.weights, polygon.lattice_points()).scaled(args.scale)
    sub = regular_subdivision(polygon, w)
    coeffs = coefficients_from_weights(sub.points, w, seed=args.seed)
    sample = amoeba_sample(sub, coeffs, args.count, args.seed)
    top, hist = fattening_distance(sample, gamma_graph(sub))
    return {"max_distance": float17(top), "histogram": hist, "scale": fraction_text(args.scale), **sample.to_json()}


def cmd_moment_eval(run: Run, args) -> dict:
    polygon = _polytope(run, args.polygon)
    points = polygon.lattice_points()
    w = _weights(run, args.weights, points)
    u = parse_float_vector(args.log_radii)
    angles = parse_float_vector(args.angles) if args.angles else (0.0,) * len(u)
    F = moment_eval(points, w, TorusPoint(u, angles))
    return {"log_radii": [float17(x) for x in u], "value": [float17(x) for x in F]}


def parse_float_vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


# -- parser ----------------------------------------------------------------------


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--manifest", help="write a run manifest (JSON) to this file")

    parser = argparse.ArgumentParser(prog="syzmirror", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"syzmirror {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def group(name: str, help_text: str):
        g = groups.add_parser(name, help=help_text)
        return g.add_subparsers(dest="action", required=True)

    def command(sub, name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(handler=handler)
        return p

    def base_args(p):
        p.add_argument("--polytope", required=True, help="reflexive polytope (file or bundled name)")
        p.add_argument("--w", required=True, help="weights on the skeleton of the polytope")
        p.add_argument("--v", required=True, help="weights on the skeleton of the dual polytope")

    g = group("polytope", "lattice polytopes and duality")
    p = command(g, "dual", cmd_polytope_dual, "vertices of the polar dual")
    p.add_argument("polytope")
    p = command(g, "points", cmd_polytope_points, "lattice points")
    p.add_argument("polytope")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--interior", action="store_true")
    which.add_argument("--boundary", action="store_true")
    which.add_argument("--skeleton", type=int, metavar="CODIM", help="points on faces of codimension >= CODIM")
    p = command(g, "check-reflexive", cmd_polytope_check_reflexive, "reflexivity test")
    p.add_argument("polytope")

    g = group("fan", "normal fans and crepant refinements")
    for name, handler, text in (("build", cmd_fan_build, "rays and maximal cones"),
                                ("report", cmd_fan_report, "cone volumes and smoothness")):
        p = command(g, name, handler, text)
        p.add_argument("polytope")
        p.add_argument("--crepant", action="store_true", help="use the maximal crepant subdivision")

    g = group("weights", "weight functions and their extensions")
    p = command(g, "check", cmd_weights_check, "movable-cone membership and convexity")
    p.add_argument("--weights", required=True)
    p.add_argument("--polytope", help="domain for named weights")
    p.add_argument("--skeleton", action="store_true", help="test only codimension-two skeleton points")
    p.add_argument("--strict", action="store_true", help="require strict support")
    p = command(g, "extend", cmd_weights_extend, "piecewise-linear extension at a point")
    p.add_argument("--weights", required=True)
    p.add_argument("--polytope", help="domain for named weights")
    p.add_argument("--n", required=True, help="evaluation point, comma separated")

    g = group("gamma", "planar subdivisions and their Gamma graphs")
    for name, handler, text in (("build", cmd_gamma_build, "subdivision cells and Gamma as JSON"),
                                ("svg", cmd_gamma_svg, "picture of the subdivision and Gamma")):
        p = command(g, name, handler, text)
        p.add_argument("--polygon", required=True)
        p.add_argument("--weights", required=True)
        p.add_argument("--scale", type=_fraction_arg, default=1, help="multiply the weights by this factor")
        if name == "svg":
            p.add_argument("--square", action="store_true", help="draw the square lattice instead of the skewed one")
            p.add_argument("--no-gamma", action="store_true", help="draw the subdivision only")

    g = group("locus", "the singular locus Gamma of the base")
    p = command(g, "build", cmd_locus_build, "Gamma as a subcomplex of the base")
    base_args(p)
    p = command(g, "type", cmd_locus_type, "stratum and fiber type at a point")
    base_args(p)
    p.add_argument("--point", required=True, help="point on the boundary, comma-separated rationals")

    g = group("base", "the base complexes and the map phi")
    p = command(g, "build", cmd_base_build, "cells of both base complexes")
    base_args(p)
    p = command(g, "phi", cmd_base_phi, "evaluate phi or its inverse")
    base_args(p)
    p.add_argument("--point", required=True)
    p.add_argument("--inverse", action="store_true")
    p = command(g, "pihat", cmd_base_pihat, "evaluate the projection onto the polytope boundary")
    base_args(p)
    p.add_argument("--point", required=True)
    p.add_argument("--side", choices=("v", "w"), default="v")

    g = group("monodromy", "monodromy operators")
    p = command(g, "loop", cmd_monodromy_loop, "operator of the loop (n, m, n', m') and its dual")
    for flag in ("--n", "--m", "--nprime", "--mprime"):
        p.add_argument(flag, required=True, help="comma-separated integers")
    p = command(g, "leg", cmd_monodromy_leg, "operator around a leg of Gamma")
    base_args(p)
    p.add_argument("--leg", required=True, help="two cell indices, comma separated")
    p = command(g, "classify", cmd_monodromy_classify, "type of a vertex from three operators")
    p.add_argument("triple", help="JSON list of three matrices, or type-II / type-III")

    g = group("slice", "reduction of sections to the slice")
    p = command(g, "reduce", cmd_slice_reduce, "iterate the slicing automorphisms")
    p.add_argument("--polytope", required=True)
    p.add_argument("--section", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=30)

    g = group("moment", "moment map and amoeba sampling")
    p = command(g, "amoeba", cmd_moment_amoeba, "sample a curve and measure its distance to Gamma")
    p.add_argument("--polygon", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--scale", type=_fraction_arg, default=1)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p = command(g, "eval", cmd_moment_eval, "evaluate the moment map")
    p.add_argument("--polygon", required=True, help="polytope whose lattice points carry the weights")
    p.add_argument("--weights", required=True)
    p.add_argument("--log-radii", required=True)
    p.add_argument("--angles")
    return parser


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--m -1,0,2`` into ``--m=-1,0,2`` so argparse does not read the value as an option."""
    out: list[str] = []
    k = 0
    while k < len(argv):
        token = argv[k]
        nxt = argv[k + 1] if k + 1 < len(argv) else ""
        if token.startswith("--") and "=" not in token and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{token}={nxt}")
            k += 2
        else:
            out.append(token)
            k += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    run = Run(argv)
    try:
        result = args.handler(run, args)
        text = result if isinstance(result, str) else dumps(result)
        if args.out:
            _write(args.out, text)
            run.outputs[args.out] = sha256_text(text)
        else:
            sys.stdout.write(text)
            run.outputs["<stdout>"] = sha256_text(text)
        if args.manifest:
            _write(args.manifest, dumps({
                "command": run.argv,
                "inputs": run.inputs,
                "outputs": run.outputs,
                "seed": run.seed,
                "version": __version__,
            }))
    except SyzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        # anything not raised on purpose is a defect; report it as an invariant breach
        traceback.print_exc(file=sys.stderr)
        return InvariantError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
