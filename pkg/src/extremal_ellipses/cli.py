"""Command-line entry point.

Subcommands::

    min-area4  X1 Y1 X2 Y2 X3 Y3 X4 Y4   minimal-area ellipse through four points
    steiner    X1 Y1 X2 Y2 X3 Y3         minimal-area ellipse through a triangle
    rect       F G --goal area|perimeter ellipse around the rectangle [-F,F]x[-G,G]
    tabulate   --n-min --n-max --rows    CSV table of n, s, t, z=t/s, i
    plot       pencil|area_curve|in_curves [points]   SVG figure

Exit status: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, svg
from .conic import Conic, ObliqueFrame, Point2, geometric_form
from .errors import GeometryInputError, NumericalFailure, ToleranceNotMet
from .oracles import QuadratureSpec, perimeter_quadrature
from .pencil import (
    Quad4,
    build_pencil,
    classify_pencil,
    degenerate_members,
    critical_cubic,
    limiting_conics,
    minimal_area_ellipse,
)
from .perimeter import (
    DEFAULT_ORDER,
    HIGH_ORDER,
    RectSpec,
    approx_n_of_i,
    min_area_rect,
    min_perimeter_rect,
    quarter_perimeter,
    tabulate,
)
from .steiner import RATIO, Triangle, centroid, ratio_convergents, steiner_ellipse

EXIT_INPUT = 2
EXIT_NUMERIC = 3
NEAR_ONE = 0.8
CROSS_CHECK_TOL = 1e-6  # series vs quadrature quarter perimeter, relative


class InputError(GeometryInputError):
    pass


# ------------------------------------------------------------------ serialisation


def _clean(obj):
    """Convert to JSON-native types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj) + 0.0  # folds -0.0 into 0.0
        return v if math.isfinite(v) else None
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def dump_json(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"


def dump_text(report: dict, prefix: str = "") -> str:
    lines = []
    for key, val in _clean(report).items():
        if isinstance(val, dict):
            lines.append(dump_text(val, f"{prefix}{key}.").rstrip("\n"))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(val)}")
    return "\n".join(lines) + "\n"


def frame_dict(fr: ObliqueFrame) -> dict:
    return {"origin": list(fr.origin), "unit_a": list(fr.unit_a), "unit_c": list(fr.unit_c), "omega": fr.angle_omega}


def conic_dict(c: Conic) -> dict:
    return {"A": c.A, "B": c.B, "C": c.C, "D": c.D, "E": c.E, "F": c.F, "frame": frame_dict(c.frame)}


def conic_from_dict(d: dict) -> Conic:
    fr = d["frame"]
    frame = ObliqueFrame(Point2(*fr["origin"]), tuple(fr["unit_a"]), tuple(fr["unit_c"]))
    return Conic(d["A"], d["B"], d["C"], d["D"], d["E"], d["F"], frame=frame)


def geometry_dict(c: Conic) -> dict:
    g = geometric_form(c)
    return {"center": list(g.center), "semiaxes": list(g.semiaxes), "angle": g.angle}


# ------------------------------------------------------------------ commands


def _load_points(args, count: int) -> list[float]:
    if args.from_report:
        data = json.loads(Path(args.from_report).read_text())
        pts = data["input"]["points"]
    elif args.input:
        data = json.loads(Path(args.input).read_text())
        pts = data["points"]
    else:
        pts = args.coords
    flat = [float(v) for p in pts for v in (p if isinstance(p, (list, tuple)) else [p])]
    if len(flat) != 2 * count:
        raise InputError(f"expected {count} points ({2 * count} numbers), got {len(flat)} numbers")
    if not all(math.isfinite(v) for v in flat):
        raise InputError("coordinates must be finite")
    return flat


def _quad_area(points: np.ndarray) -> float:
    # labels A, B on one diagonal and C, D on the other, so A C B D walks the boundary
    ring = points[[0, 2, 1, 3]]
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def cmd_min_area4(args) -> dict:
    flat = _load_points(args, 4)
    quad = Quad4.from_flat(flat)
    pencil = build_pencil(quad)
    rep = critical_cubic(pencil)
    best, area = minimal_area_ellipse(pencil)
    qc = classify_pencil(pencil)
    quad_area = _quad_area(np.array(pencil.labels))
    return {
        "command": "min-area4",
        "input": {"points": [list(p) for p in quad.points]},
        "pencil": {
            "frame": frame_dict(pencil.frame),
            "intercepts": {"a": pencil.a, "b": pencil.b, "c": pencil.c, "d": pencil.d},
            "labels": {k: list(p) for k, p in zip("ABCD", pencil.labels)},
            "coefficients": {
                "A": pencil.coeff_a,
                "C": pencil.coeff_c,
                "D": pencil.coeff_d,
                "E": pencil.coeff_e,
                "F": pencil.coeff_f,
            },
            "sqrt_ac": pencil.sqrt_ac,
        },
        "cubic": {
            "coefficients": list(rep.coefficients),
            "discriminant": rep.discriminant,
            "roots": [{"B": r, "tag": t.value} for r, t in zip(rep.roots, rep.tags)],
        },
        "minimal_ellipse": {
            "conic": conic_dict(best),
            "cartesian": {k: v for k, v in conic_dict(best.to_cartesian()).items() if k != "frame"},
            "geometry": geometry_dict(best),
            "area": area,
        },
        "quadrilateral": {"kind": qc.kind.value, "sigma": qc.sigma, "tau": qc.tau, "area": quad_area},
        "area_ratio": area / quad_area,
        "limiting_conics": [{"B": m.B, "class": m.kind.value, "lines": m.lines} for m in limiting_conics(pencil)],
        "degenerate_members": [{"B": m.B, "class": m.kind.value, "lines": m.lines} for m in degenerate_members(pencil)],
    }


def cmd_steiner(args) -> dict:
    flat = _load_points(args, 3)
    tri = Triangle.from_flat(flat)
    res = steiner_ellipse(tri, apex=args.apex)
    return {
        "command": "steiner",
        "input": {"points": [list(p) for p in tri.vertices]},
        "apex": res.apex,
        "conic": conic_dict(res.conic),
        "geometry": geometry_dict(res.conic),
        "center": list(res.center),
        "centroid": list(centroid(tri)),
        "tangents": [list(t) for t in res.tangents],
        "area": res.area,
        "triangle_area": res.triangle_area,
        "ratio": res.ratio,
        "ratio_exact": RATIO,
        "convergents": ratio_convergents(args.convergents),
    }


def cmd_rect(args) -> dict:
    if args.from_report:
        data = json.loads(Path(args.from_report).read_text())["input"]
        f, g, goal = float(data["f"]), float(data["g"]), data["goal"]
    else:
        f, g, goal = args.f, args.g, args.goal
    if not (f > 0 and g > 0 and math.isfinite(f) and math.isfinite(g)):
        raise InputError("rectangle half-sides must be positive and finite")
    rect = RectSpec(f, g)
    report = {"command": "rect", "input": {"f": f, "g": g, "goal": goal}, "h": rect.h, "i": rect.i}
    if goal == "area":
        e = min_area_rect(rect)
        report.update(
            a=e.a,
            b=e.b,
            area=math.pi * e.a * e.b,
            rectangle_area=4.0 * f * g,
            constraint_residual=e.passes_through(f, g),
        )
        return report
    order = args.order
    ell, qp = min_perimeter_rect(rect, order, args.tol)
    if abs(ell.n) > NEAR_ONE and order < HIGH_ORDER:
        print(
            f"warning: n = {abs(ell.n):.4f} is close to 1; raising series order from {order} to {HIGH_ORDER}",
            file=sys.stderr,
        )
        order = HIGH_ORDER
        ell, qp = min_perimeter_rect(rect, order, args.tol)
    quad_val = perimeter_quadrature(ell.a, ell.b, QuadratureSpec(abs_tol=1e-12 * max(1.0, ell.a)))
    if not abs(qp - quad_val) <= CROSS_CHECK_TOL * quad_val:
        raise ToleranceNotMet(
            f"series quarter perimeter {qp!r} differs from quadrature {quad_val!r} by more than "
            f"{CROSS_CHECK_TOL:g} relative at order {order}; try a larger --order"
        )
    i_abs = abs(rect.i)
    report.update(
        order=order,
        n=ell.n,
        a=ell.a,
        b=ell.b,
        a_over_b=ell.a / ell.b,
        constraint_residual=ell.passes_through(f, g),
        quarter_perimeter_series=qp,
        quarter_perimeter_quadrature=quad_val,
        quarter_perimeter_delta=qp - quad_val,
        min_area_quarter_perimeter=quarter_perimeter(min_area_rect(rect), order),
        approximations={s: approx_n_of_i(i_abs, s) for s in ("linear", "cubic", "compromise")},
    )
    return report


def cmd_tabulate(args) -> str:
    if not (0.0 < args.n_min < args.n_max < 1.0) or args.rows < 1:
        raise InputError("need 0 < n_min < n_max < 1 and rows >= 1")
    grid = np.linspace(args.n_min, args.n_max, args.rows)
    table = tabulate(grid, args.order)
    if table.inversions:
        print(f"warning: i decreases after rows {list(table.inversions)}", file=sys.stderr)
    if args.format == "json":
        return dump_json({"columns": ["n", "s", "t", "z", "i"], "rows": [[r.n, r.s, r.t, r.z, r.i] for r in table.rows]})
    out = ["n,s,t,z,i"]
    for r in table.rows:
        out.append(",".join(f"{v:.7f}" for v in (r.n, r.s, r.t, r.z, r.i)))
    return "\n".join(out) + "\n"


def cmd_plot(args) -> str:
    if args.kind == "in_curves":
        if args.coords:
            raise InputError("in_curves takes no points")
        return svg.in_curves_figure(args.order)
    pencil = build_pencil(Quad4.from_flat(_load_points(args, 4)))
    if args.kind == "pencil":
        return svg.pencil_figure(pencil, members=args.members)
    return svg.area_curve_figure(pencil, span=args.span)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremal-ellipses", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, formats, default):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", help="write to this file instead of stdout")

    def add_points(p):
        p.add_argument("coords", nargs="*", type=float, metavar="X Y")
        p.add_argument("--in", dest="input", help='JSON file with {"points": [[x, y], ...]}')
        p.add_argument("--from-report", dest="from_report", help="rerun from a JSON report written earlier")

    p = sub.add_parser("min-area4", help="minimal-area ellipse through four points")
    add_points(p)
    add_io(p, ["json", "text"], "json")

    p = sub.add_parser("steiner", help="minimal-area ellipse through three points")
    add_points(p)
    p.add_argument("--apex", type=int, default=None, help="index (0-2) of the frame vertex; default: largest angle")
    p.add_argument("--convergents", type=int, default=7)
    add_io(p, ["json", "text"], "json")

    p = sub.add_parser("rect", help="ellipse through the corners of a rectangle")
    p.add_argument("f", type=float, nargs="?", default=1.0, help="half-width")
    p.add_argument("g", type=float, nargs="?", default=1.0, help="half-height")
    p.add_argument("--goal", choices=["area", "perimeter"], default="perimeter")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--from-report", dest="from_report")
    add_io(p, ["json", "text"], "json")

    p = sub.add_parser("tabulate", help="table of the series and the i(n) relation")
    p.add_argument("--n-min", type=float, default=0.01)
    p.add_argument("--n-max", type=float, default=0.99)
    p.add_argument("--rows", type=int, default=99)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    add_io(p, ["csv", "json"], "csv")

    p = sub.add_parser("plot", help="SVG figures")
    p.add_argument("kind", choices=["pencil", "area_curve", "in_curves"])
    add_points(p)
    p.add_argument("--members", type=int, default=24)
    p.add_argument("--span", type=float, default=3.0, help="area_curve B range in units of sqrt(AC)")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    add_io(p, ["svg"], "svg")
    return parser


HANDLERS = {
    "min-area4": cmd_min_area4,
    "steiner": cmd_steiner,
    "rect": cmd_rect,
    "tabulate": cmd_tabulate,
    "plot": cmd_plot,
}


def _shield_negative_numbers(argv: list[str]) -> list[str]:
    """Prefix negative numbers with a space so argparse does not read "-1e4" as an option."""
    out = []
    for tok in argv:
        if tok.startswith("-") and not tok.startswith("--"):
            try:
                float(tok)
            except ValueError:
                pass
            else:
                tok = " " + tok
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_shield_negative_numbers(sys.argv[1:] if argv is None else list(argv)))
    try:
        result = HANDLERS[args.command](args)
    except (GeometryInputError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if isinstance(result, dict):
        result = dump_text(result) if args.format == "text" else dump_json(result)
    if args.out:
        Path(args.out).write_text(result, newline="\n")
    else:
        sys.stdout.write(result)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
