"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
Each ``check_cN`` returns ``(ok, detail)``; tolerances are the ones the
criteria prescribe and are not adjusted to make a check pass.
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import SEED, random_ellipse, random_linear, random_pencil  # noqa: E402
from extremal_ellipses.conic import (  # noqa: E402
    Conic,
    apply_affine,
    ellipse_area,
    hyperbola_tangent_triangle_area,
    signed_area_invariant,
)
from extremal_ellipses.oracles import central_diff, central_diff2, central_diff5, conic_area_quadrature, grid_argmin  # noqa: E402
from extremal_ellipses.pencil import (  # noqa: E402
    Pencil4,
    RootTag,
    critical_cubic,
    member,
    signed_area_curve,
)
from extremal_ellipses.perimeter import (  # noqa: E402
    RectSpec,
    approx_n_of_i,
    i_of_n,
    min_area_rect,
    min_perimeter_rect,
    n_of_i,
    ode_in_residual,
    ode_s_residual,
    partial_product_exact,
    partial_series_sum_exact,
    product_pi_over_2sqrt2,
    riccati_step_integrate,
    series_s,
    series_t,
)
from extremal_ellipses.steiner import (  # noqa: E402
    RATIO,
    Triangle,
    area_functional,
    centroid,
    ratio_convergents,
    steiner_ellipse,
    vertex_tangents,
)
from extremal_ellipses.errors import DegenerateTriangle  # noqa: E402

RESULTS: dict[str, str] = {}


def _rng():
    return np.random.default_rng(SEED)


def _rel(a, b):
    return abs(a - b) / abs(b)


# ------------------------------------------------------------------ 1 area formula


def check_c1():
    rng = _rng()
    worst = 0.0
    for _ in range(500):
        con, _exact = random_ellipse(rng)
        worst = max(worst, _rel(ellipse_area(con), conic_area_quadrature(con)))
    fam = 0.0
    for f, g in rng.uniform(0.1, 10, (100, 2)):
        con = Conic(f * f, 0.0, g * g, 0.0, 0.0, -f * f * g * g)
        fam = max(fam, _rel(ellipse_area(con), math.pi * f * g))
    ok = worst < 1e-7 and fam < 1e-12
    return ok, f"500 ellipses: max rel diff vs chord quadrature {worst:.2e} (<1e-7); f^2x^2+g^2y^2=f^2g^2: max rel err {fam:.2e} (<1e-12)"


# ------------------------------------------------------------------ 2 affine covariance


def check_c2():
    rng = _rng()
    worst_area = worst_inv = 0.0
    negative = 0
    for _ in range(200):
        con, _ = random_ellipse(rng)
        s = random_linear(rng)
        det = float(np.linalg.det(s))
        negative += det < 0
        moved = apply_affine(con, s, rng.uniform(-3, 3, 2))
        worst_area = max(worst_area, _rel(ellipse_area(moved) * abs(det), ellipse_area(con)))
        worst_inv = max(worst_inv, _rel(signed_area_invariant(moved), signed_area_invariant(con) / abs(det)))
    ok = worst_area < 1e-9 and worst_inv < 1e-9
    return ok, (
        f"200 maps ({negative} orientation-reversing): area*|det| max rel dev {worst_area:.2e}; "
        f"invariant vs invariant/|det| max rel dev {worst_inv:.2e} (both <1e-9)"
    )


# ------------------------------------------------------------------ 3 cubic structure


def check_c3():
    rng = _rng()
    bad = []
    for k in range(1000):
        p = random_pencil(rng)
        rep = critical_cubic(p)
        r = p.sqrt_ac
        inside = [x for x in rep.roots if abs(x) < r]
        lo, hi = -r * (1 - 1e-6), r * (1 - 1e-6)
        samples = 4096
        step = (hi - lo) / (samples - 1)
        arg = grid_argmin(lambda b: signed_area_curve(p, b), lo, hi, samples=samples, refine=False)
        fine = (
            rep.discriminant > 0
            and len(set(rep.roots)) == 3
            and all(math.isfinite(x) for x in rep.roots)
            and len(inside) == 1
            and abs(arg - inside[0]) <= step
        )
        if not fine:
            bad.append(k)
    return not bad, f"1000 quadrilaterals: {1000 - len(bad)} with positive discriminant, three real roots, one elliptic root within one 4096-grid step of the area argmin"


# ------------------------------------------------------------------ 4 closed-form roots


def _is_cubic_root(rep, x, tol):
    k3, k2, k1, k0 = rep.coefficients
    scale = max(abs(k3) * abs(x) ** 3, abs(k2) * x * x, abs(k1) * abs(x), abs(k0), 1e-300)
    return abs(rep.residual(x)) <= tol * scale


def check_c4():
    rng = _rng()
    par_err = kite_err = 0.0
    verified = True
    for _ in range(100):
        a, c = rng.uniform(0.5, 10, 2)
        p = Pencil4.from_intercepts(a, -a, c, -c, rng.uniform(0.3, 2.8))
        rep = critical_cubic(p)
        want = [-p.sqrt_ac, 0.0, p.sqrt_ac]
        par_err = max(par_err, max(abs(x - y) for x, y in zip(rep.roots, want)))
        verified &= all(_is_cubic_root(rep, x, 1e-10) for x in want)
    for _ in range(100):
        a = rng.uniform(0.5, 10)
        b = -rng.uniform(0.5, 10)
        c = rng.uniform(0.5, 10)
        p = Pencil4.from_intercepts(a, b, c, -c, rng.uniform(0.3, 2.8))
        rep = critical_cubic(p)
        h = 0.5 * c * math.sqrt(3 * a * a + 3 * b * b + 2 * a * b)
        got = rep.roots_tagged(RootTag.CRITICAL_HYPERBOLA)
        kite_err = max(kite_err, abs(got[0] + h) / h, abs(got[1] - h) / h)
        verified &= _is_cubic_root(rep, h, 1e-9) and _is_cubic_root(rep, -h, 1e-9)
    trap_miss = 0.0
    trap_half = 0.0
    for _ in range(100):
        a = rng.uniform(0.5, 10)
        b = -rng.uniform(0.5, 10)
        p = Pencil4.from_intercepts(a, b, a, b, rng.uniform(0.3, 2.8))
        rep = critical_cubic(p)
        base = a * a + a * b + b * b
        rad = math.sqrt(a**4 - a * a * b * b + b**4)
        for unhalved in (base - rad, base + rad):
            trap_miss = max(trap_miss, min(abs(x - unhalved) for x in rep.roots) / abs(unhalved))
            trap_half = max(trap_half, min(abs(x - unhalved / 2) for x in rep.roots) / abs(unhalved / 2))
            verified &= _is_cubic_root(rep, unhalved / 2, 1e-9)
    ok = verified and par_err < 1e-10 and kite_err < 1e-9 and trap_miss < 1e-9
    return ok, (
        f"closed forms that hold verified as cubic roots: {verified}; parallelogram max err {par_err:.1e} (<1e-10); kite max rel err {kite_err:.1e} (<1e-9); "
        f"trapezium a^2+ab+b^2 +- sqrt(a^4-a^2b^2+b^4): max rel miss {trap_miss:.2f} (<1e-9 required). "
        f"The true roots are half that expression (max rel err {trap_half:.1e}) plus ab"
    )


# ------------------------------------------------------------------ 5 critical hyperbolas


def check_c5():
    rng = _rng()
    pencils = [Pencil4.from_intercepts(4.0, -1.0, 1.0, -1.0)] + [random_pencil(rng, via_points=False) for _ in range(100)]
    n_roots = first_ok = concave = tri_ok = 0
    for p in pencils:
        rep = critical_cubic(p)
        for B in rep.roots_tagged(RootTag.CRITICAL_HYPERBOLA):
            n_roots += 1
            gap = abs(B) - p.sqrt_ac
            h = 1e-4 * gap

            def inv(b):
                return float(signed_area_curve(p, [b])[0])

            def tri(b):
                return hyperbola_tangent_triangle_area(member(p, b), 0.0)

            # derivative scale: |A| per unit of relative distance to the pole
            first_ok += abs(central_diff(inv, B, h)) * gap < 1e-6 * abs(inv(B))
            concave += central_diff2(inv, B, h) <= 0
            # the asymptote construction carries ~1e-8 relative noise near the poles,
            # so a wider fourth-order stencil keeps that noise below the tolerance
            tri_ok += abs(central_diff5(tri, B, 1e-2 * gap)) * gap < 1e-6 * tri(B)
    ok = first_ok == n_roots and concave == n_roots and tri_ok == n_roots
    return ok, (
        f"{n_roots} critical hyperbolas: first derivative vanishes at {first_ok}; "
        f"second derivative <= 0 at {concave} (required: all; every one is a strict local minimum of the signed invariant); "
        f"tangent-triangle area stationary at {tri_ok}"
    )


# ------------------------------------------------------------------ 6 Steiner


def _random_triangle(rng):
    while True:
        try:
            t = Triangle(*map(tuple, rng.uniform(-5, 5, (3, 2))))
        except DegenerateTriangle:
            continue
        if t.area > 0.05:
            return t


def check_c6():
    rng = _rng()
    ratio_err = center_err = tangent_err = 0.0
    for _ in range(500):
        t = _random_triangle(rng)
        r = steiner_ellipse(t)
        ratio_err = max(ratio_err, abs(r.ratio - 4 * math.pi / (3 * math.sqrt(3))))
        c = centroid(t)
        center_err = max(center_err, math.dist(r.center, c) / (1 + math.hypot(*c)))
        v = t.vertices
        for k, d in enumerate(vertex_tangents(r, t)):
            opp = np.subtract(v[(k + 2) % 3], v[(k + 1) % 3])
            opp = opp / np.linalg.norm(opp)
            tangent_err = max(tangent_err, abs(d[0] * opp[1] - d[1] * opp[0]))
    grid_ok = 0
    for _ in range(5):
        r = steiner_ellipse(_random_triangle(rng))
        s = np.linspace(0.25 * r.a / r.c, 4 * r.a / r.c, 512)
        phi = np.linspace(0.01, math.pi - 0.01, 512)
        S, P = np.meshgrid(s, phi)
        vals = area_functional(S, P, r.a, r.c, r.omega)
        j, i = np.unravel_index(np.argmin(vals), vals.shape)
        grid_ok += abs(s[i] - r.a / r.c) <= s[1] - s[0] and abs(phi[j] - math.pi / 3) <= phi[1] - phi[0]
    conv = [str(f) for f in ratio_convergents(7)]
    want = ["2", "5/2", "12/5", "17/7", "29/12", "104/43", "237/98"]
    shown = f"{RATIO:.5f}"
    ok = (
        ratio_err < 1e-10
        and center_err < 1e-10
        and tangent_err < 1e-9
        and grid_ok == 5
        and conv == want
        and shown == "2.41840"
    )
    return ok, (
        f"500 triangles: ratio err {ratio_err:.1e}, centre err {center_err:.1e}, tangent err {tangent_err:.1e}; "
        f"(s, phi) 512x512 grid min at (a/c, 60 deg) for {grid_ok}/5; ratio prints {shown}; convergents {', '.join(conv)}"
    )


# ------------------------------------------------------------------ 7 perimeter series


def check_c7():
    s = series_s(0.6)
    t = series_t(0.6)
    i = float(i_of_n(0.6))
    n = n_of_i(0.838333)
    ok = (
        abs(s - 0.9752242) < 2e-6
        and abs(t - 0.0550608) < 1e-5
        and abs(t - 0.0550685) < 1e-5
        and abs(i - 0.838333) < 5e-5
        and abs(n - 0.6) < 1e-4
    )
    return ok, f"s(3/5)={s:.7f}, t(3/5)={t:.7f}, i(0.6)={i:.6f}, n(0.838333)={n:.6f}"


# ------------------------------------------------------------------ 8 ODE consistency


def check_c8():
    ode = max(abs(ode_s_residual(n, order=256)) for n in np.linspace(0.05, 0.9, 35))
    z0 = series_t(0.1) / series_s(0.1)
    riccati = max(
        abs(riccati_step_integrate(0.1, z0, n1, 10_000) - series_t(n1) / series_s(n1)) for n1 in (0.2, 0.3, 0.4, 0.5, 0.6)
    )
    worst = {}
    for form in ("squared_factor", "linear_factor"):
        res = []
        for n in np.linspace(0.05, 0.9, 20):
            res.append(abs(ode_in_residual(n, float(i_of_n(n, 256)), central_diff(lambda x: i_of_n(x, 256), n, 1e-5), form)))
        worst[form] = max(res)
    passing = [f for f, w in worst.items() if w < 1e-4]
    ok = ode < 1e-6 and riccati < 1e-4 and len(passing) == 1
    return ok, (
        f"ODE for s: max residual {ode:.1e} on [0.05, 0.9]; Riccati vs t/s max diff {riccati:.1e} on [0.1, 0.6]; "
        f"i-n ODE: squared_factor {worst['squared_factor']:.1e}, linear_factor {worst['linear_factor']:.1e}, "
        f"holding form: {passing[0] if len(passing) == 1 else passing}"
    )


# ------------------------------------------------------------------ 9 product identities


def check_c9():
    exact = all(partial_product_exact(k) * partial_series_sum_exact(k) == Fraction(1) for k in range(1, 13))
    prod = product_pi_over_2sqrt2(10_000)
    limit = 2 * math.sqrt(2) / math.pi
    tails = [(k, k * (series_s(1.0, k) - limit)) for k in (10, 100, 1000, 10_000)]
    bound = 0.2
    tail_ok = all(0 < v < bound for _, v in tails)
    ok = exact and abs(prod - math.pi / (2 * math.sqrt(2))) < 1e-4 and tail_ok
    return ok, (
        f"product*sum == 1 exactly for k<=12: {exact}; 10^4-term product {prod:.8f} vs {math.pi / (2 * math.sqrt(2)):.8f}; "
        f"k*(s_k(1) - 2sqrt2/pi): " + ", ".join(f"{v:.4f}@{k}" for k, v in tails) + f" (< C={bound})"
    )


# ------------------------------------------------------------------ 10 rectangle solvers


def check_c10():
    rng = _rng()
    area_ok = True
    for f, g in rng.uniform(0.1, 10, (100, 2)):
        e = min_area_rect(RectSpec(f, g))
        area_ok &= e.a == f * math.sqrt(2) and e.b == g * math.sqrt(2)
        area_ok &= abs(e.passes_through(f, g)) <= 4 * np.finfo(float).eps
    e, _ = min_perimeter_rect(RectSpec(3.372108, 1.0))
    aspect = e.a / e.b
    grid = np.linspace(0.001, 0.999, 999)
    exact = np.array([n_of_i(i) for i in grid])
    dev = np.abs(np.array([approx_n_of_i(i) for i in grid]) - exact)
    overall = float(dev.max())
    small = float(dev[exact < 0.3].max())
    ok = area_ok and abs(aspect - 2) < 1e-3 and overall < 0.11 and small < 5e-3
    return ok, (
        f"min-area a=f*sqrt2, b=g*sqrt2 with residual <= 4 ulp: {area_ok}; f:g=3.372108 gives a:b={aspect:.6f}; "
        f"compromise max deviation {overall:.4f} (<0.11), for n<0.3 {small:.4f} (<5e-3 required)"
    )


# ------------------------------------------------------------------ 11 CLI

SQUARE = "1 0 -1 0 0 1 0 -1"
KITE = "4 0 -1 0 0 1 0 -1"

# (invocation, expected exit code, check on stdout or stderr text)
DOCUMENTED_EXAMPLES = [
    (f"min-area4 {SQUARE}", 0, lambda r: abs(r["minimal_ellipse"]["area"] - math.pi) < 1e-12 and abs(r["area_ratio"] - math.pi / 2) < 1e-12),
    (f"min-area4 {KITE}", 0, lambda r: sorted(x["B"] for x in r["cubic"]["roots"] if x["tag"] == "CriticalHyperbola") == pytest.approx([-math.sqrt(43) / 2, math.sqrt(43) / 2], rel=1e-12)),
    ("min-area4 0 0 1 1 2 2 3 3", 2, lambda err: "points not conelliptic" in err),
    ("steiner 0 0 1 0 0 1", 0, lambda r: f"{r['ratio']:.5f}" == "2.41840" and r["triangle_area"] == 0.5),
    ("steiner 0 0 2 0 1 1.7320508075688772", 0, lambda r: r["geometry"]["semiaxes"] == pytest.approx([2 / math.sqrt(3)] * 2, rel=1e-12)),
    ("steiner 0 0 1 1 2 2", 2, lambda err: "error" in err),
    ("rect 3.372108 1", 0, lambda r: abs(r["a_over_b"] - 2) < 1e-3 and abs(r["quarter_perimeter_delta"]) < 1e-6),
    ("rect 1 1 --goal area", 0, lambda r: r["a"] == r["b"] == math.sqrt(2)),
    ("rect 0 1", 2, lambda err: "positive" in err),
    ("tabulate", 0, lambda out: any(line.startswith("0.6000000,") and line.split(",")[4].startswith("0.8383") for line in out.splitlines())),
    ("tabulate --n-min 0.5 --n-max 0.5", 2, lambda err: "error" in err),
    (f"plot pencil {SQUARE}", 0, lambda out: out.count("<polygon") + out.count("<polyline") >= 24),
    (f"plot area_curve {SQUARE}", 0, lambda out: "</svg>" in out),
    ("plot in_curves", 0, lambda out: "</svg>" in out),
]


def _invoke(cmd):
    return subprocess.run([sys.executable, "-m", "extremal_ellipses", *cmd.split()], capture_output=True, text=True)


def _strip_version(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("<!-- extremal-ellipses"))


def check_c11():
    cmds = [c for c, _, _ in DOCUMENTED_EXAMPLES]
    with ThreadPoolExecutor(max_workers=8) as pool:
        first = list(pool.map(_invoke, cmds))
        second = list(pool.map(_invoke, cmds))
    failures = []
    for (cmd, code, check), a, b in zip(DOCUMENTED_EXAMPLES, first, second):
        same = a.stdout == b.stdout if "plot" not in cmd else _strip_version(a.stdout) == _strip_version(b.stdout)
        if not same or a.returncode != code or b.returncode != code:
            failures.append(cmd)
            continue
        payload = a.stderr if code else (json.loads(a.stdout) if a.stdout.startswith("{") else a.stdout)
        if not check(payload):
            failures.append(cmd)
    ok = not failures
    return ok, f"{len(cmds) - len(failures)}/{len(cmds)} documented invocations reproducible and byte-identical across runs" + (
        f"; failing: {failures}" if failures else ""
    )


# ------------------------------------------------------------------ pytest glue

CHECKS = {n: globals()[f"check_c{n}"] for n in range(1, 12)}


def _record(n):
    ok, detail = CHECKS[n]()
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[str(n)] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("n", list(range(1, 12)))
def test_criterion(n):
    ok, line = _record(n)
    assert ok, line


if __name__ == "__main__":
    outcomes = [_record(n)[0] for n in CHECKS]
    sys.exit(0 if all(outcomes) else 1)
