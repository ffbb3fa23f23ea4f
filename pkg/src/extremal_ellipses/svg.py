"""Tiny deterministic SVG 1.1 writer and the three figure builders."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .conic import Conic, ConicClass, classify, geometric_form
from .pencil import Pencil4, RootTag, critical_cubic, limiting_conics, member, minimal_area_ellipse, signed_area_curve
from .perimeter import approx_n_of_i, i_of_n

LIGHT = 0.6
HEAVY = 2.2


def _fmt(v: float) -> str:
    return f"{v:.3f}"


class Canvas:
    """Maps a data box onto a pixel viewport (y up) and collects elements."""

    def __init__(self, box, width: int = 640, height: int | None = None, margin: float = 0.05, keep_aspect=True):
        x0, y0, x1, y1 = box
        dx, dy = x1 - x0, y1 - y0
        x0, x1 = x0 - margin * dx, x1 + margin * dx
        y0, y1 = y0 - margin * dy, y1 + margin * dy
        self.box = (x0, y0, x1, y1)
        self.width = width
        if height is None:
            height = int(round(width * (y1 - y0) / (x1 - x0))) if keep_aspect else width
        self.height = max(height, 1)
        self.sx = width / (x1 - x0)
        self.sy = self.height / (y1 - y0)
        self.items: list[str] = []

    def px(self, x, y):
        x0, y0, _, y1 = self.box
        return (np.asarray(x) - x0) * self.sx, (y1 - np.asarray(y)) * self.sy

    def polyline(self, pts, width=LIGHT, colour="#000", dash: str | None = None, closed=False):
        pts = np.asarray(pts, dtype=float)
        if pts.shape[0] < 2:
            return
        X, Y = self.px(pts[:, 0], pts[:, 1])
        # keep coordinates bounded so clipped runaway branches stay well-formed
        lim = 10.0 * max(self.width, self.height)
        X = np.clip(X, -lim, lim)
        Y = np.clip(Y, -lim, lim)
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(X, Y))
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<{tag} points="{coords}" fill="none" stroke="{colour}" stroke-width="{width}"{extra}/>'
        )

    def segments(self, xs, ys, **kw):
        """Polyline broken wherever a coordinate is not finite."""
        ok = np.isfinite(xs) & np.isfinite(ys)
        start = None
        for j in range(len(xs) + 1):
            good = j < len(xs) and ok[j]
            if good and start is None:
                start = j
            elif not good and start is not None:
                self.polyline(np.column_stack([xs[start:j], ys[start:j]]), **kw)
                start = None

    def dot(self, x, y, r=3.0, colour="#000"):
        X, Y = self.px(x, y)
        self.items.append(f'<circle cx="{_fmt(float(X))}" cy="{_fmt(float(Y))}" r="{r}" fill="{colour}"/>')

    def text(self, x, y, label: str, size=12):
        X, Y = self.px(x, y)
        self.items.append(
            f'<text x="{_fmt(float(X))}" y="{_fmt(float(Y))}" font-family="serif" font-size="{size}">{escape(label)}</text>'
        )

    def render(self, title: str) -> str:
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f"<!-- extremal-ellipses {__version__} -->",
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">',
            f"<title>{escape(title)}</title>",
            '<defs><clipPath id="view"><rect x="0" y="0" '
            f'width="{self.width}" height="{self.height}"/></clipPath></defs>',
            '<rect x="0" y="0" width="100%" height="100%" fill="#fff"/>',
            '<g clip-path="url(#view)">',
        ]
        return "\n".join(head + self.items + ["</g>", "</svg>"]) + "\n"


def _bbox(points: np.ndarray):
    return (points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max())


def _grow(box, factor: float):
    x0, y0, x1, y1 = box
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    hx, hy = 0.5 * factor * (x1 - x0), 0.5 * factor * (y1 - y0)
    return (cx - hx, cy - hy, cx + hx, cy + hy)


def singular_conic_curves(con: Conic, box) -> list[np.ndarray]:
    """Cartesian polylines for a parabola or a pair of parallel lines, long enough to cross ``box``."""
    cart = con.to_cartesian()
    n = np.array([[cart.A, cart.B], [cart.B, cart.C]])
    lin = np.array([cart.D, cart.E])
    vals, vecs = np.linalg.eigh(n)
    k = int(np.argmin(np.abs(vals)))
    w = vecs[:, k]  # axis direction
    p = vecs[:, 1 - k]
    lam = vals[1 - k]
    x0 = np.array([0.5 * (box[0] + box[2]), 0.5 * (box[1] + box[3])])
    reach = 2.0 * math.hypot(box[2] - box[0], box[3] - box[1])
    g = float(p @ (n @ x0 + lin))
    q0 = float(cart.evaluate(*x0))
    lw = float(lin @ w)
    kind = classify(con)
    if kind is ConicClass.PARABOLA:
        # along the axis the form is linear: lam s^2 + 2 g s + q0 + 2 t lw = 0
        s = np.linspace(-reach, reach, 801)
        t = -(lam * s * s + 2.0 * g * s + q0) / (2.0 * lw)
        return [x0 + np.outer(s, p) + np.outer(t, w)]
    disc = g * g - lam * q0
    if disc < 0:
        return []
    t = np.linspace(-reach, reach, 3)
    out = []
    for s in ((-g - math.sqrt(disc)) / lam, (-g + math.sqrt(disc)) / lam):
        out.append(x0 + s * p + np.outer(t, w))
    return out


def pencil_figure(p: Pencil4, members: int = 24) -> str:
    best, _ = minimal_area_ellipse(p)
    best_pts = geometric_form(best).points(256)
    base = np.array(p.labels)
    box = _grow(_bbox(np.vstack([best_pts, base])), 1.5)
    cv = Canvas(box)
    for k in range(members):
        psi = (k + 0.5) * math.pi / members
        con = member(p, p.sqrt_ac * math.cos(psi))
        if classify(con) is ConicClass.ELLIPSE:
            cv.polyline(geometric_form(con).points(256), width=LIGHT, colour="#888", closed=True)
    for lim in limiting_conics(p):
        for curve in singular_conic_curves(member(p, lim.B), box):
            cv.polyline(curve, width=HEAVY)
    cv.polyline(best_pts, width=HEAVY, closed=True)
    for label, pt in zip("ABCD", base):
        cv.dot(pt[0], pt[1])
        cv.text(pt[0], pt[1], f" {label}")
    return cv.render("pencil of conics through four points")


def area_curve_figure(p: Pencil4, span: float = 3.0, samples: int = 2001) -> str:
    rt = p.sqrt_ac
    rep = critical_cubic(p)
    b_min = float(signed_area_curve(p, [rep.elliptic_root])[0])
    bs = np.linspace(-span * rt, span * rt, samples)
    vals = signed_area_curve(p, bs)
    y_lo, y_hi = -3.0 * b_min, 4.0 * b_min
    cv = Canvas((bs[0], y_lo, bs[-1], y_hi), keep_aspect=False, width=640, height=400)
    cv.polyline([[bs[0], 0.0], [bs[-1], 0.0]], width=LIGHT, colour="#888")
    cv.polyline([[0.0, y_lo], [0.0, y_hi]], width=LIGHT, colour="#888")
    for pole in (-rt, rt):
        cv.polyline([[pole, y_lo], [pole, y_hi]], width=LIGHT, colour="#000", dash="6,4")
    # break the curve at poles and wherever it leaves the plotting band far away
    band = 20.0 * (y_hi - y_lo)
    vals = np.where(np.abs(vals) > band, np.nan, vals)
    cv.segments(bs, vals, width=HEAVY)
    for r, tag in zip(rep.roots, rep.tags):
        if tag is not RootTag.LIMITING_PARALLEL_LINES:
            cv.dot(r, float(signed_area_curve(p, [r])[0]))
    cv.text(bs[-1] * 0.95, y_lo + 0.05 * (y_hi - y_lo), "B")
    return cv.render("signed area invariant along the pencil")


def in_curves_figure(order: int = 24) -> str:
    cv = Canvas((0.0, 0.0, 1.0, 1.0), width=560)
    for g in np.arange(0.0, 1.0001, 0.2):
        cv.polyline([[g, 0.0], [g, 1.0]], width=0.3, colour="#bbb", dash="2,3")
        cv.polyline([[0.0, g], [1.0, g]], width=0.3, colour="#bbb", dash="2,3")
    iv = np.linspace(0.0, 1.0, 401)
    for scheme, dash in (("linear", "4,3"), ("cubic", "1,2"), ("compromise", None)):
        ns = np.array([approx_n_of_i(float(x), scheme) for x in iv])
        cv.polyline(np.column_stack([iv, ns]), width=1.0, dash=dash)
    ns = np.linspace(1e-3, 1.0, 500)
    cv.polyline(np.column_stack([i_of_n(ns, order), ns]), width=HEAVY)
    cv.text(0.96, 0.02, "i")
    cv.text(0.01, 0.96, "n")
    return cv.render("approximations of n as a function of i")


__all__ = ["Canvas", "area_curve_figure", "in_curves_figure", "pencil_figure", "singular_conic_curves"]
