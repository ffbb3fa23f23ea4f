"""Minimal-area ellipse through the three vertices of a triangle.

In the oblique frame at a vertex, with axes along the two sides of lengths a
and c, the optimal conic is

    c^2 x^2 + ac xy + a^2 y^2 - ac^2 x - a^2 c y = 0,

centred at the centroid, with area 4*pi/(3*sqrt(3)) times the triangle's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .conic import Conic, ObliqueFrame, Point2, ellipse_area
from .errors import DegenerateTriangle

RATIO = 4.0 * math.pi / (3.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class Triangle:
    vA: Point2
    vB: Point2
    vC: Point2

    def __post_init__(self):
        for name in ("vA", "vB", "vC"):
            p = getattr(self, name)
            object.__setattr__(self, name, Point2(float(p[0]), float(p[1])))
        scale = max(math.dist(self.vA, self.vB), math.dist(self.vB, self.vC), math.dist(self.vA, self.vC))
        if not math.isfinite(scale) or scale == 0.0 or abs(self.signed_area) <= 1e-12 * scale * scale:
            raise DegenerateTriangle("triangle vertices are collinear or coincide")

    @classmethod
    def from_flat(cls, values) -> "Triangle":
        v = [float(x) for x in values]
        if len(v) != 6:
            raise ValueError("expected 6 coordinates")
        return cls(Point2(v[0], v[1]), Point2(v[2], v[3]), Point2(v[4], v[5]))

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        return (self.vA, self.vB, self.vC)

    @property
    def signed_area(self) -> float:
        (ax, ay), (bx, by), (cx, cy) = self.vA, self.vB, self.vC
        return 0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def side_a(self) -> float:
        return math.dist(self.vB, self.vA)

    @property
    def side_c(self) -> float:
        return math.dist(self.vB, self.vC)

    def angle_at(self, k: int) -> float:
        v = self.vertices
        p, q, r = v[k], v[(k - 1) % 3], v[(k + 1) % 3]
        u = (q[0] - p[0], q[1] - p[1])
        w = (r[0] - p[0], r[1] - p[1])
        return math.atan2(abs(u[0] * w[1] - u[1] * w[0]), u[0] * w[0] + u[1] * w[1])

    @property
    def angle_omega(self) -> float:
        return self.angle_at(1)

    def largest_angle_vertex(self) -> int:
        angles = [self.angle_at(k) for k in range(3)]
        return int(np.argmax(angles))


@dataclass(frozen=True)
class SteinerResult:
    conic: Conic  # in the frame at the apex vertex
    apex: int  # index of the frame vertex in the input triangle
    a: float
    c: float
    omega: float
    area: float
    center: Point2
    tangents: tuple[np.ndarray, np.ndarray, np.ndarray]  # unit directions at vA, vB, vC
    triangle_area: float

    @property
    def ratio(self) -> float:
        return self.area / self.triangle_area


def centroid(t: Triangle) -> Point2:
    return Point2((t.vA.x + t.vB.x + t.vC.x) / 3.0, (t.vA.y + t.vB.y + t.vC.y) / 3.0)


def steiner_conic(a: float, c: float, frame: ObliqueFrame) -> Conic:
    return Conic(c * c, 0.5 * a * c, a * a, -0.5 * a * c * c, -0.5 * a * a * c, 0.0, frame=frame)


def steiner_ellipse(t: Triangle, apex: int | None = None) -> SteinerResult:
    """Steiner circumellipse; ``apex`` picks the frame vertex (default: largest angle)."""
    k = t.largest_angle_vertex() if apex is None else int(apex) % 3
    v = t.vertices
    origin, pa, pc = v[k], v[(k - 1) % 3], v[(k + 1) % 3]
    frame = ObliqueFrame(origin, (pa.x - origin.x, pa.y - origin.y), (pc.x - origin.x, pc.y - origin.y))
    a = math.dist(origin, pa)
    c = math.dist(origin, pc)
    con = steiner_conic(a, c, frame)
    ctr = frame.to_cartesian(*con.center())
    return SteinerResult(
        conic=con,
        apex=k,
        a=a,
        c=c,
        omega=frame.angle_omega,
        area=2.0 * math.pi * a * c * frame.sin_omega / (3.0 * math.sqrt(3.0)),
        center=Point2(float(ctr[0]), float(ctr[1])),
        tangents=_tangent_directions(con, t),
        triangle_area=t.area,
    )


def vertex_tangents(r: SteinerResult, t: Triangle) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit tangent directions of the ellipse at vA, vB, vC."""
    return _tangent_directions(r.conic, t)


def _tangent_directions(con: Conic, t: Triangle):
    cart = con.to_cartesian()
    out = []
    for p in t.vertices:
        g = cart.gradient(p.x, p.y)
        d = np.array([-g[1], g[0]])
        out.append(d / np.linalg.norm(d))
    return tuple(out)


def closed_form_area(r: SteinerResult) -> float:
    """Area from the general determinant formula, as a cross-check of ``r.area``."""
    return ellipse_area(r.conic)


def area_functional(s, phi, a: float, c: float, omega: float):
    """Area of the ellipse through the triangle parametrised by (s, phi); vectorised."""
    s = np.asarray(s, dtype=float)
    phi = np.asarray(phi, dtype=float)
    val = 0.25 * math.pi * math.sin(omega) * (a * a + c * c * s * s - 2.0 * a * c * s * np.cos(phi))
    return val / (s * np.sin(phi) ** 3)


def chord_ordinates(a: float, c: float, x: float) -> tuple[float, float]:
    """Both second coordinates of the Steiner ellipse above first coordinate ``x``."""
    rad = (a - x) * (a + 3.0 * x)
    if rad < 0:
        raise ValueError("x lies outside the ellipse's extent")
    root = c * math.sqrt(rad)
    return ((c * (a - x) - root) / (2.0 * a), (c * (a - x) + root) / (2.0 * a))


def ratio_convergents(k: int) -> list[Fraction]:
    """First ``k`` continued-fraction convergents of 4*pi/(3*sqrt(3))."""
    if k < 1:
        return []
    with mpmath.workdps(30 + 3 * k):
        x = 4 * mpmath.pi / (3 * mpmath.sqrt(3))
        terms = []
        for _ in range(k):
            q = int(mpmath.floor(x))
            terms.append(q)
            x = 1 / (x - q)
    h_prev, h = 1, terms[0]
    k_prev, kk = 0, 1
    out = [Fraction(h, kk)]
    for q in terms[1:]:
        h_prev, h = h, q * h + h_prev
        k_prev, kk = kk, q * kk + k_prev
        out.append(Fraction(h, kk))
    return out
