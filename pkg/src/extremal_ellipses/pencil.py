"""The pencil of conics through four points and its minimal-area ellipse.

Two chords joining the four points cross at an interior point O. Taking
those chords as (generally oblique) axes, the points sit at u = a, b on the
first axis and v = c, d on the second, and every conic through them is

    cd u^2 + 2B uv + ab v^2 - cd(a+b) u - ab(c+d) v + abcd = 0

for some B. Critical points of det(M)/|AC-B^2|^(3/2) in B are the roots of
a cubic; exactly one of them lies in the elliptic window |B| < sqrt(AC).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .conic import (
    DEFAULT_EPS,
    Conic,
    ConicClass,
    ObliqueFrame,
    Point2,
    classify,
    ellipse_area,
)
from .errors import DuplicatePoints, NotConelliptic, ParallelChords

LIMIT_TOL = 1e-9
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
LABELS = "ABCD"


@dataclass(frozen=True)
class Quad4:
    points: tuple[Point2, Point2, Point2, Point2]

    def __post_init__(self):
        pts = tuple(Point2(float(p[0]), float(p[1])) for p in self.points)
        if len(pts) != 4:
            raise ValueError("a quadrilateral needs exactly four points")
        if not all(math.isfinite(v) for p in pts for v in p):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_flat(cls, values) -> "Quad4":
        vals = [float(v) for v in values]
        if len(vals) != 8:
            raise ValueError("expected 8 coordinates")
        return cls(tuple(Point2(vals[2 * k], vals[2 * k + 1]) for k in range(4)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    @property
    def scale(self) -> float:
        arr = self.array
        return float(np.max(np.ptp(arr, axis=0)))


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def conelliptic_check(q: Quad4, tol: float = 1e-12) -> bool:
    """True iff the four points are in strictly convex position."""
    pts = q.points
    scale = q.scale
    for p, r in itertools.combinations(pts, 2):
        if math.hypot(p[0] - r[0], p[1] - r[1]) <= tol * scale:
            raise DuplicatePoints("two of the four points coincide")
    area_tol = tol * scale * scale
    for i, j, k in itertools.combinations(range(4), 3):
        if abs(_orient(pts[i], pts[j], pts[k])) <= area_tol:
            return False
    for i in range(4):
        j, k, m = (x for x in range(4) if x != i)
        s1 = _orient(pts[j], pts[k], pts[i])
        s2 = _orient(pts[k], pts[m], pts[i])
        s3 = _orient(pts[m], pts[j], pts[i])
        if (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0):
            return False
    return True


@dataclass(frozen=True)
class Pencil4:
    """Fixed coefficients of the pencil plus the frame they live in.

    ``labels`` holds the Cartesian points at u=a, u=b, v=c, v=d (in that
    order), so ``labels[0]`` is the point called A.
    """

    frame: ObliqueFrame
    a: float
    b: float
    c: float
    d: float
    labels: tuple[Point2, Point2, Point2, Point2]

    @classmethod
    def from_intercepts(
        cls, a: float, b: float, c: float, d: float, omega: float = math.pi / 2, origin=(0.0, 0.0), rotation: float = 0.0
    ) -> "Pencil4":
        frame = ObliqueFrame.with_angle(omega, origin, rotation)
        pts = frame.to_cartesian([a, b, 0.0, 0.0], [0.0, 0.0, c, d])
        return cls(frame, float(a), float(b), float(c), float(d), tuple(Point2(*p) for p in pts))

    @property
    def coeff_a(self) -> float:
        return self.c * self.d

    @property
    def coeff_c(self) -> float:
        return self.a * self.b

    @property
    def coeff_d(self) -> float:
        return -0.5 * self.c * self.d * (self.a + self.b)

    @property
    def coeff_e(self) -> float:
        return -0.5 * self.a * self.b * (self.c + self.d)

    @property
    def coeff_f(self) -> float:
        return self.a * self.b * self.c * self.d

    @property
    def fixed(self) -> tuple[float, float, float, float, float]:
        return self.coeff_a, self.coeff_c, self.coeff_d, self.coeff_e, self.coeff_f

    @property
    def sqrt_ac(self) -> float:
        return math.sqrt(self.coeff_a * self.coeff_c)

    def frame_points(self) -> np.ndarray:
        return np.array([[self.a, 0.0], [self.b, 0.0], [0.0, self.c], [0.0, self.d]])

    def quad(self) -> Quad4:
        return Quad4(self.labels)


def _chord_crossing(p1, p2, p3, p4):
    """Parameters (s, t) with p1 + s(p2-p1) = p3 + t(p4-p3), or None if parallel."""
    r = np.subtract(p2, p1)
    w = np.subtract(p4, p3)
    den = r[0] * w[1] - r[1] * w[0]
    scale = math.hypot(*r) * math.hypot(*w)
    if abs(den) <= 1e-12 * scale:
        return None
    q = np.subtract(p3, p1)
    s = (q[0] * w[1] - q[1] * w[0]) / den
    t = (q[0] * r[1] - q[1] * r[0]) / den
    return s, t


def build_pencil(q: Quad4) -> Pencil4:
    """Pencil through the four points in its canonical frame.

    The diagonal pairing is the one whose chords cross inside the hull. On
    each diagonal the point farther from the crossing is taken as the
    positive end; the diagonal with the larger ratio |far|/|near| becomes the
    first axis (ties keep input order).
    """
    if not conelliptic_check(q):
        raise NotConelliptic("points not conelliptic")
    pts = q.points
    chosen = None
    for (i, j), (k, m) in PAIRINGS:
        st = _chord_crossing(pts[i], pts[j], pts[k], pts[m])
        if st is None:
            continue
        s, t = st
        if 0.0 < s < 1.0 and 0.0 < t < 1.0:
            chosen = ((i, j), (k, m), s)
            break
    if chosen is None:
        raise ParallelChords("no pairing of the points gives chords crossing inside the quadrilateral")
    (i, j), (k, m), s = chosen
    origin = np.add(pts[i], s * np.subtract(pts[j], pts[i]))

    def orient_axis(p, r):
        dp = math.dist(p, origin)
        dr = math.dist(r, origin)
        if dr > dp * (1.0 + LIMIT_TOL):
            p, r, dp, dr = r, p, dr, dp
        return p, r, dp, -dr

    A, B, a, b = orient_axis(pts[i], pts[j])
    C, D, c, d = orient_axis(pts[k], pts[m])
    if c / -d > (a / -b) * (1.0 + LIMIT_TOL):
        A, B, a, b, C, D, c, d = C, D, c, d, A, B, a, b
    frame = ObliqueFrame(Point2(*origin), tuple(np.subtract(A, origin)), tuple(np.subtract(C, origin)))
    return Pencil4(frame, a, b, c, d, (Point2(*A), Point2(*B), Point2(*C), Point2(*D)))


def member(p: Pencil4, B: float) -> Conic:
    return Conic(p.coeff_a, float(B), p.coeff_c, p.coeff_d, p.coeff_e, p.coeff_f, frame=p.frame)


class RootTag(enum.Enum):
    ELLIPTIC_MINIMUM = "EllipticMinimum"
    CRITICAL_HYPERBOLA = "CriticalHyperbola"
    LIMITING_PARALLEL_LINES = "LimitingParallelLines"


@dataclass(frozen=True)
class CubicReport:
    coefficients: tuple[float, float, float, float]  # B^3, B^2, B, 1
    roots: tuple[float, float, float]
    tags: tuple[RootTag, RootTag, RootTag]
    discriminant: float
    sqrt_ac: float

    def roots_tagged(self, tag: RootTag) -> list[float]:
        return [r for r, t in zip(self.roots, self.tags) if t is tag]

    @property
    def elliptic_root(self) -> float:
        (root,) = self.roots_tagged(RootTag.ELLIPTIC_MINIMUM)
        return root

    def residual(self, x: float) -> float:
        k3, k2, k1, k0 = self.coefficients
        return ((k3 * x + k2) * x + k1) * x + k0


def cubic_coefficients(p: Pencil4) -> tuple[float, float, float, float]:
    A, C, D, E, F = p.fixed
    return (F, -4.0 * D * E, 3.0 * C * D * D + 3.0 * A * E * E - A * C * F, -2.0 * A * C * D * E)


def cubic_discriminant(k3: float, k2: float, k1: float, k0: float) -> float:
    return (
        18.0 * k3 * k2 * k1 * k0
        - 4.0 * k2**3 * k0
        + k2 * k2 * k1 * k1
        - 4.0 * k3 * k1**3
        - 27.0 * k3 * k3 * k0 * k0
    )


def solve_real_cubic(k3: float, k2: float, k1: float, k0: float, polish: int = 2) -> tuple[float, float, float]:
    """Three real roots by the trigonometric method, each refined by Newton steps.

    Assumes a positive discriminant. Roots are returned in ascending order.
    """
    a2, a1, a0 = k2 / k3, k1 / k3, k0 / k3
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    if p >= 0.0:
        # only reachable through rounding when the three roots coalesce
        roots = [-shift + math.copysign(abs(q) ** (1.0 / 3.0), -q)] * 3
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        base = math.acos(arg) / 3.0
        roots = [m * math.cos(base - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
    out = []
    for r in roots:
        for _ in range(polish):
            f = ((k3 * r + k2) * r + k1) * r + k0
            fp = (3.0 * k3 * r + 2.0 * k2) * r + k1
            if fp == 0.0:
                break
            r -= f / fp
        out.append(r)
    return tuple(sorted(out))


def _tag_root(r: float, sqrt_ac: float) -> RootTag:
    if abs(abs(r) - sqrt_ac) <= LIMIT_TOL * sqrt_ac:
        return RootTag.LIMITING_PARALLEL_LINES
    if abs(r) < sqrt_ac:
        return RootTag.ELLIPTIC_MINIMUM
    return RootTag.CRITICAL_HYPERBOLA


def critical_cubic(p: Pencil4) -> CubicReport:
    """Cubic in B whose roots are the stationary points of the signed area invariant."""
    coeffs = cubic_coefficients(p)
    roots = solve_real_cubic(*coeffs)
    rt = p.sqrt_ac
    return CubicReport(coeffs, roots, tuple(_tag_root(r, rt) for r in roots), cubic_discriminant(*coeffs), rt)


euler_cubic = critical_cubic  # historical name kept for callers


def minimal_area_ellipse(p: Pencil4) -> tuple[Conic, float]:
    best = member(p, critical_cubic(p).elliptic_root)
    return best, ellipse_area(best)


class QuadKind(enum.Enum):
    PARALLELOGRAM = "Parallelogram"
    TRAPEZIUM = "Trapezium"
    KITE = "Kite"
    IRREGULAR = "Irregular"


@dataclass(frozen=True)
class QuadClass:
    kind: QuadKind
    sigma: float
    tau: float
    normalized_a: float
    normalized_c: float


def classify_pencil(p: Pencil4, tol: float = 1e-9) -> QuadClass:
    # rescale each axis so that b = d = -1; the canonical frame already has a >= c
    an = p.a / -p.b
    cn = p.c / -p.d
    sigma = (p.a + p.b) ** 2 / (p.a * p.b)
    tau = (p.c + p.d) ** 2 / (p.c * p.d)
    a_unit = abs(an - 1.0) <= tol
    c_unit = abs(cn - 1.0) <= tol
    if a_unit and c_unit:
        kind = QuadKind.PARALLELOGRAM
    elif abs(an - cn) <= tol * an:
        kind = QuadKind.TRAPEZIUM
    elif c_unit:
        kind = QuadKind.KITE
    else:
        kind = QuadKind.IRREGULAR
    return QuadClass(kind, sigma, tau, an, cn)


def classify_quadrilateral(q: Quad4) -> QuadClass:
    return classify_pencil(build_pencil(q))


@dataclass(frozen=True)
class SpecialMember:
    B: float
    kind: ConicClass
    lines: str | None  # which chord pair, for line-pair members


def line_pair_label(p: Pencil4, B: float) -> str:
    """Which pair of chords ("AC|BD" or "AD|BC") the member at B is closest to containing."""
    con = member(p, B)
    fp = p.frame_points()
    pairs = {"AC|BD": ((0, 2), (1, 3)), "AD|BC": ((0, 3), (1, 2))}
    best, best_val = None, math.inf
    for label, chords in pairs.items():
        val = 0.0
        for i, j in chords:
            mid = 0.5 * (fp[i] + fp[j])
            val += abs(float(con.evaluate(mid[0], mid[1])))
        if val < best_val:
            best, best_val = label, val
    return best


def limiting_conics(p: Pencil4, eps: float = DEFAULT_EPS) -> list[SpecialMember]:
    out = []
    for B in (-p.sqrt_ac, p.sqrt_ac):
        kind = classify(member(p, B), eps)
        lines = line_pair_label(p, B) if kind is ConicClass.PARALLEL_LINES else None
        out.append(SpecialMember(B, kind, lines))
    return out


def degenerate_members(p: Pencil4) -> list[SpecialMember]:
    """Members with det(M) = 0: the two line pairs through the diagonally opposite chords."""
    A, C, D, E, F = p.fixed
    centre = D * E / F
    half = math.sqrt(max(0.0, (D * D / F - A) * (E * E / F - C)))
    out = []
    for B in sorted({centre - half, centre + half}):
        kind = classify(member(p, B))
        out.append(SpecialMember(B, kind, line_pair_label(p, B)))
    return out


@dataclass(frozen=True)
class AreaProfile:
    B: np.ndarray
    value: np.ndarray  # NaN where the grid touches a pole
    poles: tuple[float, float]


def signed_area_curve(p: Pencil4, b_values, eps: float = DEFAULT_EPS) -> np.ndarray:
    A, C, D, E, F = p.fixed
    return kernels.pencil_area(b_values, A, C, D, E, F, eps * A * C)


def area_profile(p: Pencil4, b_min: float, b_max: float, samples: int, eps: float = DEFAULT_EPS) -> AreaProfile:
    if samples < 2:
        raise ValueError("need at least two samples")
    grid = np.linspace(b_min, b_max, samples)
    return AreaProfile(grid, signed_area_curve(p, grid, eps), (-p.sqrt_ac, p.sqrt_ac))
