"""Plane conics in (possibly oblique) affine frames.

A conic is stored as the six coefficients of

    A x^2 + 2B xy + C y^2 + 2D x + 2E y + F = 0

in the coordinates of an :class:`ObliqueFrame`. Determinant invariants are
taken in the conic's own frame; the frame only contributes the factor
``sin(omega)`` when a Euclidean area is wanted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    EmptyConic,
    LimitingConic,
    NotAHyperbola,
    NotAnEllipse,
    SingularTransform,
)

DEFAULT_EPS = 1e-10


class Point2(NamedTuple):
    x: float
    y: float


def _normalise(vec) -> tuple[float, float]:
    a, b = float(vec[0]), float(vec[1])
    norm = math.hypot(a, b)
    if not math.isfinite(norm) or norm == 0.0:
        raise ValueError("axis direction must be a finite non-zero vector")
    return (a / norm, b / norm)


@dataclass(frozen=True)
class ObliqueFrame:
    """Affine frame: Cartesian origin plus two unit axis directions.

    The axis directions are normalised on construction. ``angle_omega`` is the
    angle from ``unit_a`` to ``unit_c`` and always lies in (0, pi); a frame
    whose second axis turns clockwise from the first is allowed and only
    affects orientation, not areas.
    """

    origin: Point2 = Point2(0.0, 0.0)
    unit_a: tuple[float, float] = (1.0, 0.0)
    unit_c: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        ua = _normalise(self.unit_a)
        uc = _normalise(self.unit_c)
        if abs(ua[0] * uc[1] - ua[1] * uc[0]) < 1e-12:
            raise ValueError("frame axes are parallel")
        object.__setattr__(self, "origin", Point2(float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "unit_a", ua)
        object.__setattr__(self, "unit_c", uc)

    @classmethod
    def with_angle(cls, omega: float, origin=(0.0, 0.0), rotation: float = 0.0) -> "ObliqueFrame":
        """Frame whose first axis points at ``rotation`` and second at ``rotation + omega``."""
        if not 0.0 < omega < math.pi:
            raise ValueError("omega must lie in (0, pi)")
        return cls(
            Point2(*origin),
            (math.cos(rotation), math.sin(rotation)),
            (math.cos(rotation + omega), math.sin(rotation + omega)),
        )

    @property
    def basis(self) -> np.ndarray:
        """2x2 matrix whose columns are the axis directions."""
        return np.array([[self.unit_a[0], self.unit_c[0]], [self.unit_a[1], self.unit_c[1]]])

    @property
    def cross(self) -> float:
        return self.unit_a[0] * self.unit_c[1] - self.unit_a[1] * self.unit_c[0]

    @property
    def sin_omega(self) -> float:
        return abs(self.cross)

    @property
    def angle_omega(self) -> float:
        dot = self.unit_a[0] * self.unit_c[0] + self.unit_a[1] * self.unit_c[1]
        return math.atan2(abs(self.cross), dot)

    def to_cartesian(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        x = self.origin.x + u * self.unit_a[0] + v * self.unit_c[0]
        y = self.origin.y + u * self.unit_a[1] + v * self.unit_c[1]
        return np.stack([x, y], axis=-1)

    def from_cartesian(self, x, y) -> np.ndarray:
        dx = np.asarray(x, dtype=float) - self.origin.x
        dy = np.asarray(y, dtype=float) - self.origin.y
        cr = self.cross
        u = (dx * self.unit_c[1] - dy * self.unit_c[0]) / cr
        v = (self.unit_a[0] * dy - self.unit_a[1] * dx) / cr
        return np.stack([u, v], axis=-1)


RECTANGULAR = ObliqueFrame()


class ConicClass(enum.Enum):
    ELLIPSE = "Ellipse"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"
    PARALLEL_LINES = "ParallelLines"
    INTERSECTING_LINES = "IntersectingLines"
    DEGENERATE_OTHER = "Degenerate-other"


@dataclass(frozen=True)
class Conic:
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    frame: ObliqueFrame = field(default=RECTANGULAR, compare=False)

    def __post_init__(self):
        vals = self.coefficients
        if not np.all(np.isfinite(vals)):
            raise ValueError("conic coefficients must be finite")
        if not np.any(vals):
            raise ValueError("all six conic coefficients are zero")

    @classmethod
    def from_array(cls, coeffs, frame: ObliqueFrame = RECTANGULAR) -> "Conic":
        return cls(*(float(c) for c in coeffs), frame=frame)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C, self.D, self.E, self.F], dtype=float)

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.A, self.B, self.D], [self.B, self.C, self.E], [self.D, self.E, self.F]], dtype=float
        )

    def evaluate(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return (
            self.A * u * u + 2 * self.B * u * v + self.C * v * v + 2 * self.D * u + 2 * self.E * v + self.F
        )

    def gradient(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.stack(
            [2 * (self.A * u + self.B * v + self.D), 2 * (self.B * u + self.C * v + self.E)], axis=-1
        )

    def scaled(self, factor: float) -> "Conic":
        return Conic.from_array(self.coefficients * factor, self.frame)

    def center(self) -> np.ndarray:
        """Centre in frame coordinates (requires a non-singular quadratic part)."""
        n = np.array([[self.A, self.B], [self.B, self.C]])
        return np.linalg.solve(n, [-self.D, -self.E])

    def to_cartesian(self) -> "Conic":
        """Same curve written in the rectangular reference frame."""
        fr = self.frame
        inv = np.linalg.inv(fr.basis)
        shift = -inv @ np.array(fr.origin)
        out = apply_affine(self, inv, shift)
        return Conic.from_array(out.coefficients, RECTANGULAR)


def det_m(c: Conic) -> float:
    A, B, C, D, E, F = c.A, c.B, c.C, c.D, c.E, c.F
    return A * (C * F - E * E) - B * (B * F - D * E) + D * (B * E - C * D)


def det_n(c: Conic) -> float:
    return c.A * c.C - c.B * c.B


def _thresholds(c: Conic, eps: float) -> tuple[float, float]:
    """Zero tests for det_n and det_m, relative to the size of their expanded terms.

    Each tolerance is eps times the sum of the absolute monomials of the
    determinant, so it scales exactly like the determinant under coefficient
    rescaling and under any rescaling of the coordinates. A value below it is
    indistinguishable from cancellation.
    """
    A, B, C, D, E, F = c.A, c.B, c.C, c.D, c.E, c.F
    tol_n = eps * (abs(A * C) + B * B)
    tol_m = eps * (abs(A * C * F) + abs(A) * E * E + B * B * abs(F) + 2.0 * abs(B * D * E) + abs(C) * D * D)
    return tol_n, tol_m


def classify(c: Conic, eps: float = DEFAULT_EPS) -> ConicClass:
    if eps <= 0:
        raise ValueError("eps must be positive")
    tol_n, tol_m = _thresholds(c, eps)
    dn = det_n(c)
    dm = det_m(c)
    if dn > tol_n:
        # real ellipse iff det_m and the trace of the quadratic part differ in sign
        if abs(dm) > tol_m and dm * (c.A + c.C) < 0:
            return ConicClass.ELLIPSE
        return ConicClass.DEGENERATE_OTHER
    if dn < -tol_n:
        return ConicClass.HYPERBOLA if abs(dm) > tol_m else ConicClass.INTERSECTING_LINES
    if abs(dm) > tol_m:
        return ConicClass.PARABOLA
    # singular quadratic part, singular M: two parallel lines if real and distinct
    cof = (c.A * c.F - c.D * c.D) + (c.C * c.F - c.E * c.E)
    if cof < -eps * (abs(c.A * c.F) + c.D * c.D + abs(c.C * c.F) + c.E * c.E):
        return ConicClass.PARALLEL_LINES
    return ConicClass.DEGENERATE_OTHER


def ellipse_area(c: Conic, eps: float = DEFAULT_EPS) -> float:
    """Euclidean area of an ellipse given in any oblique frame."""
    tol_n, tol_m = _thresholds(c, eps)
    dn = det_n(c)
    if dn <= tol_n:
        raise NotAnEllipse(f"AC - B^2 = {dn:.6g} is not positive")
    dm = det_m(c)
    if dm * (c.A + c.C) >= 0 or abs(dm) <= tol_m:
        raise EmptyConic("the quadratic form has no real points (imaginary or point ellipse)")
    return math.pi * c.frame.sin_omega * abs(dm) / dn**1.5


def signed_area_invariant(c: Conic, eps: float = DEFAULT_EPS) -> float:
    """det(M) / |AC - B^2|^(3/2), sign retained."""
    tol_n, _ = _thresholds(c, eps)
    dn = det_n(c)
    if abs(dn) <= tol_n:
        raise LimitingConic("AC - B^2 vanishes; the invariant has a pole here")
    return det_m(c) / abs(dn) ** 1.5


def apply_affine(c: Conic, linear, shift=(0.0, 0.0)) -> Conic:
    """Substitute old = linear @ new + shift and return the conic in ``new`` coordinates.

    The frame object is kept, so ``ellipse_area`` of the result equals the
    original area divided by ``|det(linear)|``.
    """
    s = np.asarray(linear, dtype=float).reshape(2, 2)
    t = np.asarray(shift, dtype=float).reshape(2)
    det = float(np.linalg.det(s))
    if not math.isfinite(det) or abs(det) <= 1e-14 * max(1.0, float(np.abs(s).max()) ** 2):
        raise SingularTransform("linear part of the affine map is singular")
    big = np.zeros((3, 3))
    big[:2, :2] = s
    big[:2, 2] = t
    big[2, 2] = 1.0
    m = big.T @ c.matrix() @ big
    return Conic(m[0, 0], m[0, 1], m[1, 1], m[0, 2], m[1, 2], m[2, 2], frame=c.frame)


def hyperbola_tangent_triangle_area(c: Conic, param: float, branch: int = 1, eps: float = DEFAULT_EPS) -> float:
    """Area of the triangle bounded by the two asymptotes and the tangent at one point.

    ``param`` moves the point along the branch (``branch`` = +1 or -1 picks
    the branch). The computation is done in Cartesian coordinates from the
    geometric construction.
    """
    if classify(c, eps) is not ConicClass.HYPERBOLA:
        raise NotAHyperbola("tangent-triangle area needs a non-degenerate hyperbola")
    cart = c.to_cartesian()
    n = np.array([[cart.A, cart.B], [cart.B, cart.C]])
    center = cart.center()
    f0 = det_m(cart) / det_n(cart)  # constant term after moving the origin to the centre
    r1, r2 = _asymptote_directions(cart)
    q12 = float(r1 @ n @ r2)
    # points centre + al*r1 + be*r2 lie on the curve iff 2*al*be*q12 + f0 = 0
    al = branch * math.exp(param)
    be = -f0 / (2.0 * q12 * al)
    p = center + al * r1 + be * r2
    grad = cart.gradient(p[0], p[1])
    off = float(grad @ (p - center))
    s1 = off / float(grad @ r1)
    s2 = off / float(grad @ r2)
    q1 = s1 * r1
    q2 = s2 * r2
    return float(0.5 * abs(q1[0] * q2[1] - q1[1] * q2[0]))


def _asymptote_directions(cart: Conic) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eigh(np.array([[cart.A, cart.B], [cart.B, cart.C]]))
    # vals[0] < 0 < vals[1]; null directions of the form in its eigenbasis
    p, q = math.sqrt(vals[1]), math.sqrt(-vals[0])
    d1 = vecs @ np.array([p, q])
    d2 = vecs @ np.array([p, -q])
    return d1 / np.linalg.norm(d1), d2 / np.linalg.norm(d2)


class EllipseGeometry(NamedTuple):
    """Cartesian centre, semiaxes (along ``angle``, then perpendicular) and axis angle."""

    center: Point2
    semiaxes: tuple[float, float]
    angle: float

    @property
    def major(self) -> float:
        return max(self.semiaxes)

    @property
    def minor(self) -> float:
        return min(self.semiaxes)

    def points(self, count: int = 64) -> np.ndarray:
        t = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        p, q = self.semiaxes
        ca, sa = math.cos(self.angle), math.sin(self.angle)
        x = self.center.x + p * np.cos(t) * ca - q * np.sin(t) * sa
        y = self.center.y + p * np.cos(t) * sa + q * np.sin(t) * ca
        return np.stack([x, y], axis=-1)


def geometric_form(c: Conic, eps: float = DEFAULT_EPS) -> EllipseGeometry:
    if classify(c, eps) is not ConicClass.ELLIPSE:
        raise NotAnEllipse("geometric form is only defined for real ellipses")
    cart = c.to_cartesian()
    A, B, C = cart.A, cart.B, cart.C
    center = cart.center()
    f0 = det_m(cart) / det_n(cart)
    angle = 0.5 * math.atan2(2.0 * B, A - C)
    ca, sa = math.cos(angle), math.sin(angle)
    lam1 = A * ca * ca + 2 * B * sa * ca + C * sa * sa
    lam2 = A * sa * sa - 2 * B * sa * ca + C * ca * ca
    return EllipseGeometry(
        Point2(float(center[0]), float(center[1])),
        (math.sqrt(-f0 / lam1), math.sqrt(-f0 / lam2)),
        angle,
    )


def principal_axes_parallelogram(a: float, c: float, theta: float) -> tuple[float, float, float]:
    """Principal axes of c^2 x^2 + a^2 y^2 = a^2 c^2 in a frame with inter-axis angle ``theta``.

    Returns ``(phi, f, g)`` with ``f >= g``: ``phi`` is the angle of the major
    axis measured from the first frame axis, ``f`` and ``g`` are the major and
    minor semiaxes.
    """
    if a <= 0 or c <= 0:
        raise ValueError("a and c must be positive")
    if not 0.0 < theta < math.pi:
        raise ValueError("theta must lie in (0, pi)")
    two_phi = math.atan2(c * c * math.sin(2 * theta), a * a + c * c * math.cos(2 * theta))
    phi = 0.5 * two_phi
    num = a * a * c * c * math.sin(theta) ** 2
    f2 = num / (c * c * math.sin(theta - phi) ** 2 + a * a * math.sin(phi) ** 2)
    g2 = num / (c * c * math.cos(theta - phi) ** 2 + a * a * math.cos(phi) ** 2)
    if f2 < g2:
        phi += 0.5 * math.pi
        f2, g2 = g2, f2
    phi = math.fmod(phi, math.pi)
    if phi < 0:
        phi += math.pi
    return phi, math.sqrt(f2), math.sqrt(g2)
