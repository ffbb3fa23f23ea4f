"""Independent numerical cross-checks for the closed-form results.

Nothing here uses the determinant formulas or series of the other modules:
areas come from integrating chord lengths, perimeters from adaptive
quadrature of the arc-length element, minima from brute-force grids.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .conic import Conic, ConicClass, classify
from .errors import NotAnEllipse, ToleranceNotMet


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")


def perimeter_quadrature(a: float, b: float, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Quarter perimeter: integral of sqrt(a^2 sin^2 p + b^2 cos^2 p) over [0, pi/2]."""
    if a < 0 or b < 0:
        raise ValueError("semiaxes must be non-negative")
    from scipy.integrate import IntegrationWarning, quad  # deferred: keeps CLI start-up short

    a2, b2 = a * a, b * b

    def element(p):
        return math.sqrt(a2 * math.sin(p) ** 2 + b2 * math.cos(p) ** 2)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(element, 0.0, 0.5 * math.pi, epsabs=q.abs_tol, epsrel=0.0, limit=q.max_subdivisions)
    if not err <= q.abs_tol * 10:
        raise ToleranceNotMet(f"quadrature error estimate {err:.3g} exceeds {q.abs_tol:.3g}")
    return val


def conic_area_quadrature(c: Conic, strips: int = 20_000) -> float:
    """Euclidean area by summing vertical chord lengths across the ellipse.

    For each abscissa u the two ordinates solve C v^2 + 2(Bu+E) v + (Au^2+2Du+F) = 0,
    so the chord is 2 sqrt((Bu+E)^2 - C(Au^2+2Du+F)) / |C|. The extent in u is
    where that radicand vanishes.
    """
    if classify(c) is not ConicClass.ELLIPSE:
        raise NotAnEllipse("chord-length quadrature needs a real ellipse")
    A, B, C, D, E, F = c.coefficients
    # radicand as a quadratic in u: (B^2 - AC) u^2 + 2(BE - CD) u + (E^2 - CF)
    qa = B * B - A * C
    qb = 2.0 * (B * E - C * D)
    qc = E * E - C * F
    disc = qb * qb - 4.0 * qa * qc
    root = math.sqrt(max(disc, 0.0))
    # qa < 0 for an ellipse; a cancellation-free pair of roots
    r1 = (-qb - math.copysign(root, qb)) / (2.0 * qa)
    r2 = qc / (qa * r1) if r1 != 0.0 else -qb / qa
    lo, hi = sorted((r1, r2))
    return kernels.chord_area(c.coefficients, lo, hi, strips) * c.frame.sin_omega


def grid_argmin(
    f: Callable, lo: float, hi: float, samples: int = 4096, refine: bool = True
) -> float:
    """Smallest sample of ``f`` on a uniform grid, then one golden-section pass.

    ``f`` may be vectorised; it is called on the whole grid first and falls
    back to point-wise evaluation if that fails.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    xs = np.linspace(lo, hi, samples)
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape != xs.shape:
            raise ValueError
    except Exception:
        ys = np.array([f(x) for x in xs], dtype=float)
    ys = np.where(np.isnan(ys), np.inf, ys)
    j = int(np.argmin(ys))
    if not refine:
        return float(xs[j])
    if j == 0 or j == samples - 1 or not (ys[j] < ys[j - 1] and ys[j] < ys[j + 1]):
        return float(xs[j])
    from scipy.optimize import golden

    x = float(golden(lambda v: float(f(v)), brack=(xs[j - 1], xs[j], xs[j + 1]), tol=1e-10))
    return x if float(f(x)) <= ys[j] else float(xs[j])


def central_diff(f: Callable, x: float, h: float = 1e-5) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_diff2(f: Callable, x: float, h: float = 1e-4) -> float:
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def central_diff5(f: Callable, x: float, h: float = 1e-3) -> float:
    """Fourth-order first derivative; tolerates noisier ``f`` than :func:`central_diff`."""
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
