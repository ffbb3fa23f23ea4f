"""Minimal-area and minimal-perimeter ellipses around a rectangle.

An ellipse with semiaxes a >= b is described by c^2 = a^2 + b^2 and
n = (a^2 - b^2)/(a^2 + b^2); its quarter perimeter is pi*c/(2*sqrt 2) * s(n)
with the power series

    s(n) = 1 - sum_k C_k n^(2k),  C_1 = 1/16,  C_k = C_(k-1) (4k-5)(4k-3)/(4k)^2.

A rectangle with half-sides f >= g is described by h^2 = f^2 + g^2 and
i = (f^2 - g^2)/(f^2 + g^2). The perimeter-optimal ellipse through its corners
has the n that solves i = i_of_n(n).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NoBracket, StepOverflow, ToleranceNotMet

DEFAULT_ORDER = 24
HIGH_ORDER = 64
BRACKET = (1e-6, 1.0 - 1e-9)
MONOTONE_SCAN = 512
IN_ODE_FORMS = ("squared_factor", "linear_factor")


# ------------------------------------------------------------------ series


@functools.lru_cache(maxsize=None)
def series_coefficients(order: int = DEFAULT_ORDER) -> tuple[Fraction, ...]:
    """Exact coefficients C_1..C_m of n^2..n^(2m), m = order // 2."""
    if order < 0:
        raise ValueError("order must be non-negative")
    out = []
    coeff = Fraction(1, 16)
    for k in range(1, order // 2 + 1):
        if k > 1:
            coeff *= Fraction((4 * k - 5) * (4 * k - 3), (4 * k) ** 2)
        out.append(coeff)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _coefficient_array(order: int) -> np.ndarray:
    arr = np.array([float(c) for c in series_coefficients(order)], dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PerimeterSeries:
    order: int = DEFAULT_ORDER

    @property
    def exact(self) -> tuple[Fraction, ...]:
        return series_coefficients(self.order)

    @property
    def values(self) -> np.ndarray:
        return _coefficient_array(self.order)

    def s_and_t(self, n):
        s, t = kernels.series_pair(n, self.values)
        if np.ndim(n) == 0:
            return float(s[0]), float(t[0])
        return s, t


def series_s(n, order: int = DEFAULT_ORDER):
    return PerimeterSeries(order).s_and_t(n)[0]


def series_t(n, order: int = DEFAULT_ORDER):
    return PerimeterSeries(order).s_and_t(n)[1]


# ------------------------------------------------------------------ shapes


@dataclass(frozen=True)
class EllipseSpec:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b >= 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("semiaxes must satisfy a > 0, b >= 0")

    @property
    def c(self) -> float:
        return math.hypot(self.a, self.b)

    @property
    def n(self) -> float:
        a2, b2 = self.a * self.a, self.b * self.b
        return (a2 - b2) / (a2 + b2)

    def passes_through(self, f: float, g: float) -> float:
        """Residual f^2/a^2 + g^2/b^2 - 1 of the corner (f, g)."""
        return f * f / (self.a * self.a) + g * g / (self.b * self.b) - 1.0


@dataclass(frozen=True)
class RectSpec:
    f: float
    g: float

    def __post_init__(self):
        if not (self.f > 0 and self.g > 0 and math.isfinite(self.f) and math.isfinite(self.g)):
            raise ValueError("rectangle half-sides must be positive")

    @property
    def h(self) -> float:
        return math.hypot(self.f, self.g)

    @property
    def i(self) -> float:
        f2, g2 = self.f * self.f, self.g * self.g
        return (f2 - g2) / (f2 + g2)


def quarter_perimeter(e: EllipseSpec, order: int = DEFAULT_ORDER) -> float:
    return math.pi * e.c / (2.0 * math.sqrt(2.0)) * series_s(abs(e.n), order)


# ------------------------------------------------------------------ i <-> n


def i_of_n(n, order: int = DEFAULT_ORDER):
    """Rectangle parameter i whose perimeter-optimal ellipse has parameter n."""
    scalar = np.ndim(n) == 0
    n_arr = np.atleast_1d(np.asarray(n, dtype=float))
    s, t = kernels.series_pair(n_arr, _coefficient_array(order))
    m2 = 1.0 - n_arr * n_arr
    num = 2.0 * n_arr * n_arr * s - 2.0 * m2 * t
    den = n_arr * (1.0 + n_arr * n_arr) * s - 2.0 * n_arr * m2 * t
    tiny = np.abs(n_arr) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(tiny, 1.75 * n_arr, num / np.where(tiny, 1.0, den))
    return float(out[0]) if scalar else out


@functools.lru_cache(maxsize=None)
def assert_monotone(order: int = DEFAULT_ORDER) -> None:
    grid = np.linspace(BRACKET[0], BRACKET[1], MONOTONE_SCAN)
    vals = i_of_n(grid, order)
    bad = np.nonzero(np.diff(vals) <= 0.0)[0]
    if bad.size:
        j = int(bad[0])
        raise NoBracket(
            f"i_of_n is not increasing at order {order}: i({grid[j]:.6g}) = {vals[j]:.9g} "
            f">= i({grid[j + 1]:.6g}) = {vals[j + 1]:.9g}"
        )


def n_of_i(i: float, order: int = DEFAULT_ORDER, tol: float = 1e-13) -> float:
    """Inverse of :func:`i_of_n` on (0, 1)."""
    if i == 0.0:
        return 0.0
    if i == 1.0:
        return 1.0
    if not 0.0 < i < 1.0:
        raise ValueError("i must lie in [0, 1]")
    assert_monotone(order)
    lo, hi = BRACKET
    i_lo = i_of_n(lo, order)
    i_hi = i_of_n(hi, order)
    if i <= i_lo:
        # below the bracket i is linear in n to O(n^3)
        return lo * i / i_lo
    if i >= i_hi:
        raise NoBracket(f"i = {i!r} exceeds i_of_n at the upper bracket end ({i_hi!r}); raise the order")
    from scipy.optimize import brentq  # deferred: keeps CLI start-up short

    return float(brentq(lambda n: i_of_n(n, order) - i, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))


def approx_n_of_i(i: float, scheme: str = "compromise") -> float:
    if scheme == "linear":
        return 4.0 * i / 7.0
    if scheme == "cubic":
        return 4.0 * i / 7.0 - 306.0 / 2401.0 * i**3
    if scheme == "compromise":
        return 4.0 * i / (7.0 - 3.0 * i * i)
    raise ValueError(f"unknown scheme {scheme!r}")


# ------------------------------------------------------------------ solvers


def min_area_rect(r: RectSpec) -> EllipseSpec:
    return EllipseSpec(r.f * math.sqrt(2.0), r.g * math.sqrt(2.0))


def ellipse_through_corner(r: RectSpec, n: float) -> EllipseSpec:
    """The ellipse of shape ``n`` (major axis along f) passing through (f, g)."""
    c2 = 2.0 * (r.f * r.f / (1.0 + n) + r.g * r.g / (1.0 - n))
    return EllipseSpec(math.sqrt(0.5 * c2 * (1.0 + n)), math.sqrt(0.5 * c2 * (1.0 - n)))


def min_perimeter_rect(r: RectSpec, order: int = DEFAULT_ORDER, tol: float = 1e-13) -> tuple[EllipseSpec, float]:
    i = r.i
    if i < 0:
        swapped, per = min_perimeter_rect(RectSpec(r.g, r.f), order, tol)
        return EllipseSpec(swapped.b, swapped.a), per
    n = n_of_i(i, order, tol)
    if n >= 1.0:
        raise ToleranceNotMet(f"i = {i!r} is indistinguishable from 1; the ellipse collapses to a segment")
    c2 = 2.0 * r.h**2 * (1.0 - i * n) / (1.0 - n * n)
    e = EllipseSpec(math.sqrt(0.5 * c2 * (1.0 + n)), math.sqrt(0.5 * c2 * (1.0 - n)))
    return e, quarter_perimeter(e, order)


# ------------------------------------------------------------------ ODEs


def riccati_step_integrate(n0: float, z0: float, n1: float, steps: int = 10_000) -> float:
    """RK4 for dz/dn = n/(4(1-n^2)) + z^2/n from (n0, z0) to n1."""
    if not 0.0 < n0 < n1 < 1.0:
        raise ValueError("need 0 < n0 < n1 < 1")
    if steps < 1:
        raise ValueError("steps must be positive")
    z = kernels.riccati_rk4(n0, z0, n1, steps)
    if not math.isfinite(z):
        raise StepOverflow(f"Riccati solution blew up before n = {n1}")
    return z


def riccati_residual(n: float, z: float, dz_dn: float) -> float:
    return dz_dn - n / (4.0 * (1.0 - n * n)) - z * z / n


def ode_in_residual(n: float, i: float, di_dn: float, form: str = "squared_factor") -> float:
    """Left minus right side of a candidate first-order ODE linking i and n.

    ``squared_factor``: -2n(1-n^2)^2 i' = -7n + 3n^3 + 2i(1+3n^2) + i^2 n(1-5n^2)
    ``linear_factor``:  -2n(1-n^2) i'   = -7n + 3n^2 + 2i(1+3n^2) + i^2 n(1-5n^2)
    """
    tail = 2.0 * i * (1.0 + 3.0 * n * n) + i * i * n * (1.0 - 5.0 * n * n)
    if form == "squared_factor":
        return -2.0 * n * (1.0 - n * n) ** 2 * di_dn - (-7.0 * n + 3.0 * n**3 + tail)
    if form == "linear_factor":
        return -2.0 * n * (1.0 - n * n) * di_dn - (-7.0 * n + 3.0 * n**2 + tail)
    raise ValueError(f"unknown form {form!r}; expected one of {IN_ODE_FORMS}")


def ode_s_residual(n: float, h: float = 1e-4, order: int = DEFAULT_ORDER) -> float:
    """4n s'' + 4 s' + n s/(1-n^2) for the truncated series, derivatives by central differences."""
    s_m, s_0, s_p = series_s(np.array([n - h, n, n + h]), order)
    d1 = (s_p - s_m) / (2.0 * h)
    d2 = (s_p - 2.0 * s_0 + s_m) / (h * h)
    return float(4.0 * n * d2 + 4.0 * d1 + n * s_0 / (1.0 - n * n))


# ------------------------------------------------------------------ product identity


def product_pi_over_2sqrt2(terms: int) -> float:
    """Partial product prod_{k<=terms} (4k)^2/((4k-1)(4k+1))."""
    if terms < 1:
        raise ValueError("terms must be at least 1")
    k = np.arange(1, terms + 1, dtype=np.float64)
    sq = 16.0 * k * k
    return float(np.exp(np.sum(np.log1p(1.0 / (sq - 1.0)))))


def partial_product_exact(k: int) -> Fraction:
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= Fraction(16 * j * j, (4 * j - 1) * (4 * j + 1))
    return out


def partial_series_sum_exact(k: int) -> Fraction:
    """1 - C_1 - ... - C_k: the value at n = 1 of the series cut after k terms."""
    return 1 - sum(series_coefficients(2 * k), Fraction(0))


# ------------------------------------------------------------------ tabulation


@dataclass(frozen=True)
class TableRow:
    n: float
    s: float
    t: float
    z: float
    i: float


@dataclass(frozen=True)
class Table:
    rows: tuple[TableRow, ...]
    inversions: tuple[int, ...]  # indices j where i[j+1] <= i[j]


def tabulate(n_grid, order: int = DEFAULT_ORDER) -> Table:
    grid = np.asarray(list(n_grid), dtype=float)
    if grid.size and not np.all((grid > 0) & (grid < 1)):
        raise ValueError("grid values must lie in (0, 1)")
    s, t = PerimeterSeries(order).s_and_t(grid) if grid.size else (np.array([]), np.array([]))
    iv = i_of_n(grid, order) if grid.size else np.array([])
    rows = tuple(TableRow(float(a), float(b), float(c), float(c / b), float(d)) for a, b, c, d in zip(grid, s, t, iv))
    inv = tuple(int(j) for j in np.nonzero(np.diff(iv) <= 0)[0]) if grid.size > 1 else ()
    return Table(rows, inv)
