"""Hot numerical kernels with two interchangeable back ends.

Each kernel exists as a compiled loop (numba ``@njit``) and as a vectorised
pure-numpy routine. The active back end is chosen once at import time:

* ``EXTREMAL_ELLIPSES_BACKEND=numpy`` forces the numpy routines;
* ``EXTREMAL_ELLIPSES_BACKEND=numba`` requires numba (ImportError otherwise);
* unset or ``auto`` uses numba when it imports, numpy otherwise.

Both implementations stay importable through :data:`NUMBA` and :data:`NUMPY`
so tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

BACKEND_ENV = "EXTREMAL_ELLIPSES_BACKEND"

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------- numpy path


def _series_pair_np(n, coeffs):
    """s = 1 - sum c_k n^(2k), t = sum 2k c_k n^(2k), Horner in x = n^2."""
    x = np.asarray(n, dtype=np.float64) ** 2
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for k in range(coeffs.shape[0], 0, -1):
        c = coeffs[k - 1]
        p = (p + c) * x
        q = (q + 2.0 * k * c) * x
    return 1.0 - p, q


def _riccati_rhs(n, z):
    return n / (4.0 * (1.0 - n * n)) + z * z / n


def _riccati_rk4_np(n0, z0, n1, steps):
    h = (n1 - n0) / steps
    z = z0
    for j in range(steps):
        n = n0 + j * h
        k1 = _riccati_rhs(n, z)
        k2 = _riccati_rhs(n + 0.5 * h, z + 0.5 * h * k1)
        k3 = _riccati_rhs(n + 0.5 * h, z + 0.5 * h * k2)
        k4 = _riccati_rhs(n + h, z + h * k3)
        z = z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(z):
            return math.inf
    return z


def _chord_area_np(A, B, C, D, E, F, x_lo, x_hi, strips):
    # x = mid - half*cos(theta) removes the square-root endpoint singularity
    mid = 0.5 * (x_lo + x_hi)
    half = 0.5 * (x_hi - x_lo)
    theta = (np.arange(strips) + 0.5) * (math.pi / strips)
    x = mid - half * np.cos(theta)
    rad = (E + B * x) ** 2 - C * (A * x * x + 2.0 * D * x + F)
    rad = np.where(rad < 0.0, 0.0, rad)
    chord = 2.0 * np.sqrt(rad) / abs(C)
    return float(np.sum(chord * half * np.sin(theta)) * (math.pi / strips))


def _pencil_area_np(b_grid, A, C, D, E, F, pole_eps):
    b = np.asarray(b_grid, dtype=np.float64)
    dn = A * C - b * b
    dm = A * (C * F - E * E) - b * (b * F - D * E) + D * (b * E - C * D)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = dm / np.abs(dn) ** 1.5
    return np.where(np.abs(dn) <= pole_eps, np.nan, out)


NUMPY = SimpleNamespace(
    name="numpy",
    series_pair=_series_pair_np,
    riccati_rk4=_riccati_rk4_np,
    chord_area=_chord_area_np,
    pencil_area=_pencil_area_np,
)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, fastmath=False)

    @_jit
    def _series_pair_nb(n, coeffs):
        m = coeffs.shape[0]
        s = np.empty(n.shape[0])
        t = np.empty(n.shape[0])
        for j in range(n.shape[0]):
            x = n[j] * n[j]
            p = 0.0
            q = 0.0
            for k in range(m, 0, -1):
                c = coeffs[k - 1]
                p = (p + c) * x
                q = (q + 2.0 * k * c) * x
            s[j] = 1.0 - p
            t[j] = q
        return s, t

    @_jit
    def _riccati_rk4_nb(n0, z0, n1, steps):
        h = (n1 - n0) / steps
        z = z0
        for j in range(steps):
            n = n0 + j * h
            nm = n + 0.5 * h
            ne = n + h
            k1 = n / (4.0 * (1.0 - n * n)) + z * z / n
            za = z + 0.5 * h * k1
            k2 = nm / (4.0 * (1.0 - nm * nm)) + za * za / nm
            zb = z + 0.5 * h * k2
            k3 = nm / (4.0 * (1.0 - nm * nm)) + zb * zb / nm
            zc = z + h * k3
            k4 = ne / (4.0 * (1.0 - ne * ne)) + zc * zc / ne
            z = z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            if not math.isfinite(z):
                return math.inf
        return z

    @_jit
    def _chord_area_nb(A, B, C, D, E, F, x_lo, x_hi, strips):
        mid = 0.5 * (x_lo + x_hi)
        half = 0.5 * (x_hi - x_lo)
        dtheta = math.pi / strips
        total = 0.0
        for j in range(strips):
            theta = (j + 0.5) * dtheta
            x = mid - half * math.cos(theta)
            rad = (E + B * x) ** 2 - C * (A * x * x + 2.0 * D * x + F)
            if rad < 0.0:
                rad = 0.0
            total += 2.0 * math.sqrt(rad) / abs(C) * half * math.sin(theta)
        return total * dtheta

    @_jit
    def _pencil_area_nb(b_grid, A, C, D, E, F, pole_eps):
        out = np.empty(b_grid.shape[0])
        for j in range(b_grid.shape[0]):
            b = b_grid[j]
            dn = A * C - b * b
            if abs(dn) <= pole_eps:
                out[j] = np.nan
                continue
            dm = A * (C * F - E * E) - b * (b * F - D * E) + D * (b * E - C * D)
            out[j] = dm / abs(dn) ** 1.5
        return out

    NUMBA = SimpleNamespace(
        name="numba",
        series_pair=_series_pair_nb,
        riccati_rk4=_riccati_rk4_nb,
        chord_area=_chord_area_nb,
        pencil_area=_pencil_area_nb,
    )
else:  # pragma: no cover
    NUMBA = None


def _select_backend():
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice == "numpy":
        return NUMPY
    if choice == "numba":
        if NUMBA is None:
            raise ImportError(f"{BACKEND_ENV}=numba but numba is not importable")
        return NUMBA
    if choice not in ("", "auto"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba', 'numpy' or 'auto', got {choice!r}")
    return NUMBA if NUMBA is not None else NUMPY


ACTIVE = _select_backend()


def backend_name() -> str:
    return ACTIVE.name


def series_pair(n, coeffs):
    n_arr = np.atleast_1d(np.asarray(n, dtype=np.float64))
    return ACTIVE.series_pair(np.ascontiguousarray(n_arr), np.ascontiguousarray(coeffs, dtype=np.float64))


def riccati_rk4(n0: float, z0: float, n1: float, steps: int) -> float:
    return float(ACTIVE.riccati_rk4(float(n0), float(z0), float(n1), int(steps)))


def chord_area(coeffs, x_lo: float, x_hi: float, strips: int) -> float:
    A, B, C, D, E, F = (float(v) for v in coeffs)
    return float(ACTIVE.chord_area(A, B, C, D, E, F, float(x_lo), float(x_hi), int(strips)))


def pencil_area(b_grid, A, C, D, E, F, pole_eps: float):
    grid = np.ascontiguousarray(np.atleast_1d(np.asarray(b_grid, dtype=np.float64)))
    return ACTIVE.pencil_area(grid, float(A), float(C), float(D), float(E), float(F), float(pole_eps))
