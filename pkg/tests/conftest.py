"""Shared generators for randomised tests."""

from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from extremal_ellipses.conic import Conic, ObliqueFrame, apply_affine
from extremal_ellipses.pencil import Pencil4, Quad4, build_pencil

SEED = 20240613


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_frame(rng) -> ObliqueFrame:
    omega = rng.uniform(0.2, math.pi - 0.2)
    return ObliqueFrame.with_angle(omega, origin=rng.uniform(-3, 3, 2), rotation=rng.uniform(0, 2 * math.pi))


def random_linear(rng, min_det: float = 0.05) -> np.ndarray:
    while True:
        s = rng.uniform(-2, 2, (2, 2))
        if abs(np.linalg.det(s)) > min_det:
            return s


def random_ellipse(rng) -> tuple[Conic, float]:
    """Affine image of a circle in a random oblique frame, plus its exact Euclidean area.

    The circle u^2 + v^2 = r^2 in frame coordinates has Euclidean area pi r^2 sin(omega);
    rewriting it in coordinates (u, v) = S (u', v') + t divides that by |det S|.
    """
    frame = random_frame(rng)
    r = rng.uniform(0.3, 3.0)
    base = Conic(1.0, 0.0, 1.0, 0.0, 0.0, -r * r, frame=frame)
    s = random_linear(rng)
    out = apply_affine(base, s, rng.uniform(-2, 2, 2)).scaled(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 10))
    return out, math.pi * r * r * frame.sin_omega / abs(np.linalg.det(s))


def random_pencil(rng, via_points: bool = True) -> Pencil4:
    """Conelliptic quadrilateral with normalised intercepts b = d = -1 and a, c in (1, 50]."""
    a, c = rng.uniform(1.0, 50.0, 2)
    omega = rng.uniform(0.15, math.pi - 0.15)
    p = Pencil4.from_intercepts(a, -1.0, c, -1.0, omega, origin=rng.uniform(-5, 5, 2), rotation=rng.uniform(0, 2 * math.pi))
    if not via_points:
        return p
    pts = list(p.labels)
    order = rng.permutation(4)
    return build_pencil(Quad4(tuple(pts[k] for k in order)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k)):
        terminalreporter.write_line(results[key])
