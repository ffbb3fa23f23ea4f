"""Extremal ellipses through point sets.

* :mod:`.conic` - conics in oblique frames, determinant invariants, areas
* :mod:`.pencil` - pencil through four points and its minimal-area ellipse
* :mod:`.steiner` - minimal-area circumellipse of a triangle
* :mod:`.perimeter` - minimal-area / minimal-perimeter ellipses over a rectangle
* :mod:`.oracles` - brute-force numerical cross-checks
"""

__version__ = "0.1.0"

from .conic import (  # noqa: E402
    Conic,
    ConicClass,
    ObliqueFrame,
    Point2,
    apply_affine,
    classify,
    det_m,
    det_n,
    ellipse_area,
    geometric_form,
    hyperbola_tangent_triangle_area,
    principal_axes_parallelogram,
    signed_area_invariant,
)
from .pencil import (  # noqa: E402
    Pencil4,
    Quad4,
    build_pencil,
    classify_quadrilateral,
    conelliptic_check,
    critical_cubic,
    euler_cubic,
    member,
    minimal_area_ellipse,
)
from .perimeter import (  # noqa: E402
    EllipseSpec,
    RectSpec,
    i_of_n,
    min_area_rect,
    min_perimeter_rect,
    n_of_i,
    quarter_perimeter,
    series_s,
    series_t,
)
from .steiner import Triangle, ratio_convergents, steiner_ellipse  # noqa: E402
