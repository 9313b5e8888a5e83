"""Rhombus tilings with n-fold rotational symmetry from regular multigrids.

Singularities (three or more concurrent grid lines) are detected exactly
with cyclotomic-field arithmetic, never trusted to floating point.
"""

from .cyclotomic import (
    CyclotomicNumber,
    RationalAngle,
    Sign,
    cos_of,
    cosine_combination_is_zero,
    cyclotomic_polynomial,
    is_zero,
    root_power,
    sign_of_real,
    sin_of,
)
from .dualizer import (
    NotCoveredError,
    RhombusTile,
    SingularPointError,
    Tiling,
    TilingVertex,
    dual_tile,
    generate_tiling,
    shape_class,
)
from .multigrid import K, ExactPoint, GridLine, MultigridSpec, direction_angle, embed, f, line_value
from .regularity import (
    CosineTripleClassification,
    Intersection,
    SingularityReport,
    TripleCase,
    Verdict,
    angle_normalize,
    classify_cosine_triple,
    concurrency_test,
    enumerate_intersections,
    find_singularities,
    intersect_pair,
    theorem2_applies,
    trig_inequation_holds,
)
from .validator import (
    ValidationReport,
    check_edge_to_edge,
    check_rhombi,
    check_rotational_symmetry,
    shape_census,
    validate,
)

__version__ = "0.1.0"
