"""Exact and analytic machinery for integral multiples of points on elliptic curves.

The package splits into exact arithmetic (curves, divpoly, localdata,
factorization), analytic quantities computed to requested precision (heights,
analytic), explicit inequality evaluators (bounds), and the congruent-number
specialization with its reproducible point table (congruent).  Every check
that can be phrased as an inequality is reported as a BoundReport rather than
a bare boolean, so callers can see the numbers that were compared.
"""

from .curves import (
    Curve,
    CurveHeight,
    INFINITY,
    RatPoint,
    add,
    curve_height,
    j_invariant,
    make_curve,
    multiply,
    negate,
    on_curve,
    quasi_minimalize,
    rational_point,
)
from .divpoly import (
    DivisionPolynomial,
    WardSequence,
    cancellation,
    denominator_sequence,
    phi_terms,
    psi_polynomial,
    psi_value_binary,
    ward_terms,
    x_multiple_exact,
)
from .errors import (
    CapExceeded,
    EllmultError,
    FactorizationTooLarge,
    InadmissibleParameters,
    InternalInvariantError,
    NonIntegralBasePoint,
    NotIdentityComponent,
    OffCurve,
    ParityMismatch,
    PrecisionExhausted,
    RootFindingFailed,
    SingularCurve,
    TorsionInput,
    UnknownBound,
    UnreliableAtSmallPrime,
    ZeroTerm,
)
from .heights import (
    HeightEstimate,
    canonical_height,
    duplication_trace,
    height_window_check,
    lang_floor,
    naive_height,
    torsion_order,
)
from .localdata import ComponentProfile, component_order, global_M, in_identity_component, local_reduction
from .analytic import (
    LinearForm,
    PeriodData,
    elliptic_log,
    omega_floor,
    period_data,
    principal_linear_form,
    real_period,
    real_period_quadrature,
    torsion_x_coords,
    weierstrass_point,
)
from .reports import BoundReport
from . import bounds, congruent

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapExceeded",
    "ComponentProfile",
    "Curve",
    "CurveHeight",
    "DivisionPolynomial",
    "EllmultError",
    "FactorizationTooLarge",
    "HeightEstimate",
    "INFINITY",
    "InadmissibleParameters",
    "InternalInvariantError",
    "LinearForm",
    "NonIntegralBasePoint",
    "NotIdentityComponent",
    "OffCurve",
    "ParityMismatch",
    "PeriodData",
    "PrecisionExhausted",
    "RatPoint",
    "RootFindingFailed",
    "SingularCurve",
    "TorsionInput",
    "UnknownBound",
    "UnreliableAtSmallPrime",
    "WardSequence",
    "ZeroTerm",
    "add",
    "bounds",
    "cancellation",
    "canonical_height",
    "component_order",
    "congruent",
    "curve_height",
    "denominator_sequence",
    "duplication_trace",
    "elliptic_log",
    "global_M",
    "height_window_check",
    "in_identity_component",
    "j_invariant",
    "lang_floor",
    "local_reduction",
    "make_curve",
    "multiply",
    "naive_height",
    "negate",
    "omega_floor",
    "on_curve",
    "period_data",
    "phi_terms",
    "principal_linear_form",
    "psi_polynomial",
    "psi_value_binary",
    "quasi_minimalize",
    "rational_point",
    "real_period",
    "real_period_quadrature",
    "torsion_order",
    "torsion_x_coords",
    "ward_terms",
    "weierstrass_point",
    "x_multiple_exact",
]
