"""Radial limits of the universal mock theta function ``g2`` at roots of unity."""

from .errors import (
    ClassificationError,
    DomainError,
    InsufficientDataError,
    MockRadialError,
    ParseError,
    PoleError,
    PoleProximityError,
    TruncationError,
)
from .exact_arith import Cusp, RootOfUnity, SpecParams
from .mock_core import CorrectionId, SeriesAccuracy
from .radial_limits import (
    CaseTag,
    RadialEstimate,
    RadialLimitResult,
    classify,
    closed_form,
    correction_value,
    curious_identity_odd,
    curious_identity_two_mod_four,
    B_closed_form,
    numeric_radial_limit,
    sweep,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "CaseTag",
    "ClassificationError",
    "CorrectionId",
    "Cusp",
    "DomainError",
    "InsufficientDataError",
    "MockRadialError",
    "ParseError",
    "PoleError",
    "PoleProximityError",
    "RadialEstimate",
    "RadialLimitResult",
    "RootOfUnity",
    "SeriesAccuracy",
    "SpecParams",
    "TruncationError",
    "classify",
    "closed_form",
    "correction_value",
    "curious_identity_odd",
    "curious_identity_two_mod_four",
    "B_closed_form",
    "numeric_radial_limit",
    "sweep",
    "verify",
]
