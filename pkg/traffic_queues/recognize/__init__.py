"""Recognition of algebraic constants and integer polynomials from numeric data."""

from traffic_queues.recognize.fitting import (
    InsufficientPointsError,
    NoIntegerFitError,
    NoRescaledFitError,
    fit_int_poly,
    growth_diagnostics,
    read_points,
    rescale_scan,
    write_points,
)
from traffic_queues.recognize.minpoly import (
    NoRelationFoundError,
    minimal_polynomial,
    required_precision,
    significant_digits,
)
from traffic_queues.recognize.models import (
    FitReport,
    GrowthDiagnostic,
    IntPolynomial,
    MinPolyResult,
    RecognitionError,
)
from traffic_queues.recognize.nested import (
    NoFactorizationError,
    NonRealBranchError,
    eval_radical_form,
    quartic_to_nested_radical,
)


__all__ = [
    'FitReport',
    'GrowthDiagnostic',
    'InsufficientPointsError',
    'IntPolynomial',
    'MinPolyResult',
    'NoFactorizationError',
    'NoIntegerFitError',
    'NoRelationFoundError',
    'NoRescaledFitError',
    'NonRealBranchError',
    'RecognitionError',
    'eval_radical_form',
    'fit_int_poly',
    'growth_diagnostics',
    'minimal_polynomial',
    'quartic_to_nested_radical',
    'read_points',
    'required_precision',
    'rescale_scan',
    'significant_digits',
    'write_points',
]
