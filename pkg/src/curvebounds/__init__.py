"""Exact upper bounds on rational point counts of curves over finite fields.

Exposes the value types and bound operations; see the README for the CLI.
"""

from .classical import (
    BoundReport,
    CurveParams,
    Threshold,
    g2_threshold,
    g3_threshold,
    ihara_trace,
    is_prime_power,
    prime_powers,
    weil_serre_trace,
    weil_trace,
)
from .errors import (
    BelowIharaRange,
    CurveBoundsError,
    DegreeTooHigh,
    DomainError,
    EmptySearch,
    IntegralityViolation,
    InvalidCut,
    NoRealRoot,
    NotPSD,
    NotPositiveDefinite,
    OutOfIharaRange,
    RadicandMismatch,
    UncertifiedCut,
)
from .order3 import (
    RefineMatrix3,
    RootEnclosure,
    SearchBudget,
    SearchResult,
    matrix_bound3,
    record_table3,
    search_matrix3,
    wo3_report,
    wo3_trace_enclosure,
)
from .qext import Quad, parse_quad, render_quad
from .refine2 import (
    AffineCut,
    GainAsymptote,
    RefineMatrix2,
    gain_asymptote,
    gain_at_4q,
    gain_cap_at_4q,
    general_bound,
    ihara_alpha,
    ihara_serre_trace,
    matrix_bound2,
    optimal_matrix2,
    serre_cut,
    serre_gain,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
