"""Exact symbolic checks for Goursat and k-contact distributions."""

from __future__ import annotations

from .calculus import DiffForm, MultiVector, VectorField, lie_bracket
from .distrib import Distribution, derived_flag, generic_rank, is_goursat, kcontact_verify
from .parser import ParseError, parse_chart, parse_poly, parse_vector_field
from .symcore import Chart, Point, RatFrac, TrigPoly

__all__ = [
    "Chart",
    "DiffForm",
    "Distribution",
    "MultiVector",
    "ParseError",
    "Point",
    "RatFrac",
    "TrigPoly",
    "VectorField",
    "derived_flag",
    "generic_rank",
    "is_goursat",
    "kcontact_verify",
    "lie_bracket",
    "parse_chart",
    "parse_poly",
    "parse_vector_field",
]
