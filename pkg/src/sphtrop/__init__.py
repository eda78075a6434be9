"""Exact tropicalization of subvarieties of matrix groups and tori.

Points over truncated Puiseux/Laurent series are mapped to tuples of
invariant factors (or coordinatewise valuations), subvarieties are
swept through parametrized families, and matrix-product constraints are
decided through Horn's inequalities.  All arithmetic is exact.
"""

from .series import DEFAULT_PRECISION, IndeterminateValuation, PuiseuxSeries
from .expr import (MissingAssignment, ParseError, evaluate, parse,
                   parse_series, to_string)
from .matrix import (SeriesMatrix, determinantal_valuations,
                     invariant_factors_minors, smith_normal_form)
from .horn import (DimensionMismatch, HornQuery, IndexTriple, enumerate_T,
                   enumerate_U, horn_check, realizability_oracle,
                   rep_variety_membership)
from .trop import (CheckResult, CheckVerdict, CurveClass, GroupSpace,
                   MixedSpaces, NotOnSpace, SampleResult, SpaceKind,
                   TropPoint, VarietySpec, check_on_variety,
                   in_valuation_cone, punctured_curve_classifier,
                   ray_closure, sample_family, val_point)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION", "IndeterminateValuation", "PuiseuxSeries",
    "MissingAssignment", "ParseError", "evaluate", "parse", "parse_series",
    "to_string",
    "SeriesMatrix", "determinantal_valuations", "invariant_factors_minors",
    "smith_normal_form",
    "DimensionMismatch", "HornQuery", "IndexTriple", "enumerate_T",
    "enumerate_U", "horn_check", "realizability_oracle",
    "rep_variety_membership",
    "CheckResult", "CheckVerdict", "CurveClass", "GroupSpace", "MixedSpaces",
    "NotOnSpace", "SampleResult", "SpaceKind", "TropPoint", "VarietySpec",
    "check_on_variety", "in_valuation_cone", "punctured_curve_classifier",
    "ray_closure", "sample_family", "val_point",
]
