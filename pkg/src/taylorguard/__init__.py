"""Validated guard-crossing times for polynomial ODEs.

Taylor series with certified truncation bounds, evaluated in interval
arithmetic that restarts at higher precision whenever a decision cannot
be made.
"""

from .flow import Monomial, PolyFlow, State, bound_U, evaluate, recenter
from .guard import Ball, HalfSpace, distance, signed_distance, time_guard
from .problem import ProblemError, ProblemSpec, parse_problem, serialize_problem
from .scalar import (NO, UNKNOWN, YES, EnclosureError, PrecisionExhausted, Scalar, Trilean,
                     compare_lt, enclose, multivalued_negative, next_precision, parse_decimal,
                     to_decimal, working_precision)
from .series import BoundTriple, derive_bounds, eval_series, truncation_bound
from .stepper import Budget, GuardHit, SolverStats, Status, solve
from .taylor import SeriesSystem, series_general, series_linear

__version__ = "0.1.0"

__all__ = [
    "Ball", "BoundTriple", "Budget", "EnclosureError", "GuardHit", "HalfSpace", "Monomial",
    "NO", "PolyFlow", "PrecisionExhausted", "ProblemError", "ProblemSpec", "Scalar",
    "SeriesSystem", "SolverStats", "State", "Status", "Trilean", "UNKNOWN", "YES",
    "bound_U", "compare_lt", "derive_bounds", "distance", "enclose", "eval_series",
    "evaluate", "multivalued_negative", "next_precision", "parse_decimal", "parse_problem",
    "recenter", "serialize_problem", "series_general", "series_linear", "signed_distance",
    "solve", "time_guard", "to_decimal", "truncation_bound", "working_precision",
]
