"""Noncommutative operator algebra: gamma matrices, fields and derivatives."""

from .bch import DELTA_S, cbh_expand, commutator, conjugate_expand, grade_filter
from .clifford import blade_matrix, blade_product, is_even, three_plus_one_name
from .expr import FieldAtom, OpExpr, TermKey, blade, deriv, field, gamma, scalar
from .rules import NO_RULES, Audit, RewriteError, RewriteRuleSet, normalize
from .serialize import ParseError, dumps, loads, pretty

__all__ = [
    "DELTA_S",
    "Audit",
    "FieldAtom",
    "NO_RULES",
    "OpExpr",
    "ParseError",
    "RewriteError",
    "RewriteRuleSet",
    "TermKey",
    "blade",
    "blade_matrix",
    "blade_product",
    "cbh_expand",
    "commutator",
    "conjugate_expand",
    "deriv",
    "dumps",
    "field",
    "gamma",
    "grade_filter",
    "is_even",
    "loads",
    "normalize",
    "pretty",
    "scalar",
    "three_plus_one_name",
]
