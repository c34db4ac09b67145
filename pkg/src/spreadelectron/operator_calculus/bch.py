"""Commutators, the Campbell-Hausdorff series and conjugation series.

The series functions are written against ``+``, ``-``, ``*`` and scalar
multiplication only, so they run unchanged on :class:`OpExpr` and on numpy
matrices (the numeric oracles feed them plain arrays).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np

from ..scalar_ring import GaussianRational, ScalarCoeff
from .expr import OpExpr
from .rules import Audit, RewriteRuleSet, NO_RULES, normalize

__all__ = ["commutator", "cbh_expand", "conjugate_expand", "grade_filter", "DELTA_S"]

DELTA_S = "ds"


def _mul(a, b):
    if isinstance(a, np.ndarray):
        return a @ b
    return a * b


def _scale(x, c):
    if isinstance(x, np.ndarray):
        return x * complex(c)
    return x * ScalarCoeff.coerce(c)


def commutator(a, b, rules: RewriteRuleSet = NO_RULES):
    """[a, b] = ab - ba."""
    out = _mul(a, b) - _mul(b, a)
    if isinstance(out, OpExpr) and rules != NO_RULES:
        out = normalize(out, rules)
    return out


def _truncate(x, order: int, audit: Audit | None):
    if not isinstance(x, OpExpr):
        return x
    kept = x.map_coeffs(
        lambda c: ScalarCoeff({mo: g for mo, g in c.parts.items() if mo.degree(DELTA_S) <= order})
    )
    if audit is not None:
        dropped = sum(len(c.parts) for c in x.terms.values()) - sum(len(c.parts) for c in kept.terms.values())
        if dropped:
            audit.note("truncation", f"dropped {dropped} coefficient parts above δs^{order}", dropped)
    return kept


def _check_grading(x, name: str):
    if isinstance(x, OpExpr) and x and min(x.degrees(DELTA_S)) < 1:
        raise ValueError(f"{name} must carry δs grade >= 1")


def cbh_expand(X, Y, order: int, audit: Audit | None = None):
    """log(exp(X) exp(Y)) through the given order.

    Z = X + Y + 1/2 [X,Y] + 1/12 ([[X,Y],Y] - [[X,Y],X]) + ...

    ``order`` counts commutator depth + 1; for OpExpr inputs it is also the
    maximum power of δs kept.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"cbh order must be 1, 2 or 3, got {order}")
    _check_grading(X, "X")
    _check_grading(Y, "Y")
    Z = X + Y
    if order >= 2:
        xy = commutator(X, Y)
        Z = Z + _scale(xy, Fraction(1, 2))
        if order >= 3:
            Z = Z + _scale(commutator(xy, Y) - commutator(xy, X), Fraction(1, 12))
    return _truncate(Z, order, audit)


def conjugate_expand(phi, omega, order: int, audit: Audit | None = None):
    """exp(-i omega) phi exp(i omega) as a bracket series.

    phi + i[phi, omega] - 1/2 [[phi, omega], omega] + ... ; the k-th term is
    i^k/k! times the k-fold nested bracket, kept for k <= order.  With this
    convention phi exp(i omega) = exp(i omega) {result}.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"conjugation order must be 1, 2 or 3, got {order}")
    _check_grading(omega, "omega")
    out = phi
    nested = phi
    for k in range(1, order + 1):
        nested = commutator(nested, omega)
        c = GaussianRational(0, 1) ** k * GaussianRational(Fraction(1, factorial(k)))
        out = out + (_scale(nested, complex(c)) if isinstance(nested, np.ndarray) else nested * ScalarCoeff.coerce(c))
    return _truncate(out, order, audit)


def grade_filter(e: OpExpr, delta_s_power: int) -> OpExpr:
    """Sub-sum of terms carrying exactly the given power of δs."""
    return e.grade_part(DELTA_S, delta_s_power)
