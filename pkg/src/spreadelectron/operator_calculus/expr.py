"""Noncommutative operator expressions in normal form.

A term is ``coeff * Gamma_B * f_1 f_2 ... * d_{mu_1} d_{mu_2} ...``:

* ``Gamma_B`` a Clifford blade (constant matrix, commutes with everything
  that is not a matrix),
* ``f_i`` field atoms acting by multiplication, sorted,
* ``d_mu`` partial derivatives acting on everything to their right, sorted
  and always rightmost.

Multiplying two normal-form terms pushes the left term's derivatives through
the right term's fields with the product rule, emitting derived-field atoms.
That is the only rewrite needed for the ordering, so normal form exists and is
unique.  Equality of expressions is equality of their term maps.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

from ..gamma_algebra import zeros as exact_zeros
from ..scalar_ring import ScalarCoeff
from .clifford import blade_matrix, blade_product, dagger_sign, is_even

__all__ = ["FieldAtom", "TermKey", "OpExpr", "field", "gamma", "deriv", "scalar", "blade"]


class FieldAtom(NamedTuple):
    """Component ``index`` of field ``name`` with sorted derivative indices applied.

    ``FieldAtom("A", 1, (0, 2))`` is d_0 d_2 A_1.  For the covariant potential
    the index is lower (A_0 is the scalar potential phi, A_k = -A^k); E and B
    carry 3-vector component indices 1..3.
    """

    name: str
    index: int
    derivs: tuple = ()

    def differentiate(self, mu: int) -> "FieldAtom":
        return FieldAtom(self.name, self.index, tuple(sorted(self.derivs + (mu,))))

    @property
    def order(self) -> int:
        return len(self.derivs)


class TermKey(NamedTuple):
    blade: int
    fields: tuple  # sorted FieldAtoms
    derivs: tuple  # sorted ints

    @property
    def is_operator_free(self) -> bool:
        return not self.derivs


@lru_cache(maxsize=200_000)
def _leibniz(derivs: tuple, fields: tuple) -> tuple:
    """Move the operator d_{derivs} past the multiplication operator ``fields``.

    Returns ((new_fields, leftover_derivs), multiplicity) pairs, unsorted
    leftover derivatives are the ones that did not hit a field.
    """
    state: dict[tuple, int] = {(fields, ()): 1}
    for mu in reversed(derivs):
        nxt: dict[tuple, int] = {}
        for (fs, rest), c in state.items():
            for j, f in enumerate(fs):
                nf = tuple(sorted(fs[:j] + (f.differentiate(mu),) + fs[j + 1 :]))
                key = (nf, rest)
                nxt[key] = nxt.get(key, 0) + c
            key = (fs, tuple(sorted(rest + (mu,))))
            nxt[key] = nxt.get(key, 0) + c
        state = nxt
    return tuple(state.items())


def _add_into(acc: dict, key: TermKey, c: ScalarCoeff) -> None:
    if key in acc:
        s = acc[key] + c
        if s.is_zero():
            del acc[key]
        else:
            acc[key] = s
    elif not c.is_zero():
        acc[key] = c


class OpExpr:
    """Immutable sum of normal-form terms, ``TermKey -> ScalarCoeff``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[TermKey, ScalarCoeff] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = ScalarCoeff.coerce(c)
                if not c.is_zero():
                    clean[TermKey(*k)] = c
        self.terms = clean
        self._hash = None

    # -- construction ---------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "OpExpr":
        if isinstance(x, OpExpr):
            return x
        return cls({TermKey(0, (), ()): ScalarCoeff.coerce(x)})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[TermKey, ScalarCoeff]]) -> "OpExpr":
        acc: dict = {}
        for k, c in items:
            _add_into(acc, TermKey(*k), ScalarCoeff.coerce(c))
        out = cls()
        out.terms = acc
        return out

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        try:
            o = OpExpr.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(acc, k, c)
        out = OpExpr()
        out.terms = acc
        return out

    __radd__ = __add__

    def __neg__(self):
        out = OpExpr()
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        try:
            o = OpExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "OpExpr":
        c = ScalarCoeff.coerce(c)
        if c.is_zero():
            return OpExpr()
        out = OpExpr()
        out.terms = {k: v * c for k, v in self.terms.items() if not (v * c).is_zero()}
        return out

    def __mul__(self, other):
        if isinstance(other, OpExpr):
            return self._product(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        # scalars commute with everything
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(ScalarCoeff.coerce(other).inverse())

    def _product(self, other: "OpExpr") -> "OpExpr":
        acc: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                sign, b = blade_product(k1.blade, k2.blade)
                c = c1 * c2
                if sign < 0:
                    c = -c
                if k1.derivs:
                    for (fs, rest), mult in _leibniz(k1.derivs, k2.fields):
                        key = TermKey(
                            b,
                            tuple(sorted(k1.fields + fs)),
                            tuple(sorted(rest + k2.derivs)),
                        )
                        _add_into(acc, key, c * mult)
                else:
                    key = TermKey(b, tuple(sorted(k1.fields + k2.fields)), k2.derivs)
                    _add_into(acc, key, c)
        out = OpExpr()
        out.terms = acc
        return out

    def __pow__(self, n: int) -> "OpExpr":
        out = OpExpr.coerce(1)
        for _ in range(n):
            out = out * self
        return out

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        try:
            o = OpExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[TermKey, ScalarCoeff]]:
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[TermKey, ScalarCoeff]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0].fields), kv[0]))

    # -- structure queries ------------------------------------------------

    def map_coeffs(self, fn) -> "OpExpr":
        return OpExpr.from_terms((k, fn(c)) for k, c in self.terms.items())

    def filter(self, pred) -> "OpExpr":
        out = OpExpr()
        out.terms = {k: c for k, c in self.terms.items() if pred(k, c)}
        return out

    def substitute(self, bindings) -> "OpExpr":
        return self.map_coeffs(lambda c: c.substitute(bindings))

    def degrees(self, symbol: str) -> set[int]:
        out: set[int] = set()
        for c in self.terms.values():
            out |= c.degrees(symbol)
        return out

    def grade_part(self, symbol: str, k: int) -> "OpExpr":
        return self.map_coeffs(lambda c: c.grade(symbol, k))

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for c in self.terms.values():
            out |= c.symbols()
        return out

    def field_names(self) -> set[str]:
        return {f.name for k in self.terms for f in k.fields}

    def has_derivatives(self) -> bool:
        return any(k.derivs for k in self.terms)

    def max_field_count(self) -> int:
        return max((len(k.fields) for k in self.terms), default=0)

    def even_part(self) -> "OpExpr":
        return self.filter(lambda k, c: is_even(k.blade))

    def odd_part(self) -> "OpExpr":
        return self.filter(lambda k, c: not is_even(k.blade))

    def dagger(self) -> "OpExpr":
        """Hermitian conjugate of a derivative-free expression.

        Fields and formal symbols are treated as real; every factor commutes
        except the blade, whose conjugate is tabulated.
        """
        if self.has_derivatives():
            raise ValueError("dagger() is only defined for derivative-free expressions")
        return OpExpr.from_terms(
            (k, c.conjugate() * dagger_sign(k.blade)) for k, c in self.terms.items()
        )

    def to_matrix(self, field_values: Mapping[FieldAtom, object] | None = None) -> np.ndarray:
        """Exact 4x4 matrix of a derivative-free expression.

        Field atoms must be given values (numbers or ScalarCoeff); they commute
        with the matrices.
        """
        if self.has_derivatives():
            raise ValueError("expression contains derivative operators")
        field_values = field_values or {}
        out = exact_zeros()
        for k, c in self.terms.items():
            coef = c
            for f in k.fields:
                if f not in field_values:
                    raise KeyError(f"no value for field atom {f}")
                coef = coef * ScalarCoeff.coerce(field_values[f])
            out = out + blade_matrix(k.blade) * coef
        return out

    def __repr__(self):
        from .serialize import pretty

        return f"OpExpr({pretty(self)})"

    def __str__(self):
        from .serialize import pretty

        return pretty(self)


def scalar(c) -> OpExpr:
    return OpExpr.coerce(c)


def blade(b: int, c=1) -> OpExpr:
    return OpExpr({TermKey(b, (), ()): ScalarCoeff.coerce(c)})


def gamma(mu: int) -> OpExpr:
    """gamma^mu (upper index)."""
    return blade(1 << mu)


def deriv(mu: int) -> OpExpr:
    """d_mu = d/dx^mu acting to the right."""
    return OpExpr({TermKey(0, (), (mu,)): ScalarCoeff.coerce(1)})


def field(name: str, index: int, derivs: tuple = ()) -> OpExpr:
    return OpExpr({TermKey(0, (FieldAtom(name, index, tuple(sorted(derivs))),), ()): 1})


