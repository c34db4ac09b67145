"""Symbolic 3-vector algebra over named constant vectors.

Used to evaluate expressions such as (B x r) x r without choosing
components.  A vector expression is a sum of

    coeff * (product of scalar factors) * V

where V is a named vector ``a`` or a simple cross product ``a x b`` (names
sorted, sign absorbed).  Scalar factors are dot products ``a.b`` and triple
products ``(a x b).c`` in canonical order.  Nested cross products are
expanded with

    (a x b) x c = b (a.c) - a (b.c),   a x (b x c) = b (a.c) - c (a.b),

so two expressions are equal as vectors exactly when their normal forms
agree (for generic vectors).  Self dot products of vectors listed in
``normed`` become powers of the symbol with the same name, e.g. r.r -> r^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .scalar_ring import ScalarCoeff, sym

__all__ = ["Vec", "Scal", "vector", "dot", "cross", "average_radial", "isotropic_average"]

_NORMED = {"r"}


def _dot_factor(a: str, b: str):
    """(factor or None, ScalarCoeff multiplier)."""
    if a == b and a in _NORMED:
        return None, sym(a, 2)
    return ("dot",) + tuple(sorted((a, b))), ScalarCoeff.coerce(1)


def _triple(a: str, b: str, c: str):
    """Canonical (a x b).c: sorted names with the permutation sign, or zero."""
    names = [a, b, c]
    if len(set(names)) < 3:
        return None, 0
    order = sorted(range(3), key=lambda i: names[i])
    # sign of the permutation that sorts the names
    perm = list(order)
    sign = 1
    for i in range(3):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return ("trip",) + tuple(sorted(names)), sign


def _mul_factors(f1: tuple, f2: tuple) -> tuple:
    return tuple(sorted(f1 + f2))


def _add(acc: dict, key, c: ScalarCoeff):
    v = acc.get(key, ScalarCoeff()) + c
    if v.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = v


@dataclass(frozen=True)
class Scal:
    """Sum of coeff * product of dot/triple factors."""

    terms: tuple  # ((factors, ScalarCoeff), ...)

    @classmethod
    def from_dict(cls, d: dict) -> "Scal":
        return cls(tuple(sorted(d.items(), key=lambda kv: repr(kv[0]))))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, c) -> "Scal":
        c = ScalarCoeff.coerce(c)
        return Scal.from_dict({k: v * c for k, v in self.terms if not (v * c).is_zero()})

    def constant(self) -> ScalarCoeff:
        """The value when there are no dot/triple factors left."""
        out = ScalarCoeff()
        for k, v in self.terms:
            if k:
                raise ValueError(f"scalar still depends on {k}")
            out = out + v
        return out

    def evaluate(self, values: Mapping[str, np.ndarray], bindings: Mapping[str, complex] | None = None):
        return sum(
            (v.to_float(bindings) * _eval_factors(k, values) for k, v in self.terms),
            0.0,
        )


@dataclass(frozen=True)
class Vec:
    """Sum of coeff * factors * base, base = ("v", a) or ("x", a, b)."""

    terms: tuple  # (((factors, base), ScalarCoeff), ...)

    @classmethod
    def from_dict(cls, d: dict) -> "Vec":
        return cls(tuple(sorted(d.items(), key=lambda kv: repr(kv[0]))))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Vec") -> "Vec":
        acc = self.as_dict()
        for k, v in other.terms:
            _add(acc, k, v)
        return Vec.from_dict(acc)

    def __neg__(self) -> "Vec":
        return self * -1

    def __sub__(self, other: "Vec") -> "Vec":
        return self + (-other)

    def __mul__(self, c) -> "Vec":
        c = ScalarCoeff.coerce(c)
        return Vec.from_dict({k: v * c for k, v in self.terms if not (v * c).is_zero()})

    __rmul__ = __mul__

    def coefficient_of(self, name: str) -> ScalarCoeff:
        """Coefficient of the bare vector ``name`` with no scalar factors."""
        return self.as_dict().get(((), ("v", name)), ScalarCoeff())

    def evaluate(self, values: Mapping[str, np.ndarray], bindings: Mapping[str, complex] | None = None) -> np.ndarray:
        out = np.zeros(3, dtype=complex)
        for (factors, base), c in self.terms:
            if base[0] == "v":
                v = values[base[1]]
            else:
                v = np.cross(values[base[1]], values[base[2]])
            out = out + c.to_float(bindings) * _eval_factors(factors, values) * v
        return out


def _eval_factors(factors: tuple, values: Mapping[str, np.ndarray]) -> float:
    out = 1.0
    for f in factors:
        if f[0] == "dot":
            out *= float(np.dot(values[f[1]], values[f[2]]))
        else:
            out *= float(np.dot(np.cross(values[f[1]], values[f[2]]), values[f[3]]))
    return out


def vector(name: str, c=1) -> Vec:
    return Vec(((((), ("v", name)), ScalarCoeff.coerce(c)),))


def _cross_base(b1: tuple, b2: tuple) -> dict:
    """Cross product of two bases as {(factors, base): sign}."""
    out: dict = {}
    if b1[0] == "v" and b2[0] == "v":
        a, b = b1[1], b2[1]
        if a == b:
            return out
        if a < b:
            out[((), ("x", a, b))] = 1
        else:
            out[((), ("x", b, a))] = -1
        return out
    if b1[0] == "x" and b2[0] == "v":
        a, b, c = b1[1], b1[2], b2[1]
        # (a x b) x c = b (a.c) - a (b.c)
        for vec_name, (p, q), s in ((b, (a, c), 1), (a, (b, c), -1)):
            f, mult = _dot_factor(p, q)
            key = ((f,) if f else (), ("v", vec_name))
            out[key] = out.get(key, 0) + s * mult
        return out
    if b1[0] == "v" and b2[0] == "x":
        # a x (b x c) = -(b x c) x a
        return {k: -v for k, v in _cross_base(b2, b1).items()}
    # (a x b) x (c x d) = c ((a x b).d) - d ((a x b).c)
    a, b, c, d = b1[1], b1[2], b2[1], b2[2]
    for vec_name, third, s in ((c, d, 1), (d, c, -1)):
        f, sign = _triple(a, b, third)
        if f is None:
            continue
        key = ((f,), ("v", vec_name))
        out[key] = out.get(key, 0) + s * sign
    return out


def cross(u: Vec, v: Vec) -> Vec:
    acc: dict = {}
    for (f1, b1), c1 in u.terms:
        for (f2, b2), c2 in v.terms:
            for (f3, base), mult in _cross_base(b1, b2).items():
                mult = ScalarCoeff.coerce(mult)
                _add(acc, (_mul_factors(_mul_factors(f1, f2), f3), base), c1 * c2 * mult)
    return Vec.from_dict(acc)


def _dot_base(b1: tuple, b2: tuple) -> dict:
    """{factors: multiplier} for base . base."""
    if b1[0] == "v" and b2[0] == "v":
        f, mult = _dot_factor(b1[1], b2[1])
        return {((f,) if f else ()): mult}
    if b1[0] == "x" and b2[0] == "v":
        f, sign = _triple(b1[1], b1[2], b2[1])
        return {} if f is None else {(f,): ScalarCoeff.coerce(sign)}
    if b1[0] == "v" and b2[0] == "x":
        return _dot_base(b2, b1)
    # (a x b).(c x d) = (a.c)(b.d) - (a.d)(b.c)
    a, b, c, d = b1[1], b1[2], b2[1], b2[2]
    out: dict = {}
    for (p, q), (r, s), sgn in (((a, c), (b, d), 1), ((a, d), (b, c), -1)):
        f1, m1 = _dot_factor(p, q)
        f2, m2 = _dot_factor(r, s)
        key = tuple(sorted(x for x in (f1, f2) if x))
        out[key] = out.get(key, ScalarCoeff()) + m1 * m2 * sgn
    return out


def dot(u: Vec, v: Vec) -> Scal:
    acc: dict = {}
    for (f1, b1), c1 in u.terms:
        for (f2, b2), c2 in v.terms:
            for f3, mult in _dot_base(b1, b2).items():
                _add(acc, _mul_factors(_mul_factors(f1, f2), f3), c1 * c2 * ScalarCoeff.coerce(mult))
    return Scal.from_dict(acc)


def average_radial(v: Vec, position: str = "r") -> tuple[Vec, int]:
    """Drop every term (X.r) r: the mean of X.r vanishes by spherical symmetry.

    Returns the reduced vector and the number of terms dropped.
    """
    kept: dict = {}
    dropped = 0
    for (factors, base), c in v.terms:
        radial = base == ("v", position) and any(
            f[0] == "dot" and position in f[1:] and f[1] != f[2] for f in factors
        )
        if radial:
            dropped += 1
        else:
            _add(kept, (factors, base), c)
    return Vec.from_dict(kept), dropped


def isotropic_average(v: Vec, position: str = "r") -> tuple[Vec, int]:
    """Replace (X.r) r by (r^2/3) X, the angular mean <r_i r_j> = r^2 delta_ij/3."""
    acc: dict = {}
    n = 0
    for (factors, base), c in v.terms:
        hit = None
        if base == ("v", position):
            for f in factors:
                if f[0] == "dot" and position in f[1:] and f[1] != f[2]:
                    hit = f
                    break
        if hit is None:
            _add(acc, (factors, base), c)
            continue
        n += 1
        other = hit[1] if hit[2] == position else hit[2]
        rest = list(factors)
        rest.remove(hit)
        _add(acc, (tuple(rest), ("v", other)), c * sym(position, 2) * ScalarCoeff.coerce("1/3"))
    return Vec.from_dict(acc), n
