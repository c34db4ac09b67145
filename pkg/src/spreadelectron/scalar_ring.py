"""Exact coefficient ring.

Coefficients are finite sums of ``GaussianRational * Monomial`` where a
monomial is a product of integer powers of formal commuting symbols
(pi, e, m, ds, kappa, alpha, ...).  Everything is exact; floats only appear
in :meth:`ScalarCoeff.to_float`, which the numeric oracles use.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "GaussianRational",
    "Monomial",
    "ScalarCoeff",
    "SubstitutionError",
    "SYMBOLS",
    "register_symbol",
    "sym",
    "I",
    "ONE",
    "ZERO",
]


class SubstitutionError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {x!r}")


class GaussianRational:
    """``re + i*im`` with both parts exact :class:`~fractions.Fraction`."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise TypeError("only integer-valued complex literals convert exactly")
            return cls(int(x.real), int(x.imag))
        return cls(x)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ScalarCoeff):
            return other == self
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.im))
        return self._hash

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        im = "i" if mag == 1 else f"{mag}i"
        return f"({self.re}{sign}{im})"


# name -> display string.  The registry only governs what may appear in a
# monomial; extra symbols are added with register_symbol().
SYMBOLS: dict[str, str] = {
    "pi": "π",
    "e": "e",
    "m": "m",
    "ds": "δs",
    "kappa": "κ",
    "alpha": "α",
    "eps0": "ε₀",
    "dm": "δm",
    "r0": "r₀",
    "phi": "φ",
    "m_mu": "m_μ",
    "r": "r",
}


def register_symbol(name: str, display: str | None = None) -> str:
    if not name.replace("_", "").isalnum() or not name[0].isalpha():
        raise ValueError(f"bad symbol name {name!r}")
    SYMBOLS.setdefault(name, display or name)
    return name


class Monomial:
    """Product of symbols raised to nonzero integer powers.

    Stored as a sorted tuple of ``(name, exponent)`` so construction order
    never matters.
    """

    __slots__ = ("powers", "_hash")

    def __init__(self, powers: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = dict(powers).items() if not isinstance(powers, dict) else powers.items()
        clean = []
        for name, k in items:
            if name not in SYMBOLS:
                raise KeyError(f"unregistered symbol {name!r}")
            if int(k) != k:
                raise ValueError("exponents must be integers")
            if k:
                clean.append((name, int(k)))
        self.powers = tuple(sorted(clean))
        self._hash = hash(self.powers)

    @classmethod
    def one(cls) -> "Monomial":
        return _ONE_MONO

    def degree(self, name: str) -> int:
        for n, k in self.powers:
            if n == name:
                return k
        return 0

    def symbols(self) -> set[str]:
        return {n for n, _ in self.powers}

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.powers)
        for n, k in other.powers:
            d[n] = d.get(n, 0) + k
        return Monomial(d)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial({s: k * n for s, k in self.powers})

    def inverse(self) -> "Monomial":
        return self ** -1

    def without(self, name: str) -> "Monomial":
        return Monomial({n: k for n, k in self.powers if n != name})

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.powers == other.powers

    def __lt__(self, other):
        return self.powers < other.powers

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.powers)

    def __repr__(self):
        return f"Monomial({dict(self.powers)!r})"

    def __str__(self):
        if not self.powers:
            return "1"
        parts = []
        for n, k in self.powers:
            parts.append(SYMBOLS[n] if k == 1 else f"{SYMBOLS[n]}^{k}")
        return "·".join(parts)

    def ascii(self) -> str:
        return "*".join(n if k == 1 else f"{n}^{k}" for n, k in self.powers)


_ONE_MONO = Monomial()

Number = Union[int, Fraction, GaussianRational, complex]


class ScalarCoeff:
    """Sum of ``GaussianRational * Monomial`` parts, at most one per monomial."""

    __slots__ = ("parts", "_hash")

    def __init__(self, parts: Mapping[Monomial, GaussianRational] | None = None):
        clean: dict[Monomial, GaussianRational] = {}
        if parts:
            for mono, c in parts.items():
                c = GaussianRational.coerce(c)
                if not c.is_zero():
                    clean[mono] = c
        self.parts = clean
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "ScalarCoeff":
        if isinstance(x, ScalarCoeff):
            return x
        if isinstance(x, Monomial):
            return cls({x: GaussianRational(1)})
        return cls({_ONE_MONO: GaussianRational.coerce(x)})

    @classmethod
    def term(cls, c, **powers: int) -> "ScalarCoeff":
        return cls({Monomial(powers): GaussianRational.coerce(c)})

    def is_zero(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def is_monomial(self) -> bool:
        return len(self.parts) == 1

    def is_constant(self) -> bool:
        return not self.parts or (len(self.parts) == 1 and _ONE_MONO in self.parts)

    def constant(self) -> GaussianRational:
        """The value of an exactly-constant coefficient."""
        if not self.parts:
            return GaussianRational(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.parts[_ONE_MONO]

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for mono in self.parts:
            out |= mono.symbols()
        return out

    def degrees(self, name: str) -> set[int]:
        return {mono.degree(name) for mono in self.parts}

    def grade(self, name: str, k: int) -> "ScalarCoeff":
        return ScalarCoeff({mo: c for mo, c in self.parts.items() if mo.degree(name) == k})

    def __add__(self, other):
        try:
            o = ScalarCoeff.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.parts)
        for mono, c in o.parts.items():
            out[mono] = out[mono] + c if mono in out else c
        return ScalarCoeff(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarCoeff({mo: -c for mo, c in self.parts.items()})

    def __sub__(self, other):
        try:
            o = ScalarCoeff.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = ScalarCoeff.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self.parts.items():
            for m2, c2 in o.parts.items():
                mono = m1 * m2
                c = c1 * c2
                out[mono] = out[mono] + c if mono in out else c
        return ScalarCoeff(out)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarCoeff":
        if len(self.parts) != 1:
            raise ZeroDivisionError(f"only single-monomial coefficients are invertible: {self}")
        ((mono, c),) = self.parts.items()
        return ScalarCoeff({mono.inverse(): c.inverse()})

    def __truediv__(self, other):
        try:
            o = ScalarCoeff.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return ScalarCoeff.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ScalarCoeff.coerce(1)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self, real_symbols: bool = True) -> "ScalarCoeff":
        """Complex conjugate, treating every formal symbol as real."""
        if not real_symbols:
            raise NotImplementedError
        return ScalarCoeff({mo: c.conjugate() for mo, c in self.parts.items()})

    def __eq__(self, other):
        try:
            o = ScalarCoeff.coerce(other)
        except TypeError:
            return NotImplemented
        return self.parts == o.parts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.parts.items()))
        return self._hash

    def sorted_parts(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self.parts.items(), key=lambda kv: kv[0].powers)

    # -- substitution -----------------------------------------------------

    def substitute(self, bindings: Mapping, max_rounds: int = 32) -> "ScalarCoeff":
        """Eliminate bound symbols, repeating until none remain.

        Keys are symbol names or ``(name, power)`` pairs; a pair binds that
        power of the symbol, so ``("e", 2)`` rewrites ``e^4 -> (value)^2`` and
        leaves odd leftovers as a single ``e``.  Bindings that keep
        reintroducing each other raise :class:`SubstitutionError` after
        ``max_rounds`` passes.
        """
        if not bindings:
            return self
        norm: dict[str, tuple[int, ScalarCoeff]] = {}
        for key, value in bindings.items():
            name, power = (key, 1) if isinstance(key, str) else key
            if power < 1:
                raise ValueError("binding powers must be positive")
            norm[name] = (power, ScalarCoeff.coerce(value))
        cur = self
        for _ in range(max_rounds):
            if not (cur.symbols() & norm.keys()):
                return cur
            cur = cur._substitute_once(norm)
        if cur.symbols() & norm.keys():
            left = sorted(cur.symbols() & norm.keys())
            raise SubstitutionError(f"bindings did not terminate (cyclic?): {left}")
        return cur

    def _substitute_once(self, norm) -> "ScalarCoeff":
        out = ScalarCoeff()
        for mono, c in self.parts.items():
            acc = ScalarCoeff({Monomial(): c})
            rest = {}
            for name, k in mono.powers:
                if name in norm:
                    power, value = norm[name]
                    q, r = divmod(abs(k), power)
                    q = q if k > 0 else -q
                    r = r if k > 0 else -r
                    if q:
                        acc = acc * value**q
                    if r:
                        rest[name] = r
                else:
                    rest[name] = k
            out = out + acc * ScalarCoeff({Monomial(rest): 1})
        return out

    def to_float(self, numeric_bindings: Mapping[str, complex] | None = None) -> complex:
        """IEEE-double evaluation.  Approximate; numeric oracles only.

        ``pi`` is bound to math.pi unless the caller overrides it.
        """
        numeric_bindings = {"pi": math.pi, **(numeric_bindings or {})}
        total = 0j
        for mono, c in self.sorted_parts():
            v = complex(c)
            for name, k in mono.powers:
                if name not in numeric_bindings:
                    raise KeyError(f"unbound symbol {name!r} in {self}")
                v *= complex(numeric_bindings[name]) ** k
            total += v
        return total

    # -- display ----------------------------------------------------------

    def __repr__(self):
        return f"ScalarCoeff({self})"

    def __str__(self):
        if not self.parts:
            return "0"
        out = []
        for mono, c in self.sorted_parts():
            cs = str(c)
            if not mono:
                out.append(cs)
            elif c == 1:
                out.append(str(mono))
            elif c == -1:
                out.append("-" + str(mono))
            else:
                out.append(f"{cs}·{mono}")
        return " + ".join(out).replace("+ -", "- ")


def sym(name: str, power: int = 1) -> ScalarCoeff:
    return ScalarCoeff({Monomial({name: power}): 1})


I = ScalarCoeff.coerce(GaussianRational(0, 1))
ONE = ScalarCoeff.coerce(1)
ZERO = ScalarCoeff()
