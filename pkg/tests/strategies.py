"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from spreadelectron.operator_calculus import deriv, field, gamma
from spreadelectron.scalar_ring import GaussianRational, Monomial, ScalarCoeff

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussian = st.builds(GaussianRational, small_fraction, small_fraction)

_SYMS = ("pi", "e", "m", "kappa", "alpha")
monomial = st.dictionaries(st.sampled_from(_SYMS), st.integers(-2, 2), max_size=3).map(Monomial)
scalar = st.dictionaries(monomial, gaussian, max_size=3).map(ScalarCoeff)


def _atom(kind):
    kind, i, j = kind
    if kind == "g":
        return gamma(i)
    if kind == "d":
        return deriv(i)
    return field("A", i) if j < 0 else field("A", i, (j,))


atom = st.tuples(st.sampled_from("gdf"), st.integers(0, 3), st.integers(-1, 3)).map(_atom)
matrix_atom = st.integers(0, 3).map(gamma) | st.tuples(st.integers(0, 3), st.integers(0, 3)).map(
    lambda p: field("A", p[0]) if p[1] == 0 else field("E", p[1])
)


@st.composite
def word(draw, atoms=atom, max_len=3):
    n = draw(st.integers(1, max_len))
    out = None
    for _ in range(n):
        a = draw(atoms)
        out = a if out is None else out * a
    c = draw(st.sampled_from([1, -1, 2, Fraction(1, 2)]))
    return out * c


@st.composite
def expr(draw, atoms=atom, max_terms=3, max_len=3):
    n = draw(st.integers(1, max_terms))
    out = draw(word(atoms, max_len))
    for _ in range(n - 1):
        out = out + draw(word(atoms, max_len))
    return out


rational = st.fractions(min_value=-20, max_value=20, max_denominator=12)
rational_vector = st.lists(rational, min_size=3, max_size=3)
