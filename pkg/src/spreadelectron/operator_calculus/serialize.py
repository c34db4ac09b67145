"""Text forms of :class:`OpExpr`.

``dumps``/``loads`` give the canonical, round-trippable form used in golden
trace files.  One term per line, lines sorted::

    <coeff> | g<blade digits> | <fields or -> | d<deriv digits>

coeff   parts joined by `` + ``; a part is ``[re,im]`` followed by
        ``*name`` or ``*name^k`` factors, e.g. ``[1/2,0]*ds*e``
blade   ``g`` then the gamma indices in increasing order (``g`` alone is I)
fields  space separated ``<Name><index>`` with optional ``'<deriv digits>``,
        e.g. ``A1'02`` is d_0 d_2 A_1
derivs  ``d`` then the derivative indices (``d`` alone: no operator)

``pretty`` is for people: unicode, optionally in 3+1 notation.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..scalar_ring import GaussianRational, Monomial, ScalarCoeff, SYMBOLS
from .clifford import bits, three_plus_one_name
from .expr import FieldAtom, OpExpr, TermKey

__all__ = ["dumps", "loads", "pretty", "ParseError"]


class ParseError(ValueError):
    pass


def _coeff_str(c: ScalarCoeff) -> str:
    parts = []
    for mono, g in c.sorted_parts():
        s = f"[{g.re},{g.im}]"
        for name, k in mono.powers:
            s += f"*{name}" if k == 1 else f"*{name}^{k}"
        parts.append(s)
    return " + ".join(parts)


def _field_str(f: FieldAtom) -> str:
    s = f"{f.name}{f.index}"
    if f.derivs:
        s += "'" + "".join(str(d) for d in f.derivs)
    return s


def _key_str(k: TermKey) -> str:
    blade = "g" + "".join(str(b) for b in bits(k.blade))
    fields = " ".join(_field_str(f) for f in k.fields) or "-"
    derivs = "d" + "".join(str(d) for d in k.derivs)
    return f"{blade} | {fields} | {derivs}"


def dumps(e: OpExpr) -> str:
    lines = sorted(f"{_coeff_str(c)} | {_key_str(k)}" for k, c in e.terms.items())
    return "\n".join(lines) + ("\n" if lines else "")


_PART = re.compile(r"^\[(-?\d+(?:/\d+)?),(-?\d+(?:/\d+)?)\]((?:\*[A-Za-z][A-Za-z0-9_]*(?:\^-?\d+)?)*)$")
_FACTOR = re.compile(r"\*([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?")
_FIELD = re.compile(r"^([A-Za-z]+)(\d)(?:'(\d+))?$")


def _parse_coeff(s: str) -> ScalarCoeff:
    out = ScalarCoeff()
    for part in s.split(" + "):
        m = _PART.match(part.strip())
        if not m:
            raise ParseError(f"bad coefficient part {part!r}")
        g = GaussianRational(Fraction(m.group(1)), Fraction(m.group(2)))
        powers: dict[str, int] = {}
        for name, k in _FACTOR.findall(m.group(3)):
            if name not in SYMBOLS:
                raise ParseError(f"unknown symbol {name!r}")
            powers[name] = powers.get(name, 0) + (int(k) if k else 1)
        out = out + ScalarCoeff({Monomial(powers): g})
    return out


def _parse_line(line: str) -> tuple[TermKey, ScalarCoeff]:
    chunks = line.split(" | ")
    if len(chunks) != 4:
        raise ParseError(f"expected 4 sections: {line!r}")
    coeff, blade_s, fields_s, derivs_s = chunks
    if not blade_s.startswith("g") or not derivs_s.startswith("d"):
        raise ParseError(f"bad blade/derivative section: {line!r}")
    blade = 0
    for ch in blade_s[1:]:
        blade |= 1 << int(ch)
    fields = []
    if fields_s != "-":
        for tok in fields_s.split(" "):
            m = _FIELD.match(tok)
            if not m:
                raise ParseError(f"bad field atom {tok!r}")
            ds = tuple(sorted(int(ch) for ch in (m.group(3) or "")))
            fields.append(FieldAtom(m.group(1), int(m.group(2)), ds))
    derivs = tuple(sorted(int(ch) for ch in derivs_s[1:]))
    return TermKey(blade, tuple(sorted(fields)), derivs), _parse_coeff(coeff)


def loads(text: str) -> OpExpr:
    items = [_parse_line(line) for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return OpExpr.from_terms(items)


# -- pretty printing ---------------------------------------------------------

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _pretty_field(f: FieldAtom, three_plus_one: bool) -> tuple[int, str]:
    sign = 1
    if three_plus_one and f.name == "A":
        if f.index == 0:
            base = "φ"
        else:
            base, sign = f"A{f.index}", -1
    elif f.name == "A":
        base = f"A{str(f.index).translate(_SUB)}"
    else:
        base = f"{f.name}{f.index}"
    if f.derivs:
        if three_plus_one:
            ds = "".join("∂t" if d == 0 else f"∂{d}" for d in f.derivs)
        else:
            ds = "".join(f"∂{str(d).translate(_SUB)}" for d in f.derivs)
        return sign, f"({ds}{base})"
    return sign, base


def pretty(e: OpExpr, three_plus_one: bool = False) -> str:
    if e.is_zero():
        return "0"
    pieces = []
    for k, c in e.sorted_terms():
        coef = c
        factors = []
        if three_plus_one:
            ph, label = three_plus_one_name(k.blade)
            coef = coef * ph
            if label != "I":
                factors.append(label)
        elif k.blade:
            factors.append("".join(f"γ{str(mu).translate(str.maketrans('0123', '⁰¹²³'))}" for mu in bits(k.blade)))
        for f in k.fields:
            sgn, s = _pretty_field(f, three_plus_one)
            if sgn < 0:
                coef = -coef
            factors.append(s)
        for d in k.derivs:
            factors.append("∂t" if (three_plus_one and d == 0) else f"∂{str(d).translate(_SUB)}")
        cs = str(coef)
        if len(coef.parts) > 1:
            cs = f"({cs})"
        body = "·".join(factors)
        if not body:
            pieces.append(cs)
        elif cs == "1":
            pieces.append(body)
        elif cs == "-1":
            pieces.append("-" + body)
        else:
            pieces.append(f"{cs}·{body}")
    return " + ".join(pieces).replace("+ -", "- ")
