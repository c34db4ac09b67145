"""Foldy-Wouthuysen reduction and the V_1 alteration of the FW Hamiltonian.

The FW Hamiltonian is the closed-form composite through 1/m^2,

    H_FW = beta m + eps + (1/2m) beta o^2 - (1/8m^2) [o, [o, eps]],

for H = beta m + eps + o with eps even and o odd.  Pauli reduction is
automatic in the blade normal form: alpha_i alpha_j multiplies out to
delta_ij + i eps_ijk sigma_k.

``v1_residual`` feeds the even/odd parts of -beta V_1 through the first-order
variation of that composite and applies the physical assumptions one at a
time, each recorded in an :class:`Audit`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, fields
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .gamma_algebra import ConsistencyError, levi_civita, to_complex
from .operator_calculus import (
    Audit,
    FieldAtom,
    NO_RULES,
    OpExpr,
    RewriteRuleSet,
    TermKey,
    commutator,
    field,
    normalize,
    pretty,
)
from .operator_calculus import threeplusone as t
from .operator_calculus.clifford import blade_matrix, is_even
from .scalar_ring import I, ScalarCoeff, sym

__all__ = [
    "AssumptionSet",
    "Hamiltonian",
    "AssumptionError",
    "IsolationError",
    "V1Alteration",
    "split_even_odd",
    "dirac_hamiltonian",
    "fw_transform",
    "pauli_reduce",
    "fw_baseline_reference",
    "magnetic_coefficient",
    "apply_nonrelativistic",
    "apply_commuting_phi",
    "v1_alteration",
    "v1_residual",
    "v1_residual_reference",
    "curl_E_term",
    "kinetic_variation_reference",
    "double_commutator_reference",
    "assembled_reference",
    "drop_field",
]

HALF = ScalarCoeff.coerce(Fraction(1, 2))


class AssumptionError(ValueError):
    pass


class IsolationError(ValueError):
    """The nonrelativistic factor could not be isolated on the right."""


@dataclass(frozen=True)
class AssumptionSet:
    """Physical assumptions used to simplify the V_1 alteration.

    static          time derivatives of fields vanish
    lorenz_gauge    d^mu A_mu = 0 (with static fields: div A = 0)
    curl_free_E     curl E = 0
    nonrelativistic (i d_t - e phi) -> beta m on the rightmost factor
    commuting_phi   div E + E.grad -> 0, from d phi/dt = i[H_FW, phi] = 0
    weak_field      drop terms with three or more field atoms
    """

    static: bool = True
    lorenz_gauge: bool = True
    curl_free_E: bool = True
    nonrelativistic: bool = True
    commuting_phi: bool = True
    weak_field: bool = False

    def with_(self, **kw) -> "AssumptionSet":
        return AssumptionSet(**{**{f.name: getattr(self, f.name) for f in fields(self)}, **kw})

    def enabled(self) -> list[str]:
        return [f.name for f in fields(self) if getattr(self, f.name)]

    def rules(self) -> RewriteRuleSet:
        return RewriteRuleSet(
            static=self.static,
            lorenz=self.lorenz_gauge,
            curl_free_E=self.curl_free_E,
            grad_phi_as_E=self.static,
            weak_field=3 if self.weak_field else None,
        )


# -- Hamiltonians ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _block_parity(blade: int) -> str:
    """'even' if the blade matrix is block diagonal, 'odd' if block off-diagonal."""
    m = to_complex(blade_matrix(blade))
    diag = np.abs(m[:2, 2:]).sum() + np.abs(m[2:, :2]).sum() == 0
    off = np.abs(m[:2, :2]).sum() + np.abs(m[2:, 2:]).sum() == 0
    if diag and not off:
        return "even"
    if off and not diag:
        return "odd"
    return "mixed"


def split_even_odd(h: OpExpr) -> tuple[OpExpr, OpExpr]:
    """(even, odd) parts by the block structure of each blade in the Dirac basis."""
    even, odd = {}, {}
    for k, c in h.terms.items():
        parity = _block_parity(k.blade)
        if parity == "mixed" or (parity == "even") != is_even(k.blade):
            raise ConsistencyError(f"blade {k.blade:04b} is neither even nor odd")
        (even if parity == "even" else odd)[k] = c
    return OpExpr(even), OpExpr(odd)


@dataclass(frozen=True)
class Hamiltonian:
    """H = beta m + eps + o."""

    even: OpExpr
    odd: OpExpr
    mass: ScalarCoeff = dc_field(default_factory=lambda: sym("m"))

    def __post_init__(self):
        e_even, e_odd = split_even_odd(self.even)
        o_even, o_odd = split_even_odd(self.odd)
        if e_odd or o_even:
            raise ConsistencyError("even part has odd terms or odd part has even terms")

    @property
    def mass_term(self) -> OpExpr:
        return t.beta() * self.mass

    @property
    def expr(self) -> OpExpr:
        return self.mass_term + self.even + self.odd

    @classmethod
    def from_expr(cls, h: OpExpr, mass=None) -> "Hamiltonian":
        mass = sym("m") if mass is None else ScalarCoeff.coerce(mass)
        even, odd = split_even_odd(h - t.beta() * mass)
        return cls(even, odd, mass)


def dirac_hamiltonian(charge=None) -> Hamiltonian:
    """alpha.(p - eA) + beta m + e phi."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    return Hamiltonian(t.phi() * e, t.alpha_dot(t.vec(lambda k: t.pi_kin(k, e))))


def fw_transform(h: Hamiltonian, order: int = 2, rules: RewriteRuleSet = NO_RULES) -> OpExpr:
    """beta m + eps + (1/2m) beta o^2 - (1/8m^2) [o, [o, eps]]."""
    if order != 2:
        raise ValueError("only the 1/m^2 composite is implemented (order=2)")
    m_inv = h.mass.inverse()
    o, eps = h.odd, h.even
    out = (
        h.mass_term
        + eps
        + t.beta() * (o * o) * (m_inv * HALF)
        - commutator(o, commutator(o, eps)) * (m_inv ** 2 * ScalarCoeff.coerce(Fraction(1, 8)))
    )
    return normalize(out, rules)


def pauli_reduce(hfw: OpExpr, rules: RewriteRuleSet = NO_RULES) -> OpExpr:
    """Normal form of an FW Hamiltonian, checked to be block diagonal.

    alpha-pair products are already reduced to 1 and sigma blades by the
    Clifford product, so this is normalization plus the evenness check.
    """
    out = normalize(hfw, rules)
    _, odd = split_even_odd(out)
    if odd:
        raise ConsistencyError(f"FW Hamiltonian still has odd terms: {pretty(odd, True)}")
    return out


def fw_baseline_reference(charge=None) -> OpExpr:
    """(1/2m) beta pi^2 + e phi + beta m - (e/2m) beta sigma.B - (e/4m^2) sigma.(E x pi) + (e/8m^2) lap phi

    with B = curl A and E = -grad phi.
    """
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    m = sym("m")
    pi = t.vec(lambda k: t.pi_kin(k, e))
    pi2 = t.dot(pi, pi)
    Bv = t.vec(t.B_potential)
    Ev = t.vec(t.E_static)
    return (
        t.beta() * pi2 * (m ** -1 * HALF)
        + t.phi() * e
        + t.beta() * m
        - t.beta() * t.sigma_dot(Bv) * (e * m ** -1 * HALF)
        - t.sigma_dot(t.cross(Ev, pi)) * (e * m ** -2 * ScalarCoeff.coerce(Fraction(1, 4)))
        + t.laplacian() * (e * m ** -2 * ScalarCoeff.coerce(Fraction(1, 8)))
    )


def magnetic_coefficient(h: OpExpr, k: int = 3) -> ScalarCoeff:
    """Coefficient c in h = c beta sigma.B + ..., read off from one component.

    B_k = -(d_i A_j - d_j A_i) for cyclic (i, j, k); the beta sigma_k d_i A_j
    term therefore carries -c.
    """
    i, j = {1: (2, 3), 2: (3, 1), 3: (1, 2)}[k]
    probe = t.beta() * t.sigma(k) * field("A", j, (i,))
    (key, unit), = probe.terms.items()
    c = h.terms.get(key, ScalarCoeff())
    return -(c * unit.inverse())


# -- assumption rules that act on whole expressions -----------------------------------


def _strip_time(key: TermKey) -> TermKey:
    ds = list(key.derivs)
    ds.remove(0)
    return TermKey(key.blade, key.fields, tuple(ds))


def apply_nonrelativistic(
    e: OpExpr, rules: RewriteRuleSet, audit: Audit | None = None, charge=None, mass=None
) -> OpExpr:
    """Replace the right factor {beta/m (i d_t - e phi)} by {beta/m (beta m)} = 1.

    ``e`` is split exactly as Q {beta/m (i d_t - e phi)} + R with R free of
    d_t: Q is read off the d_t terms, the product is recomputed and
    subtracted.  The factor counts as isolated only if d_t occurs once and
    rightmost in every term and no field carries a time derivative.
    """
    charge = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    m = sym("m") if mass is None else ScalarCoeff.coerce(mass)
    if not rules.static:
        raise IsolationError("the nonrelativistic factor needs static fields to commute past d_t")
    q_terms = {}
    for k, c in e.terms.items():
        if any(0 in f.derivs for f in k.fields):
            raise IsolationError(f"time derivative on a field atom in {pretty(OpExpr({k: c}), True)}")
        n_t = k.derivs.count(0)
        if n_t > 1:
            raise IsolationError(f"d_t appears {n_t} times in {pretty(OpExpr({k: c}), True)}")
        if n_t == 1:
            q_terms[_strip_time(k)] = c
    if not q_terms:
        return e
    # Q beta (i/m) d_t = T  =>  Q = T' (m/i) beta
    Q = normalize(OpExpr(q_terms) * t.beta() * (m * I.inverse()), rules)
    factor = t.beta() * (t.dt() * I - t.phi() * charge) * m.inverse()
    rest = normalize(e - Q * factor, rules)
    if rest.has_derivatives() and any(0 in k.derivs for k in rest.terms):
        raise IsolationError("d_t survives after factoring")
    if audit is not None:
        audit.note(
            "nonrelativistic",
            f"{{beta/m (i d_t - e phi)}} -> 1 on a {len(Q)}-term left factor",
            len(Q),
        )
    return normalize(Q + rest, rules)


def _div_E_operator() -> OpExpr:
    """The operator div E + E.grad = (div E) + 2 E.grad."""
    out = OpExpr()
    for k in (1, 2, 3):
        out = out + t.grad(k) * t.E(k) + t.E(k) * t.grad(k)
    return out


def apply_commuting_phi(e: OpExpr, audit: Audit | None = None) -> OpExpr:
    """Remove c (div E + E.grad) from ``e``; other terms are left untouched.

    The multiple c is read from the E_1 d_1 term; the pattern must then be
    present in full, otherwise the expression does not contain the operator
    and nothing is removed.
    """
    pattern = _div_E_operator()
    probe = TermKey(0, (FieldAtom("E", 1),), (1,))
    if probe not in e.terms:
        return e
    c = e.terms[probe] * pattern.terms[probe].inverse()
    scaled = pattern * c
    if any(e.terms.get(k) != v for k, v in scaled.terms.items()):
        return e
    out = e - scaled
    if audit is not None:
        audit.note("commuting_phi", f"removed {len(scaled)} terms of ({c})(div E + E.grad)", len(scaled))
    return out


def drop_field(e: OpExpr, name: str) -> OpExpr:
    """Set every component of field ``name`` (and its derivatives) to zero."""
    return e.filter(lambda k, c: all(f.name != name for f in k.fields))


# -- the V_1 alteration ---------------------------------------------------------------


@dataclass
class V1Alteration:
    assumptions: AssumptionSet
    delta_eps: OpExpr
    delta_o: OpExpr
    kinetic: OpExpr  # delta {(1/2m) beta o^2}
    double_commutator: OpExpr  # -(1/8m^2){[do,[o,eps]] + [o,[do,eps]] + [o,[o,deps]]}
    double_commutator_kept: OpExpr
    assembled: OpExpr  # delta eps + kinetic + kept
    residual: OpExpr
    audit: Audit


def _kappa_e(charge):
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    return sym("kappa"), e, sym("m")


def curl_E_term(charge=None) -> OpExpr:
    """+kappa (e/4m^2) i sigma.(curl E), E as field atoms."""
    kap, e, m = _kappa_e(charge)
    curl = []
    for k in (1, 2, 3):
        c = OpExpr()
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                s = levi_civita(k, i, j)
                if s:
                    c = c + t.E(j, (i,)) * s
        curl.append(c)
    return t.sigma_dot(curl) * (I * kap * e * m ** -2 * ScalarCoeff.coerce(Fraction(1, 4)))


def _nr_factor(charge) -> OpExpr:
    kap, e, m = _kappa_e(charge)
    return t.beta() * (t.dt() * I - t.phi() * e) * m ** -1


def kinetic_variation_reference(charge=None) -> OpExpr:
    """The alteration of (1/2m) beta o^2, E and B as field atoms, E static:

    kappa(e/4m^2) i sigma.(curl E) + kappa(e/4m^2)(div E + E.grad)
    - kappa(e/2m) beta sigma.(B - 2 A x grad){beta/m (i d_t - e phi)}
    - kappa(e^2/2m^2) sigma.(A x E)
    """
    kap, e, m = _kappa_e(charge)
    Av = t.vec(t.A_vec)
    Ev = t.vec(t.E)
    Bv = t.vec(t.B_potential)
    AxN = t.cross(Av, t.vec(t.grad))
    quarter = ScalarCoeff.coerce(Fraction(1, 4))
    return (
        curl_E_term(charge)
        + _div_E_operator() * (kap * e * m ** -2 * quarter)
        - t.beta() * t.sigma_dot(tuple(Bv[k] - AxN[k] * 2 for k in range(3))) * _nr_factor(charge) * (kap * e * m ** -1 * HALF)
        - t.sigma_dot(t.cross(Av, Ev)) * (kap * e ** 2 * m ** -2 * HALF)
    )


def double_commutator_reference(charge=None) -> OpExpr:
    """-kappa(e^2/4m^2) i A.E {beta/m (i d_t - e phi)}."""
    kap, e, m = _kappa_e(charge)
    AdotE = t.dot(t.vec(t.A_vec), t.vec(t.E))
    return AdotE * _nr_factor(charge) * (-kap * e ** 2 * I * m ** -2 * ScalarCoeff.coerce(Fraction(1, 4)))


def v1_residual_reference(charge=None) -> OpExpr:
    """-kappa(e^2/2m^2) sigma.(A x E) - kappa(e^2/4m^2) i A.E."""
    kap, e, m = _kappa_e(charge)
    Av, Ev = t.vec(t.A_vec), t.vec(t.E)
    return -t.sigma_dot(t.cross(Av, Ev)) * (kap * e ** 2 * m ** -2 * HALF) - t.dot(Av, Ev) * (
        kap * e ** 2 * I * m ** -2 * ScalarCoeff.coerce(Fraction(1, 4))
    )


def assembled_reference(assumptions: AssumptionSet = AssumptionSet(), charge=None) -> OpExpr:
    """delta eps + delta{(1/2m) beta o^2} + kept double-commutator part, before the
    nonrelativistic and commuting-phi rules."""
    from .dirac_derivation import three_plus_one_reference

    _, d_eps, _ = three_plus_one_reference(charge)
    total = d_eps + kinetic_variation_reference(charge) + double_commutator_reference(charge)
    return normalize(total, assumptions.rules())


_REQUIRED = ("static", "lorenz_gauge", "nonrelativistic", "commuting_phi")


def v1_alteration(assumptions: AssumptionSet = AssumptionSet(), charge=None) -> V1Alteration:
    """Every intermediate of the V_1 alteration of H_FW."""
    from .dirac_derivation import derive_wave_equation, in_kappa

    for name in _REQUIRED:
        if not getattr(assumptions, name):
            raise AssumptionError(f"v1_residual requires the '{name}' assumption")
    rules = assumptions.rules()
    audit = Audit()
    kap, e, m = _kappa_e(charge)

    v1 = in_kappa(derive_wave_equation(1, charge=charge).V(1))
    d_even, d_odd = split_even_odd(-(t.beta() * v1))
    d_eps = normalize(d_even, rules, audit)
    d_o = normalize(d_odd, rules, audit)

    h = dirac_hamiltonian(charge)
    o, eps = h.odd, h.even
    kinetic = normalize(t.beta() * (o * d_o + d_o * o) * (m ** -1 * HALF), rules, audit)
    dc = (
        commutator(d_o, commutator(o, eps))
        + commutator(o, commutator(d_o, eps))
        + commutator(o, commutator(o, d_eps))
    )
    dc = normalize(dc * (-(m ** -2) * ScalarCoeff.coerce(Fraction(1, 8))), rules, audit)
    # keep the terms in which no field atom is differentiated (E counts as a field)
    kept = dc.filter(lambda k, c: all(not f.derivs for f in k.fields))
    dropped = len(dc) - len(kept)
    if dropped:
        audit.note(
            "double_commutator_gradients",
            f"dropped {dropped} terms with differentiated field atoms from the double-commutator variation",
            dropped,
        )
    assembled = normalize(d_eps + kinetic + kept, rules, audit)

    residual = apply_nonrelativistic(assembled, rules, audit, charge=charge)
    residual = apply_commuting_phi(residual, audit)
    return V1Alteration(assumptions, d_eps, d_o, kinetic, dc, kept, assembled, residual, audit)


def v1_residual(assumptions: AssumptionSet = AssumptionSet(), charge=None) -> OpExpr:
    """The alteration of H_FW due to V_1 under ``assumptions``."""
    return v1_alteration(assumptions, charge).residual
