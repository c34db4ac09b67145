"""From the difference equation to a Dirac-type wave equation.

Numeric side: pseudo-unitarity of U = exp(i ds M), the hermiticity condition
on gamma^0 M, the spectral form of the quantization condition and a
finite-difference check of the chain rule d/ds = gamma^mu d_mu.

Symbolic side: the Campbell-Hausdorff/conjugation pipeline that turns
exp(X) exp(Y) Psi = Psi into (i gamma.d - e gamma.A - m + V_1 + V_2 + ...) Psi = 0,
and the rewriting of V_1 into field-strength (Pauli) form.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .gamma_algebra import ConsistencyError, dirac
from .operator_calculus import (
    DELTA_S,
    Audit,
    OpExpr,
    RewriteRuleSet,
    cbh_expand,
    commutator,
    conjugate_expand,
    deriv,
    field,
    gamma,
    grade_filter,
    normalize,
    pretty,
)
from .operator_calculus import threeplusone as t
from .scalar_ring import I, ScalarCoeff, sym

__all__ = [
    "EvolutionMatrix",
    "WaveEquationResult",
    "PauliForm",
    "HermiticityResult",
    "QuantizationEntry",
    "QuantizationReport",
    "IllConditionedError",
    "check_pseudo_unitarity",
    "hermiticity_condition",
    "quantization_kernel_check",
    "derive_wave_equation",
    "v1_reference",
    "v2_reference",
    "v1_to_pauli_form",
    "in_kappa",
    "chain_rule_error",
    "slash_d",
    "slash_A",
]

HALF = ScalarCoeff.coerce(Fraction(1, 2))


def _numeric(M) -> np.ndarray:
    if isinstance(M, OpExpr):
        from .gamma_algebra import to_complex

        return to_complex(M.to_matrix())
    return np.asarray(M, dtype=complex)


# -- pseudo-unitarity and hermiticity ------------------------------------------


@dataclass
class EvolutionMatrix:
    """U = exp(i ds M) for a numeric generator M."""

    M: np.ndarray
    delta_s: float
    U: np.ndarray = dc_field(init=False)

    def __post_init__(self):
        self.M = _numeric(self.M)
        self.U = expm(1j * self.delta_s * self.M)

    def pseudo_unitarity_residual(self) -> float:
        g0 = dirac().numeric().beta
        return float(np.linalg.norm(g0 @ self.U.conj().T @ g0 @ self.U - np.eye(4)))


def check_pseudo_unitarity(M, delta_s: float) -> float:
    """Frobenius norm of gamma^0 U^dagger gamma^0 U - 1 for U = exp(i ds M)."""
    return EvolutionMatrix(M, delta_s).pseudo_unitarity_residual()


@dataclass
class HermiticityResult:
    holds: bool
    # (row, col, entry of gamma^0 M, conjugate of the transposed entry)
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def hermiticity_condition(M: OpExpr) -> HermiticityResult:
    """Whether gamma^0 M is hermitian, exactly.

    Field atoms and formal symbols count as real.  On failure the witness is
    the first matrix entry (i, j) with (gamma^0 M)_ij != conj((gamma^0 M)_ji);
    field atoms are set to 1 to locate it.
    """
    M = OpExpr.coerce(M)
    if M.has_derivatives():
        raise ValueError("hermiticity_condition needs a derivative-free (matrix-valued) M")
    g0M = gamma(0) * M
    diff = g0M.dagger() - g0M
    if diff.is_zero():
        return HermiticityResult(True)
    ones = {f: 1 for k in diff.terms for f in k.fields}
    mat = g0M.to_matrix(ones)
    for i in range(4):
        for j in range(4):
            a, b = mat[i, j], mat[j, i].conjugate()
            if a != b:
                return HermiticityResult(False, (i, j, a, b))
    # the mismatch cancels at unit field values; fall back to the blade
    k, c = diff.sorted_terms()[0]
    return HermiticityResult(False, (k.blade, None, c, None))


# -- quantization --------------------------------------------------------------


class IllConditionedError(ValueError):
    pass


@dataclass
class QuantizationEntry:
    eigenvalue: complex
    satisfies_2npi: bool
    n: int | None  # i*lambda = 2 pi n when flagged


@dataclass
class QuantizationReport:
    entries: list
    kernel_dim: int
    flagged: int
    kernel_matches: bool  # kernel of exp(Z) - 1 is the span of flagged eigenvectors

    def __iter__(self):
        return iter((e.eigenvalue, e.satisfies_2npi) for e in self.entries)


def quantization_kernel_check(Z, tol: float = 1e-8, max_cond: float = 1e8) -> QuantizationReport:
    """Classify eigenvalues of Z by exp(lambda) = 1 and compare with ker(exp(Z) - 1)."""
    Z = np.asarray(Z, dtype=complex)
    lam, V = np.linalg.eig(Z)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond >= max_cond:
        raise IllConditionedError(
            f"eigenvector matrix condition number {cond:.3g} >= {max_cond:.0e}; "
            "Z is (close to) defective, perturb it slightly and retry"
        )
    entries = []
    for x in lam:
        ok = abs(np.exp(x) - 1) <= tol
        n = int(round((1j * x).real / (2 * np.pi))) if ok else None
        entries.append(QuantizationEntry(complex(x), bool(ok), n))
    flagged_vecs = V[:, [e.satisfies_2npi for e in entries]]

    K = expm(Z) - np.eye(len(Z))
    s = np.linalg.svd(K, compute_uv=False)
    kernel_dim = int(np.sum(s <= tol * max(1.0, np.linalg.norm(Z))))
    flagged = flagged_vecs.shape[1]
    # every flagged eigenvector is annihilated and the dimensions agree
    annihilated = all(
        np.linalg.norm(K @ flagged_vecs[:, j]) <= tol * max(1.0, np.linalg.norm(flagged_vecs[:, j])) * 10
        for j in range(flagged)
    )
    rank = np.linalg.matrix_rank(flagged_vecs, tol=1e-10) if flagged else 0
    return QuantizationReport(entries, kernel_dim, flagged, annihilated and rank == kernel_dim == flagged)


# -- chain rule ----------------------------------------------------------------


def chain_rule_error(mu: int, x: float, h: float = 1e-5) -> float:
    """max |gamma^mu d_mu Psi - dPsi/ds| for Psi = exp(s), s = gamma_mu x^mu (no sum).

    Only one coordinate varies, so s commutes with d s/d x^mu = gamma_mu and
    the chain rule holds in the matrix model with d x^mu/ds = gamma_mu^{-1}.
    """
    rep = dirac().numeric()
    g_up = rep.gamma_upper[mu]
    g_lo = g_up * (1 if mu == 0 else -1)
    f = lambda xx: expm(g_lo * xx)
    d_mu = (f(x + h) - f(x - h)) / (2 * h)
    lhs = g_up @ d_mu
    rhs = f(x)  # d/ds exp(s) = exp(s)
    return float(np.max(np.abs(lhs - rhs)))


# -- the wave equation ---------------------------------------------------------


def slash_d() -> OpExpr:
    return t.slash([deriv(mu) for mu in range(4)])


def slash_A() -> OpExpr:
    return t.slash([field("A", mu) for mu in range(4)])


@dataclass
class WaveEquationResult:
    dirac_part: OpExpr
    v_series: list  # v_series[0] is V_1
    mass_term: ScalarCoeff
    audit: Audit

    def V(self, n: int) -> OpExpr:
        return self.v_series[n - 1]

    @property
    def full(self) -> OpExpr:
        out = self.dirac_part
        for v in self.v_series:
            out = out + v
        return out


def derive_wave_equation(order: int, n: int = 1, charge=None) -> WaveEquationResult:
    """Wave equation through V_order.

    X = ds gamma.d and Y = i ds e gamma.A are combined with the Campbell-Hausdorff
    series; the quantization branch phi = iZ - 2 n pi is conjugated by
    exp(i omega), omega = iY, divided by ds (a grade shift) and split by ds
    grade.  The grade -1 part, -2 n pi/ds, becomes the mass term with
    ds = 2 pi/m.  The V_n keep ds symbolic.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    ds = sym(DELTA_S)
    audit = Audit()
    X = slash_d() * ds
    Y = slash_A() * (I * ds * e)
    Z = cbh_expand(X, Y, order + 1, audit)
    phi = Z * I - OpExpr.coerce(2 * n) * sym("pi")
    W = conjugate_expand(phi, Y * I, order + 1, audit)
    W = W.map_coeffs(lambda c: c * ds ** -1)

    grades = W.degrees(DELTA_S)
    if not grades <= set(range(-1, order + 1)):
        raise ConsistencyError(f"unexpected ds grades {sorted(grades)}")
    mass_part = grade_filter(W, -1).substitute({DELTA_S: 2 * sym("pi") * sym("m") ** -1})
    mass_term = -mass_part.terms[(0, (), ())] if mass_part else ScalarCoeff()
    dirac_part = grade_filter(W, 0) + mass_part
    v_series = [grade_filter(W, k) for k in range(1, order + 1)]
    return WaveEquationResult(dirac_part, v_series, mass_term, audit)


def v1_reference(charge=None) -> OpExpr:
    """+(ds e/2) [gamma.d, gamma.A]."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    return commutator(slash_d(), slash_A()) * (sym(DELTA_S) * e * HALF)


def v2_reference(charge=None) -> OpExpr:
    """-(i ds^2 e/12) [[gamma.d, gamma.A], gamma^xi (i d_xi + e A_xi)]."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    xi = t.slash([deriv(mu) * I + field("A", mu) * e for mu in range(4)])
    c = sym(DELTA_S) ** 2 * e * I * ScalarCoeff.coerce(Fraction(-1, 12))
    return commutator(commutator(slash_d(), slash_A()), xi) * c


# -- Pauli form of V_1 ---------------------------------------------------------


def in_kappa(e: OpExpr) -> OpExpr:
    """Rewrite ds in terms of kappa = -i ds m, i.e. ds = i kappa/m."""
    return e.substitute({DELTA_S: I * sym("kappa") * sym("m") ** -1})


def sigma_munu(a: int, b: int) -> OpExpr:
    return commutator(gamma(a), gamma(b)) * (I * HALF)


def field_strength(a: int, b: int) -> OpExpr:
    """F_ab = d_a A_b - d_b A_a."""
    return field("A", b, (a,)) - field("A", a, (b,))


@dataclass
class PauliForm:
    covariant: OpExpr  # kappa(e/4m){sigma F - 2 sigma (A d - A d)}
    pauli_term: OpExpr  # kappa(e/4m) sigma^{mu nu} F_{mu nu}
    three_plus_one: OpExpr  # -kappa(e/2m){(sigma.B - i alpha.E) - 2{sigma.(A x grad) - i alpha.(phi grad + A d_t)}}
    gauge_remainder: OpExpr  # v1 - covariant with no rules: the d^mu A_mu piece
    delta_eps: OpExpr  # even part of -beta V_1 in 3+1 form
    delta_o: OpExpr  # odd part
    rules: RewriteRuleSet


def pauli_reference(charge=None) -> tuple[OpExpr, OpExpr]:
    """(full covariant form, field-strength part), in kappa."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    P, Q = OpExpr(), OpExpr()
    for a in range(4):
        for b in range(4):
            if a == b:
                continue
            s = sigma_munu(a, b)
            P = P + s * field_strength(a, b)
            Q = Q + s * (field("A", a) * deriv(b) - field("A", b) * deriv(a))
    c = sym("kappa") * e * sym("m") ** -1 * ScalarCoeff.coerce(Fraction(1, 4))
    return (P - Q * 2) * c, P * c


def three_plus_one_reference(charge=None) -> tuple[OpExpr, OpExpr, OpExpr]:
    """(V_1 in 3+1 form, delta eps, delta o), fields E and B written in potentials."""
    e = sym("e") if charge is None else ScalarCoeff.coerce(charge)
    kap = sym("kappa")
    m = sym("m")
    Ev = t.vec(t.E_potential)
    Bv = t.vec(t.B_potential)
    Av = t.vec(t.A_vec)
    nab = t.vec(t.grad)
    AxN = t.cross(Av, nab)
    transport = tuple(t.phi() * nab[k] + Av[k] * t.dt() for k in range(3))
    inner = (t.sigma_dot(Bv) - t.alpha_dot(Ev) * I) - (
        t.sigma_dot(AxN) - t.alpha_dot(transport) * I
    ) * 2
    v1 = inner * (-kap * e * m ** -1 * HALF)
    d_eps = t.beta() * t.sigma_dot(tuple(Bv[k] - AxN[k] * 2 for k in range(3))) * (kap * e * m ** -1 * HALF)
    d_o = -(
        t.beta()
        * t.alpha_dot(tuple(Ev[k] - transport[k] * 2 for k in range(3)))
        * (kap * e * I * m ** -1 * HALF)
    )
    return v1, d_eps, d_o


def v1_to_pauli_form(v1: OpExpr, charge=None) -> PauliForm:
    """Field-strength and 3+1 forms of V_1, each checked equal to ``v1``.

    The commutator form differs from the field-strength form by a multiple of
    d^mu A_mu, so the equalities hold in Lorenz gauge; the remainder without
    the gauge condition is returned for inspection.
    """
    if v1.degrees(DELTA_S) != {1}:
        raise ValueError(f"expected an expression of exact ds grade 1, got grades {sorted(v1.degrees(DELTA_S))}")
    vk = in_kappa(v1)
    covariant, pauli_term = pauli_reference(charge)
    v31, d_eps, d_o = three_plus_one_reference(charge)
    rules = RewriteRuleSet(lorenz=True)
    for name, form in (("field-strength", covariant), ("3+1", v31)):
        diff = normalize(vk - form, rules)
        if not diff.is_zero():
            raise ConsistencyError(f"V_1 differs from its {name} form by {pretty(diff)}")
    dH = -(t.beta() * vk)
    for name, got, want in (("even", dH.even_part(), d_eps), ("odd", dH.odd_part(), d_o)):
        diff = normalize(got - want, rules)
        if not diff.is_zero():
            raise ConsistencyError(f"{name} part of -beta V_1 differs from its 3+1 form by {pretty(diff)}")
    return PauliForm(covariant, pauli_term, v31, vk - covariant, d_eps, d_o, rules)
