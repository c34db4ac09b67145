import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spreadelectron.dirac_derivation import (
    IllConditionedError,
    check_pseudo_unitarity,
    chain_rule_error,
    derive_wave_equation,
    hermiticity_condition,
    in_kappa,
    pauli_reference,
    quantization_kernel_check,
    slash_A,
    slash_d,
    v1_reference,
    v1_to_pauli_form,
    v2_reference,
)
from spreadelectron.gamma_algebra import density, dirac
from spreadelectron.operator_calculus import OpExpr, RewriteRuleSet, commutator, deriv, gamma, normalize
from spreadelectron.operator_calculus import threeplusone as t
from spreadelectron.scalar_ring import I, ScalarCoeff, sym

NUM = dirac().numeric()
rng = np.random.default_rng(2024)


def numeric_M(A, e=1.0):
    """-e gamma^mu A_mu for real lower-index components."""
    return -e * sum(NUM.gamma_upper[mu] * A[mu] for mu in range(4))


# -- pseudo-unitarity, conservation, hermiticity ------------------------------------


def test_gauge_potential_generator_is_pseudo_unitary():
    for _ in range(20):
        assert check_pseudo_unitarity(numeric_M(rng.normal(size=4)), 1.0) <= 1e-10


def test_large_generators_are_pseudo_unitary_to_rounding():
    # for spacelike A the eigenvalues of M are imaginary and |U| grows like
    # exp(ds e |A|); the absolute residual then scales with |U|^2 * eps
    from scipy.linalg import expm

    for _ in range(20):
        A = rng.normal(size=4) * 3
        M = numeric_M(A, e=2.0)
        U = expm(2.5j * M)
        scale = np.linalg.norm(U) ** 2
        assert check_pseudo_unitarity(M, 2.5) <= 1e-13 * scale


def test_identity_generator_is_pseudo_unitary():
    assert check_pseudo_unitarity(np.eye(4), 1.0) <= 1e-10


def test_imaginary_identity_violates_pseudo_unitarity():
    res = check_pseudo_unitarity(1j * np.eye(4), 1.0)
    assert res > 0.1
    assert res == pytest.approx(2 * abs(np.exp(-2.0) - 1), rel=1e-12)


def test_symbolic_generator_accepted():
    M = gamma(0) * 2 - gamma(3) * ScalarCoeff.coerce("1/3")
    assert check_pseudo_unitarity(M, 0.7) <= 1e-10


@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4), st.integers(0, 2**31))
def test_density_is_conserved(A, seed):
    from scipy.linalg import expm

    r = np.random.default_rng(seed)
    U = expm(1j * 0.8 * numeric_M(np.array(A)))
    psi = r.normal(size=4) + 1j * r.normal(size=4)
    assert density(U @ psi) == pytest.approx(density(psi), abs=1e-10 * max(1.0, np.vdot(psi, psi).real))


def test_hermiticity_of_gauge_generator():
    assert hermiticity_condition(slash_A() * -sym("e")).holds


def test_hermiticity_fails_for_i_gamma_product():
    # gamma^0 (gamma^0 gamma^1 gamma^2 gamma^3) is hermitian; the i multiple is not
    M = gamma(0) * gamma(1) * gamma(2) * gamma(3) * I
    res = hermiticity_condition(M)
    assert not res.holds and res.witness is not None
    i, j, a, b = res.witness
    assert a != b


def test_hermiticity_of_plain_gamma5_product():
    assert hermiticity_condition(gamma(0) * gamma(1) * gamma(2) * gamma(3)).holds


def test_hermiticity_of_zero():
    assert hermiticity_condition(OpExpr()).holds


def test_hermiticity_needs_matrix_valued_input():
    with pytest.raises(ValueError):
        hermiticity_condition(slash_d())


# -- quantization --------------------------------------------------------------------


def test_quantization_diagonal_examples():
    rep = quantization_kernel_check(np.diag([-2j * np.pi, 0, 0, 0]))
    assert [ok for _, ok in rep] == [True] * 4
    assert sorted(e.n for e in rep.entries) == [0, 0, 0, 1]
    rep = quantization_kernel_check(np.diag([-1j * np.pi, 0, 0, 0]))
    flags = {round(lam.imag, 6): ok for lam, ok in rep}
    assert flags[round(-np.pi, 6)] is False
    assert rep.flagged == 3 and rep.kernel_dim == 3 and rep.kernel_matches


def _planted(r):
    n_flag = r.integers(0, 5)
    lam = list(2j * np.pi * r.integers(-3, 4, size=n_flag))
    while len(lam) < 4:
        # keep unflagged eigenvalues well away from 2 pi i Z
        lam.append(complex(r.uniform(0.2, 1.5) * r.choice([-1, 1]), r.uniform(-3, 3)))
    S = r.normal(size=(4, 4)) + 1j * r.normal(size=(4, 4))
    return S @ np.diag(lam) @ np.linalg.inv(S), n_flag


def test_quantization_on_planted_instances():
    r = np.random.default_rng(99)
    for _ in range(50):
        Z, n_flag = _planted(r)
        rep = quantization_kernel_check(Z)
        assert rep.flagged == n_flag
        assert rep.kernel_dim == n_flag
        assert rep.kernel_matches


def test_quantization_full_kernel():
    S = rng.normal(size=(4, 4))
    Z = S @ np.diag(2j * np.pi * np.array([1, -1, 2, 0])) @ np.linalg.inv(S)
    rep = quantization_kernel_check(Z)
    assert rep.flagged == 4 and rep.kernel_dim == 4


def test_quantization_rejects_defective_matrix():
    with pytest.raises(IllConditionedError, match="perturb"):
        quantization_kernel_check(np.array([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]]))


@pytest.mark.parametrize("mu", range(4))
def test_chain_rule_in_matrix_model(mu):
    assert chain_rule_error(mu, 0.37) < 1e-6


# -- wave equation -----------------------------------------------------------------------


def test_order_one_reproduces_v1():
    res = derive_wave_equation(1)
    assert res.V(1) == v1_reference()
    assert res.V(1) == commutator(slash_d(), slash_A()) * (sym("ds") * sym("e") * ScalarCoeff.coerce("1/2"))
    assert res.mass_term == sym("m")


def test_order_two_reproduces_v2():
    res = derive_wave_equation(2)
    assert res.V(1) == v1_reference()
    assert res.V(2) == v2_reference()
    xi = t.slash([deriv(mu) * I + t.A_cov(mu) * sym("e") for mu in range(4)])
    want = commutator(commutator(slash_d(), slash_A()), xi) * (-I * sym("ds", 2) * sym("e") * ScalarCoeff.coerce("1/12"))
    assert res.V(2) == want


def test_dirac_part_is_free_operator_plus_gauge_coupling():
    res = derive_wave_equation(1)
    assert res.dirac_part == slash_d() * I - slash_A() * sym("e") - OpExpr.coerce(sym("m"))


def test_v_series_grades_are_exact():
    res = derive_wave_equation(2)
    for n, v in enumerate(res.v_series, start=1):
        assert v.degrees("ds") == {n}


def test_free_case_has_no_corrections():
    res = derive_wave_equation(2, charge=0)
    assert all(v.is_zero() for v in res.v_series)
    assert res.dirac_part == slash_d() * I - OpExpr.coerce(sym("m"))


def test_wave_equation_order_range():
    with pytest.raises(ValueError):
        derive_wave_equation(3)


def test_pauli_form_matches_commutator_form():
    pf = v1_to_pauli_form(derive_wave_equation(1).V(1))
    vk = in_kappa(v1_reference())
    assert normalize(vk - pf.covariant, RewriteRuleSet(lorenz=True)).is_zero()
    assert normalize(vk - pf.three_plus_one, RewriteRuleSet(lorenz=True)).is_zero()
    # without the gauge condition only a d^mu A_mu piece is left over
    assert not pf.gauge_remainder.is_zero()
    assert normalize(pf.gauge_remainder, RewriteRuleSet(lorenz=True)).is_zero()


def test_pauli_term_is_the_field_strength_part():
    covariant, pauli = pauli_reference()
    assert pauli == v1_to_pauli_form(v1_reference()).pauli_term
    assert all(not k.derivs for k in pauli.terms)
    assert not all(not k.derivs for k in covariant.terms)


def test_static_pure_b_even_part():
    pf = v1_to_pauli_form(v1_reference())
    kap_e_2m = sym("kappa") * sym("e") * sym("m", -1) * ScalarCoeff.coerce("1/2")
    B = t.vec(t.B_potential)
    A = t.vec(t.A_vec)
    grad = t.vec(t.grad)
    want = t.beta() * (t.sigma_dot(B) - t.sigma_dot(t.cross(A, grad)) * 2) * kap_e_2m
    rules = RewriteRuleSet(static=True, lorenz=True)
    got = normalize(pf.delta_eps, rules)
    phi_free = got.filter(lambda k, c: all(not (f.name == "A" and f.index == 0) for f in k.fields))
    assert normalize(phi_free - want, rules).is_zero()


def test_pauli_form_rejects_wrong_grade():
    with pytest.raises(ValueError):
        v1_to_pauli_form(v2_reference())
