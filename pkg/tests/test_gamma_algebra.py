import numpy as np
import pytest
from hypothesis import given

from spreadelectron.gamma_algebra import (
    METRIC,
    GammaRep,
    Spinor,
    alpha_dot_identity,
    build_dirac_rep,
    check_anticommutators,
    check_hermiticity_sandwich,
    check_index_roundtrip,
    density,
    exact,
    identity,
    is_zero,
    trace,
)
from spreadelectron.scalar_ring import GaussianRational, ScalarCoeff

from strategies import rational_vector

REP = build_dirac_rep()


def test_metric_signature():
    assert np.array_equal(METRIC, np.diag([1, -1, -1, -1]))
    assert np.array_equal(METRIC @ METRIC, np.eye(4))


def test_beta_is_diagonal():
    assert is_zero(REP.beta - exact(np.diag([1, 1, -1, -1])))


def test_all_sixteen_anticommutators():
    checks = check_anticommutators(REP)
    assert len(checks) == 16 and all(c.passed for c in checks)
    g = REP.gamma_lower
    assert is_zero(g[0] @ g[0] + g[0] @ g[0] - identity() * 2)
    assert is_zero(g[0] @ g[1] + g[1] @ g[0])


def test_roundtrip_and_sandwich():
    assert all(c.passed for c in check_index_roundtrip(REP))
    assert all(c.passed for c in check_hermiticity_sandwich(REP))


def test_sigma12_is_blockdiag_sigma3():
    s3 = exact([[1, 0], [0, -1]])
    want = exact(np.block([[np.array(s3, dtype=object), np.zeros((2, 2), dtype=object)], [np.zeros((2, 2), dtype=object), np.array(s3, dtype=object)]]))
    assert is_zero(REP.sigma_munu[1][2] - want)


def test_swapped_generator_fails_a_pair():
    g = REP.gamma_upper
    broken = GammaRep((g[0], g[2], g[2], g[3]))
    failed = {(c.mu, c.nu) for c in check_anticommutators(broken) if not c.passed}
    assert (1, 2) in failed
    assert (1, 1) not in failed


def test_identity_rep_fails_off_diagonal():
    bad = GammaRep((identity(),) * 4)
    failed = {(c.mu, c.nu) for c in check_anticommutators(bad) if not c.passed}
    assert (0, 1) in failed


def test_traces_vanish():
    for mu in range(4):
        assert trace(REP.gamma_upper[mu]).is_zero()
        for nu in range(4):
            if mu != nu:
                assert trace(REP.sigma_munu[mu][nu]).is_zero()


def test_alpha_identity_examples():
    res = alpha_dot_identity([1, 0, 0], [1, 0, 0])
    assert res.holds and is_zero(res.lhs - identity())
    res = alpha_dot_identity([1, 0, 0], [0, 1, 0])
    assert res.holds
    assert is_zero(res.lhs - REP.sigma[3] * ScalarCoeff.coerce(GaussianRational(0, 1)))


@given(rational_vector, rational_vector)
def test_alpha_identity_random_rationals(a, b):
    assert alpha_dot_identity(a, b).holds


def test_density_examples():
    assert density([1, 0, 0, 0]) == 1
    assert density([0, 0, 1, 0]) == -1
    assert density(np.array([1, 0, 1, 0]) / np.sqrt(2)) == pytest.approx(0.0, abs=1e-15)


def test_spinor_needs_four_components():
    with pytest.raises(ValueError):
        Spinor((1, 0, 0))


def test_adjoint_is_recomputed():
    psi = Spinor((1, 2j, 0, 1))
    assert np.allclose(psi.adjoint, psi.column().conj() @ np.diag([1, 1, -1, -1]))
