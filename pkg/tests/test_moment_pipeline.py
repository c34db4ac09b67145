from fractions import Fraction

import pytest

from spreadelectron.fw_engine import drop_field
from spreadelectron.gamma_algebra import ConsistencyError
from spreadelectron.moment_pipeline import (
    ELECTRON,
    MUON,
    PartitionError,
    ParticleConfig,
    SelfEnergyModel,
    alpha_series,
    apply_self_energy,
    expand_v2_terms,
    first_order_correction,
    gyromagnetic_unit,
    moment_coefficient,
    moment_report,
    particle,
    spherical_reduction,
    v2_double_commutator,
    vacuum_polarization_adjust,
)
from spreadelectron.operator_calculus import Audit, OpExpr, deriv, field, gamma
from spreadelectron.operator_calculus import threeplusone as t
from spreadelectron.scalar_ring import ScalarCoeff, sym

# independent oracles: plain rational arithmetic on the published formulas
HALF, THIRD = Fraction(1, 2), Fraction(1, 3)
VP = Fraction(1, 192)


def electron_alpha2():
    return -(THIRD - VP)


def muon_alpha2(ratio=Fraction(1034, 5)):
    return -(THIRD - VP * (1 + ratio))


@pytest.fixture(scope="module")
def electron():
    return moment_report(ELECTRON, 2, vacuum_polarization=False)


def test_self_energy_chain_gives_alpha_over_pi():
    assert SelfEnergyModel().kappa_dm_over_m() == sym("alpha") * sym("pi", -1)
    assert SelfEnergyModel().kappa_dm_over_m("m_mu") == sym("alpha") * sym("pi", -1)


def test_gyromagnetic_unit_is_read_from_the_baseline():
    assert gyromagnetic_unit() == ScalarCoeff.coerce(-1)


def test_first_order_is_half_alpha_over_pi():
    c, _ = first_order_correction(ELECTRON)
    assert alpha_series(c.g_shift) == {1: HALF}


def test_first_order_is_mass_independent():
    ce, _ = first_order_correction(ELECTRON)
    cm, _ = first_order_correction(MUON)
    assert ce.g_shift == cm.g_shift
    assert not ({"m", "m_mu"} & ce.g_shift.symbols())


def test_first_order_vanishes_without_self_energy():
    c, _ = first_order_correction(ELECTRON, SelfEnergyModel(delta_m=0))
    assert c.g_shift.is_zero()


def test_second_order_total(electron):
    assert electron.series() == {1: HALF, 2: -THIRD}


def test_internal_cancellation_is_exact(electron):
    by_label = {c.label: c for c in electron.contributions}
    a1 = by_label["second order: (a) sigma.B term"]
    resc = by_label["second order: vector-potential rescaling"]
    assert not a1.coefficient.is_zero()
    assert (a1.coefficient + resc.coefficient).is_zero()
    assert (a1.g_shift + resc.g_shift).is_zero()
    assert electron.audit.counts["cancellation"] == 2


def test_total_is_sum_of_contributions(electron):
    total = ScalarCoeff()
    for c in electron.contributions:
        total = total + c.g_shift
    assert electron.total == total


def test_every_step_is_audited(electron):
    counts = electron.audit.counts
    for rule in ("averaging_radial", "self_energy", "source_free", "verified", "neglected", "approximation"):
        assert counts.get(rule, 0) > 0, rule


def test_electron_with_vacuum_polarization():
    rep = moment_report(ELECTRON, 2, vacuum_polarization=True)
    s = rep.series()
    assert s[2] == electron_alpha2() == Fraction(-63, 192)
    assert float(s[2]) == -0.328125
    (label, ours, ref, gap), = rep.comparisons()
    assert ref == -0.3285 and gap == pytest.approx(0.000375)


def test_muon_with_vacuum_polarization():
    rep = moment_report(MUON, 2, vacuum_polarization=True)
    s = rep.series()
    assert s == {1: HALF, 2: muon_alpha2()}
    assert s[2] == Fraction(719, 960)
    assert abs(float(s[2]) - 0.75) <= 0.002


def test_unit_mass_ratio_reduces_to_two_pair_terms():
    p = ParticleConfig("muon", "m_mu", Fraction(1))
    total = sum((c.g_shift for c in vacuum_polarization_adjust(p)), ScalarCoeff())
    assert alpha_series(total) == {2: 2 * VP}
    assert float(-(THIRD - 2 * VP)) == pytest.approx(-0.3229166, abs=1e-7)


def test_charge_flip_leaves_moment_invariant(electron):
    flipped = moment_report(ELECTRON, 2, charge=-sym("e"))
    assert flipped.series() == electron.series()


def test_isotropic_averaging_changes_the_first_order():
    c, _ = first_order_correction(ELECTRON, averaging="isotropic")
    assert alpha_series(c.g_shift) == {1: THIRD}


def test_order_guard_and_particles():
    with pytest.raises(ValueError):
        moment_report(ELECTRON, 3)
    with pytest.raises(ValueError):
        particle("tau")
    with pytest.raises(ValueError):
        ParticleConfig("x", "m_x", Fraction(0))
    assert particle("muon") is MUON


# -- spherical reduction ---------------------------------------------------------


def test_sigma_a_cross_e_reduces_to_half_phi_sigma_b():
    AxE = t.sigma_dot(t.cross(t.vec(t.A_vec), t.vec(t.E)))
    got = spherical_reduction(AxE)
    assert got == t.sigma_dot(t.vec(t.B)) * (sym("phi") * ScalarCoeff.coerce("1/2"))


def test_a_dot_e_reduces_to_zero():
    audit = Audit()
    assert spherical_reduction(t.dot(t.vec(t.A_vec), t.vec(t.E)), audit=audit).is_zero()
    assert audit.counts["A.E"] == 1


def test_without_averaging_the_radial_term_survives():
    AxE = t.sigma_dot(t.cross(t.vec(t.A_vec), t.vec(t.E)))
    with pytest.raises(ConsistencyError, match="direction of r"):
        spherical_reduction(AxE, averaging=None)


def test_reduction_rejects_foreign_terms():
    with pytest.raises(ConsistencyError):
        spherical_reduction(t.sigma(1))


def test_self_energy_substitution():
    e = sym("e")
    got = apply_self_energy(t.alpha(1) * t.phi() * e)
    assert got == t.alpha(1) * t.beta() * sym("dm")
    with pytest.raises(ConsistencyError):
        apply_self_energy(t.phi() * deriv(1))


def test_moment_coefficient_rejects_other_structures():
    unit = t.beta() * t.sigma_dot(t.vec(t.B)) * (sym("e") * sym("m", -1) * ScalarCoeff.coerce("1/2"))
    assert moment_coefficient(unit * 3) == ScalarCoeff.coerce(3)
    with pytest.raises(ConsistencyError):
        moment_coefficient(unit + t.sigma(1))


# -- the V_2 partition -------------------------------------------------------------


def test_partition_has_seven_labelled_terms():
    audit = Audit()
    terms = expand_v2_terms(audit=audit)
    assert [label for label, _ in terms] == list("abcdefg")
    total = OpExpr()
    for _, x in terms:
        total = total + x
    leftover = v2_double_commutator() - total
    # the remainder is -i gamma^nu box A_nu
    box = OpExpr()
    for nu in range(4):
        for mu in range(4):
            box = box + gamma(nu) * field("A", nu, (mu, mu)) * (1 if mu == 0 else -1)
    assert leftover == box * ScalarCoeff.coerce(-1j)
    assert audit.counts["source_free"] == len(leftover)


def test_partition_without_source_free_assumption_reports_leftover():
    with pytest.raises(PartitionError, match="leave"):
        expand_v2_terms(source_free=False)


def test_term_g_matches_its_printed_form():
    terms = dict(expand_v2_terms())
    want = OpExpr()
    for mu in range(4):
        for nu in range(4):
            want = want + gamma(mu) * field("A", nu, (mu,)) * field("A", nu) * (1 if nu == 0 else -1)
    assert terms["g"] == want * (6 * sym("e"))


def test_terms_vanish_without_potential():
    for label, x in expand_v2_terms():
        assert not x.is_zero()
        assert drop_field(x, "A").is_zero(), label
