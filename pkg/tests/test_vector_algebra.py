import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spreadelectron.scalar_ring import ScalarCoeff, sym
from spreadelectron.vector_algebra import average_radial, cross, dot, isotropic_average, vector

A, B, E, R = (vector(n) for n in "ABEr")

vec3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3).map(np.array)


def _values(a, b, e, r):
    return {"A": a, "B": b, "E": e, "r": r}


@given(vec3, vec3, vec3, vec3)
def test_nested_cross_products_match_numpy(a, b, e, r):
    vals = _values(a, b, e, r)
    cases = [
        (cross(cross(B, R), R), np.cross(np.cross(b, r), r)),
        (cross(A, cross(B, E)), np.cross(a, np.cross(b, e))),
        (cross(cross(A, B), cross(E, R)), np.cross(np.cross(a, b), np.cross(e, r))),
    ]
    bind = {"r": float(np.linalg.norm(r))}
    for got, want in cases:
        assert np.allclose(got.evaluate(vals, bind), want, atol=1e-9)


@given(vec3, vec3, vec3, vec3)
def test_dot_products_match_numpy(a, b, e, r):
    vals = _values(a, b, e, r)
    bind = {"r": float(np.linalg.norm(r))}
    assert dot(cross(A, B), E).evaluate(vals, bind) == pytest.approx(np.dot(np.cross(a, b), e), abs=1e-9)
    got = dot(cross(A, B), cross(E, R)).evaluate(vals, bind)
    assert got == pytest.approx(np.dot(np.cross(a, b), np.cross(e, r)), abs=1e-9)


def test_cross_is_antisymmetric_and_self_cross_vanishes():
    assert (cross(A, B) + cross(B, A)).is_zero()
    assert cross(A, A).is_zero()


def test_self_dot_of_position_is_r_squared():
    assert dot(R, R).constant() == sym("r", 2)


# The six points +-e_i form a spherical design of degree 3, so their mean of
# r_i r_j equals the angular average r^2 delta_ij / 3 exactly.
_AXES = [s * np.eye(3)[i] for i in range(3) for s in (1, -1)]


def test_isotropic_average_matches_axis_design():
    v = cross(cross(B, R), R)
    avg, n = isotropic_average(v)
    assert n == 1
    b = np.array([0.3, -1.2, 0.7])
    want = np.mean([np.cross(np.cross(b, r), r) for r in _AXES], axis=0)
    got = avg.evaluate({"B": b}, {"r": 1.0})
    assert np.allclose(got, want)


def test_isotropic_average_of_b_cross_r_cross_r():
    avg, _ = isotropic_average(cross(cross(B, R), R))
    assert avg == vector("B", sym("r", 2) * -2 * (sym("r", 0) * 1)) * ScalarCoeff.coerce("1/3")


def test_radial_average_drops_the_r_projection():
    avg, n = average_radial(cross(cross(B, R), R))
    assert n == 1
    assert avg.coefficient_of("B") == -sym("r", 2)
