import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_epl.config import param_grid
from bergman_epl.domain import (
    DomainParams,
    NuPoint,
    SlicePoint,
    bergman_kernel,
    kernel_factored,
    log_kernel_field,
    membership_defect,
    n_monomials,
    psh_defect,
    random_interior_nu,
    u_constants,
)
from bergman_epl.errors import InvalidParams, NearBoundary

positive = st.floats(0.01, 50, allow_nan=False)


def test_params_reject_nonpositive():
    for bad in ((0, 1), (1, -1), (math.nan, 1), (math.inf, 1)):
        with pytest.raises(InvalidParams):
            DomainParams(*bad)


def test_membership_defect_examples():
    np.testing.assert_allclose(membership_defect([0, 0, 0], DomainParams(2, 3)), -1)
    np.testing.assert_allclose(membership_defect([0, 0.6, 0.8], DomainParams(1, 1)), 0, atol=1e-15)
    params = DomainParams(2, 1.5)
    sp = SlicePoint.from_delta(0.9, 0.4, params)
    assert membership_defect(sp.point, params) < 0


def test_u_constants_examples():
    assert u_constants(DomainParams(1, 1)).as_tuple() == (0, 0, 6, 0, 0, 0)
    assert u_constants(DomainParams(2, 1)).as_tuple() == (3, 0, 15, 0, -12, 0)


@settings(max_examples=200)
@given(positive, positive)
def test_u_sum_identities(p, lam):
    u = u_constants(DomainParams(p, lam))
    assert abs(u.u1 + u.u3 + u.u5 - 6 * lam) <= 1e-14 * 6 * lam * max(1, p * p)
    assert abs(u.u2 + u.u4 + u.u6) <= 1e-14 * max(map(abs, u.as_tuple())) + 1e-300


@settings(max_examples=100)
@given(positive, positive, st.floats(0, 1 - 1e-12))
def test_u3_u4_denominator_positive(p, lam, delta):
    u = u_constants(DomainParams(p, lam))
    assert u.u3 + u.u4 * delta > 0


def test_ball_kernel_at_origin():
    np.testing.assert_allclose(bergman_kernel(NuPoint(0, 0, 0), DomainParams(1, 1)), 6 / math.pi**3, rtol=1e-15)


def test_kernel_blows_up_towards_boundary():
    params = DomainParams(2, 0.5)
    vals = [bergman_kernel(NuPoint(0, 0, 1 - 10.0**-k), params) for k in range(1, 4)]
    assert vals[0] < vals[1] < vals[2]


def test_kernel_refuses_the_boundary():
    with pytest.raises(NearBoundary):
        bergman_kernel(NuPoint(0, 0, 1.0), DomainParams(1, 1))


def test_monomials_and_denominator():
    params = DomainParams(2, 3)
    mono = n_monomials(NuPoint(0, 0.1, 0.2), params)
    for i in (0, 1, 4, 5):
        assert mono[i] == 0
    _, d, _ = kernel_factored(NuPoint(0, 0, 0), params)
    assert d == 1


@pytest.mark.parametrize("params", param_grid(), ids=str)
def test_factored_form_agrees(params):
    nu = random_interior_nu(params, 200, np.random.default_rng(7))
    b = bergman_kernel(nu, params)
    _, _, f = kernel_factored(nu, params)
    np.testing.assert_allclose(f, b, rtol=1e-12)
    assert np.all(b > 0)


def test_log_kernel_field_ball():
    field = log_kernel_field(DomainParams(1, 1))
    pt = np.array([0.1 + 0.2j, 0.3, -0.2j])
    expected = math.log(6 / math.pi**3) - 4 * math.log(1 - np.sum(np.abs(pt) ** 2))
    np.testing.assert_allclose(field(pt), expected, rtol=1e-14)


@settings(max_examples=30)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_log_kernel_field_is_phase_invariant(a, b, c):
    field = log_kernel_field(DomainParams(0.7, 2.0))
    base = np.array([0.2, 0.3, 0.4], dtype=complex)
    rot = base * np.exp(1j * np.array([a, b, c]))
    np.testing.assert_allclose(field(rot), field(base), rtol=1e-13)


def test_psh_defect_examples():
    np.testing.assert_allclose(psh_defect([0.3, 0.3, 0.1], DomainParams(1, 1)), 1.0, rtol=1e-10)
    assert psh_defect([0.3, 0.3, 0.1], DomainParams(1, 2)) >= -1e-8


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 4), st.floats(0.3, 4), st.integers(0, 10_000))
def test_psh_defect_nonnegative(p, lam, seed):
    params = DomainParams(p, lam)
    nu = random_interior_nu(params, 1, np.random.default_rng(seed), delta_cap=0.9)[0]
    if nu[0] < 1e-6 or nu[1] < 1e-6:
        return
    assert psh_defect(np.sqrt(nu), params) >= -1e-8
