import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_epl.diffengine import MODES, DerivRequest, DiffConfig, ReinhardtField, wirtinger, wirtinger_jet
from bergman_epl.domain import DomainParams, log_kernel_field
from bergman_epl.metric import metric_closed
from bergman_epl.domain import SlicePoint


def _everywhere(nu):
    return np.ones(np.shape(nu)[:-1], dtype=bool)


def reinhardt(fn):
    return ReinhardtField(fn, _everywhere)


TOL_BY_MODE = {"jet": 1e-12, "reinhardt": 1e-6, "real6": 1e-5}


@pytest.mark.parametrize("mode", MODES)
def test_ddbar_of_modulus_squared_is_one(mode):
    f = reinhardt(lambda n1, n2, n3: n1)
    val, _ = wirtinger(f, [0.3, 0, 0], DerivRequest.of([1], [1]), DiffConfig(mode=mode))
    np.testing.assert_allclose(val, 1.0, atol=TOL_BY_MODE[mode])


def test_holomorphic_derivative_of_real_part():
    f = lambda pts: np.real(np.asarray(pts)[..., 0])  # noqa: E731
    val, _ = wirtinger(f, [0.3 + 0.1j, 0.2, 0.1], DerivRequest.of([1]), DiffConfig(mode="real6"))
    np.testing.assert_allclose(val, 0.5, atol=1e-8)


@pytest.mark.parametrize("mode", MODES)
def test_constant_field_has_vanishing_derivatives(mode):
    f = reinhardt(lambda n1, n2, n3: 0 * n1 + 2.5)
    jet = wirtinger_jet(f, [0.2, 0.1, 0.3], 2, DiffConfig(mode=mode))
    for req in jet:
        if req.total >= 1:
            np.testing.assert_allclose(jet[req], 0.0, atol=1e-8)


@pytest.mark.parametrize("mode", MODES)
def test_fourth_order_product(mode):
    f = reinhardt(lambda n1, n2, n3: n2 * n3)
    val, _ = wirtinger(f, [0.3, 0.2 + 0.1j, 0.4], DerivRequest.of([2, 3], [2, 3]), DiffConfig(mode=mode))
    np.testing.assert_allclose(val, 1.0, atol=TOL_BY_MODE[mode] * 100)


@pytest.mark.parametrize("mode", MODES)
def test_ball_metric_entry(mode):
    params = DomainParams(1, 1)
    val, _ = wirtinger(log_kernel_field(params), [0, 0.2, 0.3], DerivRequest.of([1], [1]), DiffConfig(mode=mode))
    np.testing.assert_allclose(val.real, 4 / (1 - 0.04 - 0.09), rtol=1e-6)


def test_jet_reproduces_closed_metric():
    params = DomainParams(1, 1)
    sp = SlicePoint(0.2, 0.3, params)
    jet = wirtinger_jet(log_kernel_field(params), sp.point, 2, DiffConfig(mode="jet"))
    g = metric_closed(sp).entries
    np.testing.assert_allclose(jet.tensor(1, 1), g, rtol=1e-6, atol=1e-12)


def test_request_validation():
    with pytest.raises(ValueError):
        DerivRequest((3, 0, 0), (2, 0, 0))
    with pytest.raises(ValueError):
        DiffConfig(mode="symbolic")
    assert DerivRequest.of([1, 2], [1]).conjugate() == DerivRequest.of([1], [1, 2])


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.5), st.floats(0.05, 0.5), st.floats(0.05, 0.5), st.floats(0, 2 * np.pi))
def test_conjugate_requests_are_conjugate(r1, r2, r3, phase):
    """For a real field, dbar^beta d^alpha f is the conjugate of d^alpha dbar^beta f."""
    f = reinhardt(lambda n1, n2, n3: n1 * n2 + n3 * n3 * n1)
    at = np.array([r1 * np.exp(1j * phase), r2, r3])
    jet = wirtinger_jet(f, at, 3, DiffConfig(mode="jet"))
    for req in jet:
        np.testing.assert_allclose(jet[req.conjugate()], np.conj(jet[req]), atol=1e-12)
