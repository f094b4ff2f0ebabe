import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_epl import jets
from bergman_epl.extrapolate import boundary_limit, neville_at_zero


@settings(max_examples=50)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=4))
def test_neville_is_exact_on_polynomials(coeffs):
    hs = np.array([0.4, 0.2, 0.1, 0.05, 0.025])
    vals = np.polyval(coeffs, hs)
    lim, _ = neville_at_zero(hs, vals)
    np.testing.assert_allclose(lim, coeffs[-1], atol=1e-9)


def test_boundary_limit_of_smooth_function():
    lim, err = boundary_limit(lambda d: np.array([np.exp(d), 1 / (2 - d)]))
    np.testing.assert_allclose(lim, [np.e, 1.0], rtol=1e-10)
    assert np.all(err < 1e-8)


def test_jet_derivatives_and_partial():
    x, y = jets.Jet.variables([0.3, 0.2], 3)
    f = jets.exp(x) * y * y
    np.testing.assert_allclose(f.derivative((1, 2)), 2 * np.exp(0.3), rtol=1e-14)
    d = f.partial(0)
    assert d.space.order == 2
    np.testing.assert_allclose(d.derivative((0, 1)), 2 * 0.2 * np.exp(0.3), rtol=1e-14)
    t = f.truncate(1)
    np.testing.assert_allclose(t.derivative((1, 0)), f.derivative((1, 0)))
    assert t.space.order == 1


@settings(max_examples=30)
@given(st.floats(0.1, 3), st.floats(-2, 2))
def test_jet_log_exp_roundtrip(a, b):
    x, y = jets.Jet.variables([a, b], 2)
    g = jets.exp(jets.log(x) + y)
    h = x * jets.exp(y)
    np.testing.assert_allclose(g.derivatives(), h.derivatives(), rtol=1e-12, atol=1e-12)
