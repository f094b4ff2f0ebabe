import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_epl import golden
from bergman_epl.diskbounds import (
    GRAD_CONVENTIONS,
    INEQUALITY_P,
    BoundsParams,
    constants,
    cheng_constant,
    disk_inequality,
    green_disk,
    green_disk_printed,
    heat_lower_bound,
    inequality_lhs,
    inequality_rhs,
    inequality_rhs_beta,
    mckean_lambda1,
    phi,
    phi_1d,
    phi_2d,
    phi_discrepancy,
    phi_printed,
    poincare_constant,
    ring_integral,
    ring_integral_closed,
    thm_constant,
)
from bergman_epl.errors import Coincident, DimensionTooSmall

disk_pt = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * complex(math.cos(t[1]),
                                                                                               math.sin(t[1])))


def test_green_examples():
    np.testing.assert_allclose(green_disk(0, 0.5), math.log(2) / (2 * math.pi))
    assert abs(green_disk(complex(math.cos(1), math.sin(1)), 0.3 + 0.2j)) < 1e-15
    with pytest.raises(Coincident):
        green_disk(0.3, 0.3)


@settings(max_examples=100)
@given(disk_pt, disk_pt)
def test_green_symmetric_and_positive(x, y):
    if abs(x - y) < 1e-6:
        return
    np.testing.assert_allclose(green_disk(x, y), green_disk(y, x), atol=1e-12)
    assert green_disk(x, y) >= 0
    if abs(x) > 1e-3:
        np.testing.assert_allclose(green_disk_printed(x, y), green_disk(x, y), atol=1e-10)


@pytest.mark.parametrize("aa,bb", [(1, 1), (2, 1), (0.5, 0.3), (0.3, 3.0), (1.0, 1.0001)])
def test_ring_integral(aa, bb):
    np.testing.assert_allclose(ring_integral(aa, bb), ring_integral_closed(aa, bb), atol=1e-8)


def test_phi_anchor_values():
    assert phi(1.0) == 0
    np.testing.assert_allclose(phi(0.0), 11 / 72, atol=1e-15)
    np.testing.assert_allclose(phi(0.5), 0.09765625, atol=1e-15)


@pytest.mark.parametrize("R", [0.0, 0.1, 0.5, 0.8, 0.99, 1.0])
def test_phi_three_paths(R):
    np.testing.assert_allclose(phi_1d(R), phi(R), atol=1e-9)
    np.testing.assert_allclose(phi_2d(R), phi(R), atol=1e-8)


def test_printed_display_deviates():
    assert phi_printed(0.0) == pytest.approx(1 / 6)
    assert phi_printed(1.0) == pytest.approx(23 / 72)
    rows = phi_discrepancy()
    assert all(abs(r["deviation"]) > 1e-3 for r in rows)


@pytest.mark.parametrize("p", INEQUALITY_P)
@pytest.mark.parametrize("convention", GRAD_CONVENTIONS)
def test_inequality_holds_with_margin(p, convention):
    lhs, rhs, holds = disk_inequality(p, convention)
    assert holds and lhs / rhs <= 0.1


def test_inequality_p2_example():
    assert inequality_lhs(2) < 2 * math.pi * (11 / 72) ** 2 / 2
    np.testing.assert_allclose(inequality_rhs(2, "grad_unit"), 2 * math.pi)
    for p in INEQUALITY_P:
        np.testing.assert_allclose(inequality_rhs(p, "grad_sq"), inequality_rhs_beta(p), rtol=1e-10)
    lhs = [inequality_lhs(p) for p in INEQUALITY_P]
    assert all(a > b for a, b in zip(lhs, lhs[1:]))


def test_heat_examples():
    for n in (1, 2, 3):
        t, b = 0.7, 1.3
        expected = (2 * math.pi * t) ** -n * math.exp(-((2 * n - 1) ** 2) * b * b * t / 8) * (
            1 + b * b * t / 2) ** ((2 * n - 3) / 2)
        np.testing.assert_allclose(heat_lower_bound(BoundsParams(n=n, b=b, t=t)).value, expected, rtol=1e-13)
    far = heat_lower_bound(BoundsParams(n=2, r=1e3))
    assert far.underflow and far.value == 0
    gold = golden.heat_value()
    val = heat_lower_bound(BoundsParams(n=gold["n"], b=gold["b"], t=gold["t"], r=gold["r"])).value
    np.testing.assert_allclose(val, gold["value"], rtol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_heat_decreasing_in_r(n):
    vals = [heat_lower_bound(BoundsParams(n=n, r=r)).value for r in np.linspace(0, 6, 61)]
    assert np.all(np.diff(vals) < 0)


def test_constants():
    np.testing.assert_allclose(poincare_constant(2, 1), 4)
    np.testing.assert_allclose(mckean_lambda1(2, 1), 0.25)
    np.testing.assert_allclose(thm_constant(1, 1, 2), 4)
    np.testing.assert_allclose(cheng_constant(2, 1), 1)
    with pytest.raises(DimensionTooSmall):
        poincare_constant(1, 1)
    k = constants(1, 1.0, 2.0)
    assert k.poincare is None and k.thm_constant == 4
