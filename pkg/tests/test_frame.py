import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bergman_epl import golden
from bergman_epl.config import ScanSpec
from bergman_epl.domain import DomainParams, SlicePoint
from bergman_epl.errors import Degenerate, ZeroVector
from bergman_epl.frame import (
    HSC_NAMES,
    boundary_scan,
    gram_schmidt,
    hsc_direction,
    hsc_report,
    ke_residual,
    ricci,
    ricci_trace,
    scan_drift,
)
from bergman_epl.metric import HermitianMatrix3, metric_closed

BALL = DomainParams(1, 1)
BALL_SIX = (-0.5, -0.5, -0.5, -0.25, -0.25, -0.25)


def test_identity_frame():
    f = gram_schmidt(HermitianMatrix3(np.eye(3), "metric"))
    assert (f.k1, f.t1, f.t2, f.s1, f.s2, f.s3) == (1, 0, 1, 0, 0, 1)


def test_slice_frame_structure():
    g = metric_closed(SlicePoint(0.4, 0.5, DomainParams(2, 3)))
    f = gram_schmidt(g)
    e = g.entries
    assert f.t1 == 0 and f.s1 == 0
    np.testing.assert_allclose(f.t2, 1 / np.sqrt(e[1, 1].real))
    np.testing.assert_allclose(f.s2, -f.s3 * e[2, 1] / e[1, 1])


@settings(max_examples=50)
@given(arrays(np.float64, (2, 3, 3), elements=st.floats(-1, 1)))
def test_gram_schmidt_orthonormal(raw):
    m = raw[0] + 1j * raw[1]
    g = m @ m.conj().T + 0.5 * np.eye(3)
    f = gram_schmidt(HermitianMatrix3(g, "metric"))
    np.testing.assert_allclose(f.gram(HermitianMatrix3(g, "metric")), np.eye(3), atol=1e-10)


def test_degenerate_metric_is_refused():
    g = np.ones((3, 3))
    with pytest.raises(Degenerate):
        gram_schmidt(HermitianMatrix3(g, "metric"))


@pytest.mark.parametrize("source", ["closed", "numeric"])
@pytest.mark.parametrize("y,z", [(0.2, 0.3), (0.6, 0.1), (0.1, 0.9)])
def test_ball_hsc(source, y, z):
    rep = hsc_report(SlicePoint(y, z, BALL), source=source)
    np.testing.assert_allclose(rep.values(), BALL_SIX, atol=1e-8)


@pytest.mark.parametrize("params", [DomainParams(0.2, 1), DomainParams(3, 0.5), DomainParams(0.7, 4)], ids=str)
def test_closed_and_numeric_hsc_agree(params):
    sp = SlicePoint.from_delta(0.6, 0.4, params)
    closed, numeric = hsc_report(sp, source="closed"), hsc_report(sp, source="numeric")
    np.testing.assert_allclose(closed.values(), numeric.values(), atol=1e-8)
    assert max(closed.zero_residuals, numeric.zero_residuals) <= 1e-6 * max(map(abs, closed.values()))


def test_direction_hsc():
    params = DomainParams(2, 1)
    sp = SlicePoint(0.3, 0.4, params)
    rep = hsc_report(sp, source="numeric")
    x = np.array([1.0, 0, 0])
    np.testing.assert_allclose(hsc_direction(sp.point, params, x), rep.HX, rtol=1e-8)
    v = np.array([0.3, 1j, -0.2])
    np.testing.assert_allclose(hsc_direction(sp.point, params, 2 * v), hsc_direction(sp.point, params, v), rtol=1e-12)
    np.testing.assert_allclose(hsc_direction(sp.point, BALL, v), -0.5, atol=1e-9)
    with pytest.raises(ZeroVector):
        hsc_direction(sp.point, params, [0, 0, 0])


def test_ball_scan_is_constant():
    rows = boundary_scan(BALL, ScanSpec(3, 4))
    for row in rows:
        np.testing.assert_allclose([row[k] for k in HSC_NAMES], BALL_SIX, atol=1e-6)


def test_hx_scan_approaches_boundary_value():
    rows = boundary_scan(DomainParams(0.2, 1), ScanSpec(2, 5))
    last = [r for r in rows if r["delta"] == max(x["delta"] for x in rows)]
    for r in last:
        assert abs(r["HX"] - 0.033) < 0.002


@pytest.mark.parametrize("params", [DomainParams(0.2, 5), DomainParams(5, 0.2)], ids=str)
def test_scan_sup_stable_under_refinement(params):
    coarse, fine, drift = scan_drift(params, ScanSpec(3, 5))
    assert all(np.isfinite(list(coarse.values())))
    assert drift < 0.01


def test_ricci_routes_agree_and_are_hermitian():
    params = DomainParams(2, 1)
    pt = SlicePoint(0.3, 0.4, params).point
    r = ricci(pt, params)
    np.testing.assert_allclose(r.entries, r.entries.conj().T, atol=1e-10)
    np.testing.assert_allclose(r.entries, ricci_trace(pt, params), rtol=1e-8, atol=1e-10)


def test_ricci_eigenvalues_phase_invariant():
    params = DomainParams(0.5, 2)
    pt = np.array([0.1, 0.3, 0.2])
    rot = pt * np.exp(1j * np.array([0.4, 1.3, -2.0]))
    np.testing.assert_allclose(np.linalg.eigvalsh(ricci(rot, params).entries),
                               np.linalg.eigvalsh(ricci(pt, params).entries), rtol=1e-9)


def test_ke_ball_and_witnesses():
    c, res = ke_residual(BALL)
    assert res <= 1e-6
    np.testing.assert_allclose(c, -1.0, atol=1e-6)
    for p, lam in ((2.0, 1.0), (1.0, 2.0)):
        _, res = ke_residual(DomainParams(p, lam))
        assert res > golden.ke_threshold(p, lam)
