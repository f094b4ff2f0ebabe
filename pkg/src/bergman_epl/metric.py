"""Bergman metric of E_{p,lambda} on the slice {(0, y, z)}.

On the slice every metric component factors as a power of a, b, c times a
dimensionless factor A_i(delta, z^2; p, lambda).  The A-factors stay bounded
as delta -> 1, so comparisons near the boundary are made on them rather than
on the raw entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffengine import EXACT, DiffConfig, wirtinger_jet
from .domain import PI3, DomainParams, SlicePoint, bergman_kernel, log_kernel_field, u_constants
from .extrapolate import boundary_limit

ROLES = ("metric", "inverse_metric", "ricci")
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HermitianMatrix3:
    entries: np.ndarray
    role: str = "metric"

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {self.role!r}")
        scale = max(np.max(np.abs(m)), np.finfo(float).tiny)
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * scale:
            raise ValueError("matrix is not Hermitian to 1e-12")
        object.__setattr__(self, "entries", m)

    def __getitem__(self, idx):
        return self.entries[idx]

    def is_positive_definite(self) -> bool:
        try:
            np.linalg.cholesky(self.entries)
        except np.linalg.LinAlgError:
            return False
        return True

    def det(self) -> float:
        return float(np.linalg.det(self.entries).real)


@dataclass(frozen=True)
class AFactors:
    A1: float
    A2: float
    A3: float
    A4: float


def _a_factors(delta, z2, params: DomainParams):
    """A1..A4 as arrays; A4 from its defining relation."""
    p, lam = params.p, params.lam
    u1, u2, u3, u4, u5, u6 = u_constants(params).as_tuple()
    den = u3 + u4 * delta
    a1 = (u5 + u6 * delta) / den + 4
    a2 = 1 / p + 3 + u3 * u4 * (1 - delta) ** 2 / den**2
    frac = (
        u3 * u4 * (1 + delta**2) * (1 + lam * z2)
        + u4**2 * delta * (1 + (lam * z2 - 1) * delta + delta**2)
        + u3**2 * (1 + lam * z2)
    ) / den**2
    a3 = (
        (1 + delta * (lam * z2 - 1)) * lam / p
        + delta**2 * (2 - 2 * lam)
        + delta * (2 * lam**2 * z2 - 4)
        + lam
        + 2
        + lam * delta * frac
    )
    a4 = (a3 - lam**2 * delta * z2 * a2) / (1 - delta)
    return a1, a2, a3, a4


def a4_explicit(delta, params: DomainParams, r: float | None = None):
    """The expanded rational form of A4, with its free symbol r (defaults to lambda)."""
    p = params.p
    r = params.lam if r is None else r
    num = (
        delta**2 * p**2 * (r - 2) * (r - 1)
        + delta * p * (r - 1) * (4 * p * r + 4 * p + 3 * r)
        + p**2 * r**2
        + 3 * p**2 * r
        + 2 * p**2
        + 2 * p * r**2
        + 3 * p * r
        + r**2
    )
    return num / (p * (delta * p * (r - 1) + p * r + p + r))


def a_factors(slice_: SlicePoint, params: DomainParams | None = None) -> AFactors:
    params = params or slice_.params
    return AFactors(*map(float, _a_factors(slice_.delta, slice_.z**2, params)))


def a_factors_at(delta: float, z: float, params: DomainParams) -> AFactors:
    """A-factors as functions of (delta, z); no slice point needed, so delta may approach 1."""
    return AFactors(*map(float, _a_factors(delta, z * z, params)))


def metric_closed(slice_: SlicePoint, params: DomainParams | None = None) -> HermitianMatrix3:
    params = params or slice_.params
    lam = params.lam
    a, b, c, y, z = slice_.a, slice_.b, slice_.c, slice_.y, slice_.z
    A = a_factors(slice_, params)
    g = np.zeros((3, 3), dtype=complex)
    g[0, 0] = A.A1 / c
    g[1, 1] = a**lam * A.A2 / b**2
    g[1, 2] = g[2, 1] = lam * y * z * A.A2 / (a ** (1 - lam) * b**2)
    g[2, 2] = A.A3 / (a ** (2 - 2 * lam) * b**2)
    return HermitianMatrix3(g, "metric")


def inverse_metric_closed(slice_: SlicePoint, params: DomainParams | None = None) -> HermitianMatrix3:
    params = params or slice_.params
    lam = params.lam
    a, b, c, y, z = slice_.a, slice_.b, slice_.c, slice_.y, slice_.z
    A = a_factors(slice_, params)
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = c / A.A1
    h[1, 1] = b * A.A3 / (A.A2 * A.A4)
    h[1, 2] = h[2, 1] = -lam * y * z * a ** (1 - lam) * b / A.A4
    h[2, 2] = a ** (2 - lam) * b / A.A4
    return HermitianMatrix3(h, "inverse_metric")


def det_identity_residual(slice_: SlicePoint, params: DomainParams | None = None) -> float:
    """Relative gap between the 2x2 minor g22 g33 - g23 g32 and A2 A4 / (a^{2-2lam} b^3)."""
    params = params or slice_.params
    g = metric_closed(slice_, params).entries.real
    minor = g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1]
    A = a_factors(slice_, params)
    target = A.A2 * A.A4 / (slice_.a ** (2 - 2 * params.lam) * slice_.b**3)
    return abs(minor - target) / abs(target)


def _det_ratio_formula(delta, A: AFactors, params: DomainParams) -> float:
    p, lam = params.p, params.lam
    return PI3 * p**2 * A.A1 * A.A2 * A.A4 / ((p + 1) * ((lam + lam * p + p) + (lam - 1) * p * delta))


def det_ratio(slice_: SlicePoint, params: DomainParams | None = None) -> float:
    """det g_B / B on the slice, from its closed form in the A-factors."""
    params = params or slice_.params
    return _det_ratio_formula(slice_.delta, a_factors(slice_, params), params)


def det_ratio_direct(slice_: SlicePoint, params: DomainParams | None = None) -> float:
    """det(metric_closed) / bergman_kernel, the independent cross-check of :func:`det_ratio`."""
    params = params or slice_.params
    return metric_closed(slice_, params).det() / float(bergman_kernel(slice_.nu, params))


def limits_A(params: DomainParams) -> tuple[float, float, float]:
    p, lam = params.p, params.lam
    return 4 * (2 + p) / (1 + 2 * p), 3 + 1 / p, lam * (3 + 1 / p)


def det_ratio_limit(params: DomainParams) -> float:
    """Boundary value of det g_B / B obtained by substituting the A-factor limits."""
    p, lam = params.p, params.lam
    l1, l2, l4 = limits_A(params)
    return PI3 * p**2 * l1 * l2 * l4 / ((p + 1) * lam * (2 * p + 1))


def extrapolated_limits_A(params: DomainParams, z: float = 0.5):
    """(A1, A2, A4) extrapolated to delta -> 1 from delta = 1 - 10^-k, plus error estimates."""

    def fn(delta):
        a1, a2, _, a4 = _a_factors(delta, z * z, params)
        return np.array([a1, a2, a4])

    return boundary_limit(fn)


def metric_numeric(pt, params: DomainParams, cfg: DiffConfig = EXACT):
    """g_{ij} = d_i dbar_j log B from diffengine: ``(HermitianMatrix3, error array)``."""
    jet = wirtinger_jet(log_kernel_field(params), pt, 2, cfg)
    g = jet.tensor(1, 1)
    err = jet.tensor(1, 1, errors=True)
    g = 0.5 * (g + g.conj().T)
    return HermitianMatrix3(g, "metric"), err


def unit_ball_g11(y: float, z: float) -> float:
    """Reference value 4 / (1 - y^2 - z^2) for p = lambda = 1."""
    return 4.0 / (1.0 - y * y - z * z)


__all__ = [
    "AFactors",
    "HermitianMatrix3",
    "a4_explicit",
    "a_factors",
    "a_factors_at",
    "det_identity_residual",
    "det_ratio",
    "det_ratio_direct",
    "det_ratio_limit",
    "extrapolated_limits_A",
    "inverse_metric_closed",
    "limits_A",
    "metric_closed",
    "metric_numeric",
    "unit_ball_g11",
]
