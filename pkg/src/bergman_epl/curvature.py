"""Chern curvature of the Bergman metric and its factor families on the slice.

Index convention: ``R[i, j, k, l]`` stores R_{i jbar k lbar} (0-based), with

    R_{i jbar k lbar} = -d_k dbar_l g_{i jbar} + sum_{p,q} g^{q pbar} (d_k g_{i pbar}) (dbar_l g_{q jbar}).

On the slice (0, y, z) every derivative of the metric is a power of a, b, c,
y, z times a bounded factor.  The G (third derivatives of log B) and H
(fourth derivatives) factors below are *defined* by dividing the computed
derivatives by those prefactors; only G1, G2 and H1 also have closed forms.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .diffengine import EXACT, DiffConfig, wirtinger_jet
from .domain import DomainParams, SlicePoint, log_kernel_field, u_constants
from .errors import AxisSingular
from .extrapolate import neville_at_zero
from .metric import a_factors, a_factors_at

AXIS_EPS = 1e-2
# 1 - delta nodes for boundary extrapolation of F and Ftilde; delta stays <= 0.999
F_GAPS = (0.064, 0.032, 0.016, 0.008, 0.004, 0.002, 0.001)

# Table entries (1-based): G_n <- d_k g_{i jbar} as ("d" | "dbar", k, i, j);
# H_n <- d_k dbar_l g_{i jbar} as (k, l, i, j).
G_ENTRIES = {
    1: [("d", 1, 2, 1), ("d", 2, 1, 1), ("dbar", 1, 1, 2), ("dbar", 2, 1, 1)],
    2: [("d", 1, 3, 1), ("d", 3, 1, 1), ("dbar", 1, 1, 3), ("dbar", 3, 1, 1)],
    3: [("d", 2, 2, 2), ("dbar", 2, 2, 2)],
    4: [("d", 2, 2, 3), ("dbar", 2, 3, 2)],
    5: [("d", 2, 3, 2), ("d", 3, 2, 2), ("dbar", 2, 2, 3), ("dbar", 3, 2, 2)],
    6: [("d", 2, 3, 3), ("d", 3, 2, 3), ("dbar", 2, 3, 3), ("dbar", 3, 3, 2)],
    7: [("d", 3, 3, 2), ("dbar", 3, 2, 3)],
    8: [("d", 3, 3, 3), ("dbar", 3, 3, 3)],
}
H_ENTRIES = {
    1: [(1, 1, 1, 1)],
    2: [(1, 1, 2, 2), (1, 2, 2, 1), (2, 1, 1, 2), (2, 2, 1, 1)],
    3: [(1, 1, 2, 3), (1, 3, 2, 1), (2, 1, 1, 3), (2, 3, 1, 1),
        (1, 1, 3, 2), (1, 2, 3, 1), (3, 1, 1, 2), (3, 2, 1, 1)],
    4: [(1, 1, 3, 3), (1, 3, 3, 1), (3, 1, 1, 3), (3, 3, 1, 1)],
    5: [(2, 2, 2, 2)],
    6: [(2, 2, 2, 3), (2, 3, 2, 2), (2, 2, 3, 2), (3, 2, 2, 2)],
    7: [(2, 2, 3, 3), (2, 3, 3, 2), (3, 2, 2, 3), (3, 3, 2, 2)],
    8: [(2, 3, 2, 3), (3, 2, 3, 2)],
    9: [(2, 3, 3, 3), (3, 3, 2, 3), (3, 2, 3, 3), (3, 3, 3, 2)],
    10: [(3, 3, 3, 3)],
}
# Curvature components R_{i jbar k lbar} (1-based) carrying Htilde_n; the rest of
# each orbit follows from the Kahler symmetries.
R_BASE = {1: (1, 1, 1, 1), 2: (1, 1, 2, 2), 3: (1, 1, 2, 3), 4: (1, 1, 3, 3), 5: (2, 2, 2, 2),
          6: (2, 2, 2, 3), 7: (2, 2, 3, 3), 8: (2, 3, 2, 3), 9: (2, 3, 3, 3), 10: (3, 3, 3, 3)}


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    components: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.components, dtype=complex)
        if r.shape != (3, 3, 3, 3):
            raise ValueError(f"expected shape (3, 3, 3, 3), got {r.shape}")
        object.__setattr__(self, "components", r)

    def __getitem__(self, idx):
        return self.components[idx]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.components)))

    def symmetry_residual(self) -> float:
        """Largest violation of the Kahler and conjugation symmetries, relative to ``scale``."""
        r = self.components
        gaps = (
            r - r.transpose(2, 1, 0, 3),  # i <-> k
            r - r.transpose(0, 3, 2, 1),  # j <-> l
            r - r.transpose(1, 0, 3, 2).conj(),
        )
        return max(float(np.max(np.abs(g))) for g in gaps) / max(self.scale, np.finfo(float).tiny)

    def contract(self, x, y, z, w) -> complex:
        """R(X, Ybar, Z, Wbar) for (1,0)-vectors given by their coordinates."""
        x, y, z, w = (np.asarray(v, dtype=complex) for v in (x, y, z, w))
        return complex(np.einsum("ijkl,i,j,k,l->", self.components, x, y.conj(), z, w.conj()))


@dataclass(frozen=True, eq=False)
class FactorTables:
    G: np.ndarray
    H: np.ndarray
    Htilde: np.ndarray
    F1: float
    F2: float
    Ftilde1: float
    Ftilde2: float
    Ftilde3: float

    def identity_residuals(self, delta: float, z: float, lam: float) -> dict[str, float]:
        """Relative residuals of the five factor identities (the A4 relation lives in metric)."""
        g, ht = self.G, self.Htilde

        def rel(lhs, rhs):
            return abs(lhs - rhs) / max(abs(lhs), abs(rhs), np.finfo(float).tiny)

        return {
            "G4=lam*G3": rel(g[3], lam * g[2]),
            "Ht3=lam*Ht2": rel(ht[2], lam * ht[1]),
            "Ht6=lam*Ht5": rel(ht[5], lam * ht[4]),
            "Ht8=lam*Ht6": rel(ht[7], lam * ht[5]),
            "Ht9=2lam*Ht7-lam^2*delta*z^2*Ht6": rel(ht[8], 2 * lam * ht[6] - lam**2 * delta * z * z * ht[5]),
        }


# -- numeric tensor -------------------------------------------------------------


def _derivative_tensors(pt, params: DomainParams, cfg: DiffConfig):
    """(g, d_k g_{i jbar} as [i,k,j], dbar_l g_{q jbar} as [q,j,l], d_k dbar_l g_{i jbar} as [i,k,j,l])."""
    jet = wirtinger_jet(log_kernel_field(params), pt, 4, cfg)
    return jet.tensor(1, 1), jet.tensor(2, 1), jet.tensor(1, 2), jet.tensor(2, 2)


def _assemble(g, t21, t12, t22):
    ginv = np.linalg.inv(g)
    quad = np.einsum("...ikp,...pq,...qjl->...ijkl", t21, ginv, t12)
    return -t22.transpose(*range(t22.ndim - 4), -4, -2, -3, -1) + quad


def curvature_numeric_batch(points, params: DomainParams, cfg: DiffConfig = EXACT) -> np.ndarray:
    """Curvature components for a batch of points, shape (..., 3, 3, 3, 3)."""
    return _assemble(*_derivative_tensors(points, params, cfg))


def curvature_numeric(pt, params: DomainParams, cfg: DiffConfig = EXACT) -> CurvatureTensor:
    return CurvatureTensor(curvature_numeric_batch(np.asarray(pt, dtype=complex), params, cfg))


# -- factor extraction on the slice ------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _slice_tensors(slice_: SlicePoint, cfg: DiffConfig):
    g, t21, t12, t22 = _derivative_tensors(slice_.point, slice_.params, cfg)
    return g.real, t21.real, t12.real, t22.real


def _require_off_axis(slice_: SlicePoint, eps: float):
    if slice_.y < eps or slice_.z < eps:
        raise AxisSingular(f"factor extraction needs y, z >= {eps:g}; got y={slice_.y}, z={slice_.z}")


def _g_prefactors(s: SlicePoint) -> np.ndarray:
    a, b, c, y, z, lam = s.a, s.b, s.c, s.y, s.z, s.params.lam
    return np.array([
        y / (b * c),
        z / (a ** (1 - lam) * b * c),
        y * a**lam / b**3,
        y * y * z / (a ** (1 - lam) * b**3),
        y * y * z / (a ** (1 - lam) * b**3),
        y * z * z / (a ** (2 - 2 * lam) * b**3),
        y * z * z / (a ** (2 - 2 * lam) * b**3),
        z / (a ** (3 - 3 * lam) * b**3),
    ])


def _h_prefactors(s: SlicePoint) -> np.ndarray:
    a, b, c, y, z, lam = s.a, s.b, s.c, s.y, s.z, s.params.lam
    return np.array([
        1 / c**2,
        a**lam / (b**2 * c),
        y * z / (a ** (1 - lam) * b**2 * c),
        1 / (a ** (2 - 2 * lam) * b**2 * c),
        a ** (2 * lam) / b**4,
        y * z / (a ** (1 - 2 * lam) * b**4),
        1 / (a ** (2 - 3 * lam) * b**4),
        y * y * z * z / (a ** (2 - 2 * lam) * b**4),
        y * z / (a ** (3 - 3 * lam) * b**4),
        1 / (a ** (4 - 4 * lam) * b**4),
    ])


def _table_values(entries: dict, lookup) -> tuple[np.ndarray, np.ndarray]:
    """Mean over each row's equal entries, and the spread between them."""
    means, spreads = [], []
    for n in sorted(entries):
        vals = np.array([lookup(e) for e in entries[n]])
        means.append(vals.mean())
        spreads.append(float(np.max(np.abs(vals - vals[0]))))
    return np.array(means), np.array(spreads)


def g_entries(slice_: SlicePoint, cfg: DiffConfig = EXACT) -> tuple[np.ndarray, np.ndarray]:
    """Raw table entries d_i g_{j kbar} for rows G1..G8 and their within-row spreads."""
    _, t21, t12, _ = _slice_tensors(slice_, cfg)

    def lookup(e):
        kind, k, i, j = e
        return t21[i - 1, k - 1, j - 1] if kind == "d" else t12[i - 1, j - 1, k - 1]

    return _table_values(G_ENTRIES, lookup)


def h_entries(slice_: SlicePoint, cfg: DiffConfig = EXACT) -> tuple[np.ndarray, np.ndarray]:
    _, _, _, t22 = _slice_tensors(slice_, cfg)
    return _table_values(H_ENTRIES, lambda e: t22[e[2] - 1, e[0] - 1, e[3] - 1, e[1] - 1])


def g_factors(slice_: SlicePoint, params: DomainParams | None = None, cfg: DiffConfig = EXACT,
              eps: float = AXIS_EPS) -> np.ndarray:
    """G1..G8 by division of the computed third derivatives by the table prefactors."""
    _require_off_axis(slice_, eps)
    vals, _ = g_entries(slice_, cfg)
    return vals / _g_prefactors(slice_)


def h_factors(slice_: SlicePoint, params: DomainParams | None = None, cfg: DiffConfig = EXACT,
              eps: float = AXIS_EPS) -> np.ndarray:
    """H1..H10 by division of the computed fourth derivatives by the table prefactors."""
    _require_off_axis(slice_, eps)
    vals, _ = h_entries(slice_, cfg)
    return vals / _h_prefactors(slice_)


def g12_closed(delta, params: DomainParams) -> tuple[float, float]:
    p, lam = params.p, params.lam
    _, _, u3, u4, u5, u6 = u_constants(params).as_tuple()
    den = u3 + u4 * delta
    g1 = (
        4 / p
        - (u5 + u6 * delta) * ((2 * p - 3) * u4 * delta + 3 * (p - 1) * u3 + p * u4) / (p * den**2)
        + (2 * (p - 1) * u6 * delta + (3 * p - 2) * u5 + p * u6) / (p * den)
    )
    g2 = 4 * lam / p + lam / p * (u5 + u6 * delta) / den - lam * delta * (1 - delta) * (u4 * u5 - u3 * u6) / den**2
    return g1, g2


def h1_closed(delta, params: DomainParams) -> float:
    u1, u2, u3, u4, u5, u6 = u_constants(params).as_tuple()
    den = u3 + u4 * delta
    return 8 + 4 * (u1 + u2 * delta) / den - 2 * (u5 + u6 * delta) ** 2 / den**2


# -- closed-form assembly ---------------------------------------------------------------


def factor_tables(slice_: SlicePoint, params: DomainParams | None = None, cfg: DiffConfig = EXACT,
                  eps: float = AXIS_EPS) -> FactorTables:
    params = params or slice_.params
    lam, d, z = params.lam, slice_.delta, slice_.z
    z2 = z * z
    G = g_factors(slice_, params, cfg, eps)
    H = h_factors(slice_, params, cfg, eps)
    A = a_factors(slice_, params)
    F1 = z2 * (G[5] - lam * d * G[4]) / (1 - d)
    F2 = (G[7] - lam * d * z2 * G[6]) / (1 - d)
    ht = np.array([
        -H[0],
        -H[1] + d * G[0] ** 2 / A.A1,
        -H[2] + G[0] * G[1] / A.A1,
        -H[3] + z2 * G[1] ** 2 / A.A1,
        -H[4] + d * G[2] ** 2 / A.A2,
        -H[5] + d * G[2] * G[4] / A.A2,
        -H[6] + d * d * z2 * G[4] ** 2 / A.A2 + d * (1 - d) * F1**2 / A.A4,
        -H[7] + G[2] * G[6] / A.A2,
        -H[8] + d * z2 * G[4] * G[6] / A.A2 + (1 - d) * F1 * F2 / A.A4,
        -H[9] + d * z2 * z2 * G[6] ** 2 / A.A2 + z2 * (1 - d) * F2**2 / A.A4,
    ])
    ft1 = (ht[3] - lam * d * z2 * ht[2]) / (1 - d)
    ft2 = (ht[6] - lam * d * z2 * ht[5]) / (1 - d)
    ft3 = (ht[9] - 4 * lam**2 * d * z2 * ht[6] + 3 * lam**3 * d * d * z2 * z2 * ht[5]) / (1 - d) ** 2
    return FactorTables(G, H, ht, float(F1), float(F2), float(ft1), float(ft2), float(ft3))


def curvature_prefactors(slice_: SlicePoint) -> np.ndarray:
    """Prefactors multiplying Htilde_1..Htilde_10 in the slice curvature components."""
    a, b, c, y, z, lam = slice_.a, slice_.b, slice_.c, slice_.y, slice_.z, slice_.params.lam
    return np.array([
        1 / c**2,
        a**lam / (b**2 * c),
        y * z * a ** (lam - 1) / (b**2 * c),
        a ** (2 * lam - 2) / (b**2 * c),
        a ** (2 * lam) / b**4,
        y * z * a ** (2 * lam - 1) / b**4,
        a ** (3 * lam - 2) / b**4,
        a ** (2 * lam - 2) * y * y * z * z / b**4,
        a ** (3 * lam - 3) * y * z / b**4,
        a ** (4 * lam - 4) / b**4,
    ])


def _orbit(idx):
    i, j, k, l = idx
    seeds = {(i, j, k, l), (j, i, l, k)}
    out = set()
    for s in seeds:
        i, j, k, l = s
        out |= {(i, j, k, l), (k, j, i, l), (i, l, k, j), (k, l, i, j)}
    return out


def curvature_closed_slice(slice_: SlicePoint, params: DomainParams | None = None, cfg: DiffConfig = EXACT,
                           eps: float = AXIS_EPS) -> tuple[CurvatureTensor, FactorTables]:
    """Slice curvature assembled from prefactor x Htilde; every other component is zero."""
    params = params or slice_.params
    tables = factor_tables(slice_, params, cfg, eps)
    values = curvature_prefactors(slice_) * tables.Htilde
    r = np.zeros((3, 3, 3, 3), dtype=complex)
    for n, base in R_BASE.items():
        for idx in _orbit(tuple(i - 1 for i in base)):
            r[idx] = values[n - 1]
    return CurvatureTensor(r), tables


def zero_pattern_mask() -> np.ndarray:
    """True where the slice curvature vanishes identically."""
    mask = np.ones((3, 3, 3, 3), dtype=bool)
    for base in R_BASE.values():
        for idx in _orbit(tuple(i - 1 for i in base)):
            mask[idx] = False
    return mask


def frame_normalised(r: np.ndarray, g: np.ndarray) -> np.ndarray:
    """R_{ijkl} / sqrt(g_ii g_jj g_kk g_ll): components in units of the diagonal metric scale."""
    s = 1 / np.sqrt(np.abs(np.diagonal(g, axis1=-2, axis2=-1)))
    return r * np.einsum("...i,...j,...k,...l->...ijkl", s, s, s, s)


def f_limits(params: DomainParams) -> tuple[float, float]:
    p, lam = params.p, params.lam
    return lam * (3 + 1 / p), 2 * lam**2 * (1 + 3 * p) / p


def ftilde_limits(params: DomainParams) -> tuple[float, float, float]:
    p, lam = params.p, params.lam
    return -4 * lam * (2 + p) / (p * (1 + 2 * p)), -lam * (3 + 1 / p), -2 * lam**2 * (3 + 1 / p)


def hx_closed(delta, params: DomainParams) -> float:
    """H(X) = -H1 / A1^2, needing only the closed H1 and A1; finite at delta = 1."""
    _, _, u3, u4, u5, u6 = u_constants(params).as_tuple()
    a1 = (u5 + u6 * delta) / (u3 + u4 * delta) + 4
    return -h1_closed(delta, params) / a1**2


def boundary_factor_samples(params: DomainParams, z: float = 0.5, gaps=F_GAPS, cfg: DiffConfig = EXACT):
    """Factor tables at delta = 1 - gap along the slice line of fixed z."""
    return [factor_tables(SlicePoint.from_delta(1 - h, z, params), params, cfg) for h in gaps]


def extrapolated_f_limits(params: DomainParams, z: float = 0.5, gaps=F_GAPS, cfg: DiffConfig = EXACT):
    """(F1, F2, Ft1, Ft2, Ft3, H(X)) extrapolated to delta -> 1, with error estimates."""
    rows = []
    for h, t in zip(gaps, boundary_factor_samples(params, z, gaps, cfg)):
        a1 = a_factors_at(1 - h, z, params).A1
        rows.append([t.F1, t.F2, t.Ftilde1, t.Ftilde2, t.Ftilde3, t.Htilde[0] / a1**2])
    return neville_at_zero(gaps, rows)


def all_index_tuples():
    return itertools.product(range(3), repeat=4)
