"""Orthonormal frames, holomorphic sectional and bisectional curvature, Ricci.

Sign convention: R_{i jbar k lbar} = -d_k dbar_l g_{i jbar} + g^{q pbar} (d_k g_{i pbar})(dbar_l g_{q jbar}),
so the unit ball (p = lambda = 1) has holomorphic sectional curvature -1/2,
bisectional curvature -1/4 and Ric = -g.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import jets
from .config import ScanSpec
from .curvature import CurvatureTensor, curvature_closed_slice, curvature_numeric, curvature_numeric_batch
from .diffengine import EXACT, DiffConfig, ReinhardtField, wirtinger_jet
from .domain import DomainParams, SlicePoint, _log_kernel_scaled, log_kernel_field
from .errors import Degenerate, NearBoundary, ZeroVector
from .metric import HermitianMatrix3, a_factors, metric_closed, metric_numeric

log = logging.getLogger(__name__)

PIVOT_FLOOR = 1e-300
HSC_NAMES = ("HX", "HY", "HZ", "BXY", "BXZ", "BYZ")
# (first, second, third, fourth) frame labels of R(A, Bbar, C, Dbar) that vanish on the slice
VANISHING = (
    "XXXY", "YYYX", "ZZZY", "YXYX",
    "XXXZ", "YYYZ", "ZZZX", "ZXZX",
    "XXYZ", "YYXZ", "ZZXY", "ZYZY",
)
KE_SAMPLE = ((0.1, 0.2), (0.3, 0.1), (0.2, 0.5), (0.5, 0.4), (0.6, 0.6))


@dataclass(frozen=True)
class OrthonormalFrame:
    k1: float
    t1: complex
    t2: complex
    s1: complex
    s2: complex
    s3: complex

    @property
    def X(self) -> np.ndarray:
        return np.array([self.k1, 0, 0], dtype=complex)

    @property
    def Y(self) -> np.ndarray:
        return np.array([self.t1, self.t2, 0], dtype=complex)

    @property
    def Z(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3], dtype=complex)

    def vectors(self) -> dict[str, np.ndarray]:
        return {"X": self.X, "Y": self.Y, "Z": self.Z}

    def gram(self, metric: HermitianMatrix3) -> np.ndarray:
        """Matrix of g(U, Vbar) over U, V in (X, Y, Z); the identity for an orthonormal frame."""
        basis = np.stack([self.X, self.Y, self.Z])
        return basis @ metric.entries @ basis.conj().T


def _inner(g: np.ndarray, u: np.ndarray, v: np.ndarray) -> complex:
    """g(U, Vbar) = sum g_{i jbar} U^i conj(V^j)."""
    return complex(u @ g @ v.conj())


def gram_schmidt(metric: HermitianMatrix3) -> OrthonormalFrame:
    """Gram-Schmidt on d1, d2, d3 in that order.

    Coefficients follow the usual construction X = d1 / sqrt(g11),
    Y ~ d2 / sqrt(g22) - g(., X) X, and so on.  Inner products carry the
    conjugates a Hermitian metric needs; on the slice all entries are real
    and the conjugates change nothing.
    """
    g = metric.entries
    diag = np.real(np.diagonal(g))
    if np.any(~np.isfinite(diag)) or np.any(diag <= PIVOT_FLOOR):
        raise Degenerate(f"metric diagonal {diag} has a non-positive or underflowing pivot")
    basis = []
    for i in range(3):
        e = np.zeros(3, dtype=complex)
        e[i] = 1 / np.sqrt(diag[i])
        v = e - sum(_inner(g, e, u) * u for u in basis)
        n2 = _inner(g, v, v).real
        if not n2 > PIVOT_FLOOR or n2 < 1e-14:
            raise Degenerate(f"Gram-Schmidt pivot {i + 1} collapsed (squared norm {n2:.3e})")
        basis.append(v / np.sqrt(n2))
    x, y, z = basis
    return OrthonormalFrame(float(x[0].real), complex(y[0]), complex(y[1]), complex(z[0]), complex(z[1]), complex(z[2]))


@dataclass(frozen=True)
class HSCReport:
    HX: float
    HY: float
    HZ: float
    BXY: float
    BXZ: float
    BYZ: float
    zero_residuals: float
    source: str

    def values(self) -> tuple[float, ...]:
        return tuple(getattr(self, k) for k in HSC_NAMES)


def _frame_contractions(r: np.ndarray, frame: OrthonormalFrame):
    vec = frame.vectors()

    def c(spec):
        a, b, cc, d = (vec[s] for s in spec)
        return complex(np.einsum("ijkl,i,j,k,l->", r, a, b.conj(), cc, d.conj()))

    six = (c("XXXX"), c("YYYY"), c("ZZZZ"), c("XXYY"), c("XXZZ"), c("YYZZ"))
    zeros = max(abs(c(s)) for s in VANISHING)
    return [v.real for v in six], zeros


def hsc_report(slice_: SlicePoint, params: DomainParams | None = None, source: str = "closed",
               cfg: DiffConfig = EXACT) -> HSCReport:
    """The six sectional/bisectional curvatures in the frame (X, Y, Z) at a slice point.

    ``closed`` uses the Htilde / Ftilde ratios; ``numeric`` contracts
    :func:`curvature_numeric` with the frame of the numerically computed
    metric.  Either way ``zero_residuals`` is the largest of the twelve
    combinations that vanish on the slice, evaluated by contraction.
    """
    params = params or slice_.params
    if source == "closed":
        tensor, t = curvature_closed_slice(slice_, params, cfg)
        A = a_factors(slice_, params)
        frame = gram_schmidt(metric_closed(slice_, params))
        _, zeros = _frame_contractions(tensor.components, frame)
        ht = t.Htilde
        six = (ht[0] / A.A1**2, ht[4] / A.A2**2, t.Ftilde3 / A.A4**2,
               ht[1] / (A.A1 * A.A2), t.Ftilde1 / (A.A1 * A.A4), t.Ftilde2 / (A.A2 * A.A4))
    elif source == "numeric":
        g, _ = metric_numeric(slice_.point, params, cfg)
        frame = gram_schmidt(g)
        six, zeros = _frame_contractions(curvature_numeric(slice_.point, params, cfg).components, frame)
    else:
        raise ValueError(f"source must be 'closed' or 'numeric', got {source!r}")
    return HSCReport(*map(float, six), float(zeros), source)


def hsc_direction(pt, params: DomainParams, v, cfg: DiffConfig = EXACT) -> float:
    """R(v, vbar, v, vbar) / g(v, vbar)^2 at any interior point."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,) or not np.any(v != 0):
        raise ZeroVector("direction must be a nonzero complex 3-vector")
    g, _ = metric_numeric(pt, params, cfg)
    norm2 = _inner(g.entries, v, v).real
    r = curvature_numeric(pt, params, cfg)
    return float(r.contract(v, v, v, v).real / norm2**2)


# -- boundary scan ----------------------------------------------------------------------

SCAN_COLUMNS = ("y", "z", "delta") + HSC_NAMES + ("zero_residuals", "flag")


def scan_cell(params: DomainParams, z: float, delta: float, cfg: DiffConfig = EXACT) -> dict:
    """One boundary-scan row: numeric frame curvatures at the slice point with given (z, delta)."""
    sp = SlicePoint.from_delta(float(delta), float(z), params)
    row = {"y": sp.y, "z": float(z), "delta": float(delta)}
    try:
        g, _ = metric_numeric(sp.point, params, cfg)
        frame = gram_schmidt(g)
        six, zeros = _frame_contractions(curvature_numeric_batch(sp.point, params, cfg), frame)
        if not np.all(np.isfinite(six)):
            raise NearBoundary("non-finite curvature")
        row.update(zip(HSC_NAMES, six), zero_residuals=zeros, flag="")
    except (NearBoundary, Degenerate, np.linalg.LinAlgError) as exc:
        log.warning("scan cell z=%g delta=%g skipped: %s", z, delta, exc)
        row.update({k: float("nan") for k in HSC_NAMES}, zero_residuals=float("nan"), flag="near_boundary")
    return row


def scan_cells(spec: ScanSpec) -> list[tuple[float, float]]:
    """(z, delta) pairs in row order: z outer, delta inner."""
    return [(float(z), float(d)) for z in spec.zs() for d in spec.deltas()]


def boundary_scan(params: DomainParams, spec: ScanSpec = ScanSpec(), cfg: DiffConfig = EXACT) -> list[dict]:
    """Numeric frame curvatures on the (z, delta) scan grid, rows in grid order.

    Cells where the kernel is too ill-conditioned to evaluate carry
    ``flag = "near_boundary"`` and NaN values instead of aborting the scan.
    """
    return [scan_cell(params, z, d, cfg) for z, d in scan_cells(spec)]


def scan_sup(rows: list[dict]) -> dict[str, float]:
    """Largest |value| per curvature column over unflagged rows."""
    ok = [r for r in rows if not r["flag"]]
    return {k: max(abs(r[k]) for r in ok) for k in HSC_NAMES}


def scan_drift(params: DomainParams, spec: ScanSpec = ScanSpec(), cfg: DiffConfig = EXACT):
    """Sup norms on ``spec`` and on its 2x refinement, and the largest relative change."""
    coarse = scan_sup(boundary_scan(params, spec, cfg))
    fine = scan_sup(boundary_scan(params, spec.refine(), cfg))
    drift = max(abs(fine[k] - coarse[k]) / max(abs(fine[k]), np.finfo(float).tiny) for k in HSC_NAMES)
    return coarse, fine, drift


# -- Ricci -------------------------------------------------------------------------------


def log_det_metric_field(params: DomainParams) -> ReinhardtField:
    """log det g as a function of nu.

    For a potential L(nu), det(d_i dbar_j L) = det(diag(L_i) + diag(nu) Hess L),
    which depends on nu only.  The nu-jet of L is taken two orders higher than
    requested and differentiated exactly, so no composite stencil is needed.
    ``of_nu`` expects either plain arrays or the identity jets diffengine passes.
    """
    base_field = log_kernel_field(params)

    def of_nu(nu1, nu2, nu3):
        is_jet = isinstance(nu1, jets.Jet)
        order = nu1.space.order if is_jet else 0
        base = np.stack([np.asarray(jets.value(v), dtype=float) for v in (nu1, nu2, nu3)], axis=-1)
        lv = _log_kernel_scaled(*jets.Jet.variables(base, order + 2), params.p, params.lam)
        d1 = [lv.partial(i) for i in range(3)]
        d2 = [[d1[i].partial(j) for j in range(3)] for i in range(3)]
        nu = jets.Jet.variables(base, order)
        m = [[(d1[i].truncate(order) if i == j else 0) + nu[i] * d2[i][j] for j in range(3)] for i in range(3)]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        out = jets.log(det)
        return out if is_jet else out.value

    return ReinhardtField(of_nu, base_field.nu_contains, base_field.nu_scale, name=f"logdet{params}")


def ricci(pt, params: DomainParams, cfg: DiffConfig = EXACT) -> HermitianMatrix3:
    """Ric_{i jbar} = -d_i dbar_j log det g."""
    ric = -wirtinger_jet(log_det_metric_field(params), pt, 2, cfg).tensor(1, 1)
    return HermitianMatrix3(0.5 * (ric + ric.conj().T), "ricci")


def ricci_trace(pt, params: DomainParams, cfg: DiffConfig = EXACT) -> np.ndarray:
    """Ric_{k lbar} = g^{i jbar} R_{i jbar k lbar}, the independent cross-check of :func:`ricci`."""
    g, _ = metric_numeric(pt, params, cfg)
    r = curvature_numeric(pt, params, cfg).components
    return np.einsum("ji,ijkl->kl", np.linalg.inv(g.entries), r)


def ke_residual(params: DomainParams, sample=KE_SAMPLE, cfg: DiffConfig = EXACT,
                route: str = "logdet") -> tuple[float, float]:
    """Einstein constant c and max_n max|Ric - c g| / max|g| over slice points (y, z).

    Each point is normalised by its own max|g|.  A least-squares c seeds a
    bounded scalar minimisation of the max-norm, which is convex in c.
    ``route`` picks the Ricci evaluation: ``logdet`` (:func:`ricci`) or
    ``trace`` (:func:`ricci_trace`, the independent oracle).
    """
    if route not in ("logdet", "trace"):
        raise ValueError(f"route must be 'logdet' or 'trace', got {route!r}")
    ric, met = [], []
    for y, z in sample:
        pt = SlicePoint(y, z, params).point
        g, _ = metric_numeric(pt, params, cfg)
        s = np.max(np.abs(g.entries))
        r = ricci(pt, params, cfg).entries if route == "logdet" else ricci_trace(pt, params, cfg)
        met.append(g.entries.ravel() / s)
        ric.append(r.ravel() / s)
    ric, met = np.concatenate(ric), np.concatenate(met)
    c_ls = float(np.real(np.vdot(met, ric) / np.vdot(met, met)))

    def worst(c):
        return float(np.max(np.abs(ric - c * met)))

    span = max(1.0, abs(c_ls))
    res = minimize_scalar(worst, bounds=(c_ls - span, c_ls + span), method="bounded",
                          options={"xatol": 1e-12 * span})
    c_best = float(res.x) if worst(res.x) <= worst(c_ls) else c_ls
    return c_best, worst(c_best)


def space_form_tensor(g: np.ndarray) -> np.ndarray:
    """-(1/4)(g_{i jbar} g_{k lbar} + g_{i lbar} g_{k jbar}), the unit-ball curvature."""
    return -0.25 * (np.einsum("ij,kl->ijkl", g, g) + np.einsum("il,kj->ijkl", g, g))


__all__ = [
    "CurvatureTensor",
    "HSCReport",
    "OrthonormalFrame",
    "boundary_scan",
    "gram_schmidt",
    "hsc_direction",
    "hsc_report",
    "ke_residual",
    "log_det_metric_field",
    "ricci",
    "ricci_trace",
    "scan_cell",
    "scan_cells",
    "scan_drift",
    "scan_sup",
    "space_form_tensor",
]
