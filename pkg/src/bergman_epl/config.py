"""Grid defaults and tolerances, kept in one place so every run is reproducible."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import DomainParams, SlicePoint

PARAM_VALUES = (0.2, 0.5, 1.0, 2.0, 5.0)
SCAN_PARAM_VALUES = (0.2, 1.0, 5.0)
DEFAULT_YZ = tuple(round(0.05 + 0.1 * k, 2) for k in range(10))
ORACLE_DELTA_CAP = 0.95
SCAN_DELTA_CAP = 0.999
MAX_DELTA_CAP = 1 - 1e-3


@dataclass(frozen=True)
class Tolerances:
    kernel_factored: float = 1e-12
    u_sums: float = 1e-14
    metric_oracle: float = 1e-6
    inverse_product: float = 1e-10
    det_identity: float = 1e-10
    det_ratio: float = 1e-8
    det_ratio_limit: float = 1e-2
    a4_display: float = 1e-10
    identities: float = 1e-8
    limits_a: float = 1e-4
    limits_f: float = 1e-3
    hx_limit: float = 1e-3
    symmetry: float = 1e-8
    curvature_agreement: float = 1e-6
    hsc_agreement: float = 1e-5
    frame: float = 1e-10
    space_form: float = 1e-6
    ke_ball: float = 1e-6
    scan_drift: float = 1e-2


TOL = Tolerances()


@dataclass(frozen=True)
class GridSpec:
    """Slice grid: all (y, z) pairs with delta = y^2 / (1 - z^2)^lambda <= delta_cap."""

    ys: tuple[float, ...] = DEFAULT_YZ
    zs: tuple[float, ...] = DEFAULT_YZ
    delta_cap: float = ORACLE_DELTA_CAP

    def __post_init__(self):
        if not 0 < self.delta_cap <= MAX_DELTA_CAP:
            raise ValueError(f"delta cap must lie in (0, {MAX_DELTA_CAP}], got {self.delta_cap}")
        if len(self.ys) < 2 or len(self.zs) < 2:
            raise ValueError("grid counts must be >= 2")

    @classmethod
    def linspace(cls, rows: int, cols: int, lo: float = 0.05, hi: float = 0.95, delta_cap: float = ORACLE_DELTA_CAP):
        if rows < 2 or cols < 2:
            raise ValueError("grid counts must be >= 2")
        ys = tuple(float(v) for v in np.linspace(lo, hi, rows))
        zs = tuple(float(v) for v in np.linspace(lo, hi, cols))
        return cls(ys, zs, delta_cap)

    def cells(self, params: DomainParams):
        """(y, z, slice point or None) in row-major order; None marks delta > cap."""
        for y in self.ys:
            for z in self.zs:
                a = 1 - z * z
                delta = y * y / a**params.lam
                yield y, z, (SlicePoint(y, z, params) if delta <= self.delta_cap else None)

    def points(self, params: DomainParams) -> list[SlicePoint]:
        return [sp for _, _, sp in self.cells(params) if sp is not None]


def param_grid(values=PARAM_VALUES) -> list[DomainParams]:
    return [DomainParams(p, lam) for p in values for lam in values]


@dataclass(frozen=True)
class ScanSpec:
    """Boundary-scan grid in (z, delta): delta approaches the cap geometrically.

    ``refine()`` doubles the resolution while keeping every existing node.
    """

    z_count: int = 5
    delta_count: int = 9
    z_lo: float = 0.05
    z_hi: float = 0.95
    delta_lo: float = 0.05
    delta_cap: float = SCAN_DELTA_CAP
    ys_floor: float = field(default=0.0)

    def __post_init__(self):
        if not 0 < self.delta_cap <= MAX_DELTA_CAP:
            raise ValueError(f"delta cap must lie in (0, {MAX_DELTA_CAP}], got {self.delta_cap}")
        if self.z_count < 2 or self.delta_count < 2:
            raise ValueError("grid counts must be >= 2")

    def zs(self) -> np.ndarray:
        return np.linspace(self.z_lo, self.z_hi, self.z_count)

    def deltas(self) -> np.ndarray:
        # log-uniform in (1 - delta) between 1 - delta_lo and 1 - delta_cap
        t = np.linspace(0.0, 1.0, self.delta_count)
        gap = (1 - self.delta_lo) * ((1 - self.delta_cap) / (1 - self.delta_lo)) ** t
        return 1 - gap

    def refine(self) -> "ScanSpec":
        return ScanSpec(2 * self.z_count - 1, 2 * self.delta_count - 1, self.z_lo, self.z_hi,
                        self.delta_lo, self.delta_cap)
