"""Batch command line: ``bergman-epl {kernel,metric,curvature,hsc,disk} [options]``.

Each subcommand evaluates a grid of cells, checks every row against its
tolerances and writes CSV or JSON.  Exit status: 0 when every unflagged check
passes, 1 when a check fails, 2 on usage errors.  Logs go to stderr only, and
output bytes depend only on the configuration (not on ``--workers``).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import golden
from .config import DEFAULT_YZ, MAX_DELTA_CAP, ORACLE_DELTA_CAP, SCAN_DELTA_CAP, TOL, GridSpec, ScanSpec
from .curvature import (
    AXIS_EPS,
    curvature_closed_slice,
    curvature_numeric,
    extrapolated_f_limits,
    f_limits,
    frame_normalised,
    ftilde_limits,
    g12_closed,
    h1_closed,
    hx_closed,
    zero_pattern_mask,
)
from .diffengine import MODES, DiffConfig
from .diskbounds import (
    GRAD_CONVENTIONS,
    INEQUALITY_P,
    BoundsParams,
    constants,
    disk_inequality,
    heat_lower_bound,
    phi,
    phi_1d,
    phi_2d,
    phi_discrepancy,
    ring_integral,
    ring_integral_closed,
)
from .domain import (
    DomainParams,
    NuPoint,
    SlicePoint,
    abc,
    bergman_kernel,
    kernel_factored,
    random_interior_nu,
    u_constants,
)
from .errors import BergmanError, InvalidParams
from .frame import HSC_NAMES, hsc_report, ke_residual, scan_cell, scan_cells
from .metric import (
    a4_explicit,
    a_factors,
    det_identity_residual,
    det_ratio,
    det_ratio_direct,
    det_ratio_limit,
    extrapolated_limits_A,
    inverse_metric_closed,
    limits_A,
    metric_closed,
    metric_numeric,
    unit_ball_g11,
)
from .report import Report, add_check, finish_row, to_csv, to_json

log = logging.getLogger("bergman_epl")

COMMANDS = ("kernel", "metric", "curvature", "hsc", "disk")
DEFAULT_P_LIST = INEQUALITY_P
NAN = float("nan")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: float = 1.0
    lam: float = 1.0
    grid: tuple[int, int] | None = None
    delta_cap: float | None = None
    tol: float | None = None
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    samples: int = 0
    ke: bool = False
    p_list: tuple[float, ...] = DEFAULT_P_LIST
    workers: int = 1
    diff_mode: str = "reinhardt"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.delta_cap is not None and not 0 < self.delta_cap <= MAX_DELTA_CAP:
            raise UsageError(f"--delta-cap must lie in (0, 1-1e-3], got {self.delta_cap}")
        if self.grid is not None and min(self.grid) < 2:
            raise UsageError(f"--grid counts must be >= 2, got {self.grid}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError(f"--tol must be > 0, got {self.tol}")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.samples < 0:
            raise UsageError("--samples must be >= 0")
        if any(not q >= 2 for q in self.p_list):
            raise UsageError(f"--p-list entries must be >= 2, got {self.p_list}")
        if self.diff_mode not in MODES:
            raise UsageError(f"--diff-mode must be one of {MODES}")

    @property
    def params(self) -> DomainParams:
        return DomainParams(self.p, self.lam)

    def cap(self, default: float) -> float:
        return default if self.delta_cap is None else self.delta_cap

    def grid_spec(self) -> GridSpec:
        cap = self.cap(ORACLE_DELTA_CAP)
        if self.grid is None:
            return GridSpec(DEFAULT_YZ, DEFAULT_YZ, cap)
        return GridSpec.linspace(*self.grid, delta_cap=cap)

    def scan_spec(self) -> ScanSpec:
        zc, dc = self.grid if self.grid is not None else (ScanSpec.z_count, ScanSpec.delta_count)
        return ScanSpec(z_count=zc, delta_count=dc, delta_cap=self.cap(SCAN_DELTA_CAP))

    def echo(self) -> dict:
        """Configuration as echoed in JSON output; omits settings that must not change the bytes."""
        d = asdict(self)
        for k in ("out", "workers", "fmt"):
            d.pop(k)
        d["lambda"] = d.pop("lam")
        d["grid"] = list(self.grid) if self.grid else None
        d["p_list"] = list(self.p_list)
        return d


def _pmap(fn, items, workers: int):
    """Order-preserving map, optionally over worker processes."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def _cell_status(y: float, z: float, params: DomainParams, cap: float) -> tuple[str, float]:
    a = 1 - z * z
    if a <= 0 or y * y >= a**params.lam:
        return "exterior", NAN
    delta = y * y / a**params.lam
    return ("beyond_delta_cap" if delta > cap else ""), delta


def _flagged(row: dict, flag: str) -> dict:
    return finish_row(row, "none", NAN, NAN, flag)


# -- kernel ----------------------------------------------------------------------------------


def _kernel_row(args) -> dict:
    nu, params, tol, y, z, delta = args
    row = {"y": y, "z": z, "delta": delta, "nu1": float(nu[0]), "nu2": float(nu[1]), "nu3": float(nu[2])}
    try:
        b_direct = float(bergman_kernel(NuPoint(*nu), params))
        n, d, b_fact = (float(v) for v in kernel_factored(NuPoint(*nu), params))
    except BergmanError as exc:
        log.warning("kernel cell skipped: %s", exc)
        row.update(kernel_direct=NAN, n_sum=NAN, d_val=NAN, kernel_factored=NAN)
        return _flagged(row, "near_boundary")
    row.update(kernel_direct=b_direct, n_sum=n, d_val=d, kernel_factored=b_fact)
    resid = abs(b_direct - b_fact) / b_direct
    add_check(row, "factored", resid, tol)
    add_check(row, "positive", 0.0 if b_direct > 0 else 1.0, 0.0)
    return finish_row(row, "closed", resid, tol)


def cmd_kernel(cfg: RunConfig) -> Report:
    params, tol = cfg.params, cfg.tol or TOL.kernel_factored
    grid = cfg.grid_spec()
    jobs, rows_pre = [], []
    for y, z in ((y, z) for y in grid.ys for z in grid.zs):
        flag, delta = _cell_status(y, z, params, grid.delta_cap)
        if flag:
            rows_pre.append(_flagged({"y": y, "z": z, "delta": delta, "nu1": NAN, "nu2": NAN, "nu3": NAN,
                                      "kernel_direct": NAN, "n_sum": NAN, "d_val": NAN, "kernel_factored": NAN},
                                     flag))
            continue
        a, b, _ = abc(0.0, y * y, z * z, params)
        # off-slice: |x|^2 halfway to the boundary, so every monomial of N contributes
        nu = (0.5 * b ** (1 / params.p), y * y, z * z)
        rows_pre.append(None)
        jobs.append((nu, params, tol, y, z, delta))
    if cfg.samples:
        rng = np.random.default_rng(cfg.seed)
        for nu in random_interior_nu(params, cfg.samples, rng, delta_cap=grid.delta_cap):
            a = 1 - nu[2]
            rows_pre.append(None)
            jobs.append((tuple(float(v) for v in nu), params, tol, math.sqrt(nu[1]), math.sqrt(nu[2]),
                         float(nu[1] / a**params.lam)))
    done = iter(_pmap(_kernel_row, jobs, cfg.workers))
    rows = [r if r is not None else next(done) for r in rows_pre]
    report = Report("kernel", cfg.echo(), rows)
    u = u_constants(params)
    lam = params.lam
    s135, s246 = math.fsum((u.u1, u.u3, u.u5)), math.fsum((u.u2, u.u4, u.u6))
    report.check("u135_sum", abs(math.fsum((u.u1, u.u3, u.u5, -6 * lam))) / (6 * lam), TOL.u_sums, lhs=s135, expected=6 * lam)
    report.check("u246_sum", abs(s246) / max(map(abs, u.as_tuple())), TOL.u_sums, lhs=s246, expected=0.0)
    report.extras["u_constants"] = dict(zip(("u1", "u2", "u3", "u4", "u5", "u6"), u.as_tuple()))
    return report


# -- metric ----------------------------------------------------------------------------------


def _metric_row(args) -> dict:
    y, z, params, tol, mode = args
    sp = SlicePoint(y, z, params)
    A = a_factors(sp)
    g = metric_closed(sp).entries.real
    row = {"y": y, "z": z, "delta": sp.delta, "A1": A.A1, "A2": A.A2, "A3": A.A3, "A4": A.A4,
           "g11": g[0, 0], "g22": g[1, 1], "g23": g[1, 2], "g33": g[2, 2]}
    gn, err = metric_numeric(sp.point, params, DiffConfig(mode=mode))
    gn = gn.entries
    mask = g != 0
    rel = np.abs(gn[mask] - g[mask]) / np.abs(g[mask])
    est = float(np.max(err[mask] / np.abs(g[mask])))
    row.update(g11_numeric=gn[0, 0].real, g22_numeric=gn[1, 1].real, g23_numeric=gn[1, 2].real,
               g33_numeric=gn[2, 2].real)
    add_check(row, "metric_oracle", float(np.max(rel)), max(tol, est))
    add_check(row, "off_pattern", float(np.max(np.abs(gn[~mask]))) / np.trace(g), TOL.metric_oracle)
    inv = inverse_metric_closed(sp).entries.real
    add_check(row, "inverse", float(np.max(np.abs(g @ inv - np.eye(3)))), TOL.inverse_product)
    add_check(row, "det_identity", det_identity_residual(sp), TOL.det_identity)
    ratio, direct = det_ratio(sp), det_ratio_direct(sp)
    row.update(det_ratio=ratio, det_ratio_direct=direct)
    add_check(row, "det_ratio", abs(ratio - direct) / abs(ratio), TOL.det_ratio)
    a4x = a4_explicit(sp.delta, params)
    add_check(row, "a4_display", abs(a4x - A.A4) / abs(A.A4), TOL.a4_display)
    pd = bool(np.all(np.linalg.eigvalsh(g) > 0))
    add_check(row, "positive_definite", 0.0 if pd else 1.0, 0.0)
    if params.p == 1 and params.lam == 1:
        ref = unit_ball_g11(y, z)
        add_check(row, "ball_g11", abs(g[0, 0] - ref) / ref, 1e-8)
    return finish_row(row, f"closed_vs_{mode}", est, max(tol, est))


def _slice_jobs(cfg: RunConfig, grid: GridSpec, extra):
    params = cfg.params
    jobs, rows_pre = [], []
    for y, z in ((y, z) for y in grid.ys for z in grid.zs):
        flag, delta = _cell_status(y, z, params, grid.delta_cap)
        if flag:
            rows_pre.append(_flagged({"y": y, "z": z, "delta": delta}, flag))
        else:
            rows_pre.append(None)
            jobs.append((y, z, params) + extra)
    return jobs, rows_pre


def _merge(rows_pre, results):
    done = iter(results)
    return [r if r is not None else next(done) for r in rows_pre]


def cmd_metric(cfg: RunConfig) -> Report:
    params, tol = cfg.params, cfg.tol or TOL.metric_oracle
    jobs, rows_pre = _slice_jobs(cfg, cfg.grid_spec(), (tol, cfg.diff_mode))
    report = Report("metric", cfg.echo(), _merge(rows_pre, _pmap(_metric_row, jobs, cfg.workers)))
    closed = np.array(limits_A(params))
    extrap, err = extrapolated_limits_A(params)
    for name, c, e, ee in zip(("limA1", "limA2", "limA4"), closed, extrap, err):
        report.check(name, abs(e - c) / abs(c), TOL.limits_a, closed=float(c), extrapolated=float(e),
                     error_estimate=float(ee))
    lim = det_ratio_limit(params)
    near = det_ratio(SlicePoint.from_delta(0.999, 0.5, params))
    report.check("det_ratio_limit", abs(near - lim) / lim, TOL.det_ratio_limit, closed_limit=lim, at_delta_0999=near)
    return report


# -- curvature --------------------------------------------------------------------------------


def _curvature_row(args) -> dict:
    y, z, params, tol = args
    sp = SlicePoint(y, z, params)
    row = {"y": y, "z": z, "delta": sp.delta}
    if y < AXIS_EPS or z < AXIS_EPS:
        row.update({f"G{i}": NAN for i in range(1, 9)})
        return _flagged(row, "axis")
    tensor, t = curvature_closed_slice(sp)
    row.update({f"G{i + 1}": float(v) for i, v in enumerate(t.G)})
    row.update({f"H{i + 1}": float(v) for i, v in enumerate(t.H)})
    row.update({f"Ht{i + 1}": float(v) for i, v in enumerate(t.Htilde)})
    row.update(F1=t.F1, F2=t.F2, Ft1=t.Ftilde1, Ft2=t.Ftilde2, Ft3=t.Ftilde3)
    for name, res in t.identity_residuals(sp.delta, z, params.lam).items():
        add_check(row, "id_" + name.split("=")[0].lower(), res, tol)
    A = a_factors(sp)
    lam = params.lam
    lhs = a4_explicit(sp.delta, params) * (1 - sp.delta)
    rhs = A.A3 - lam**2 * sp.delta * z * z * A.A2
    add_check(row, "id_a4", abs(lhs - rhs) / max(abs(lhs), abs(rhs)), tol)
    g1, g2 = g12_closed(sp.delta, params)
    add_check(row, "g1_closed", abs(g1 - t.G[0]) / abs(g1), TOL.curvature_agreement)
    add_check(row, "g2_closed", abs(g2 - t.G[1]) / abs(g2), TOL.curvature_agreement)
    h1 = h1_closed(sp.delta, params)
    add_check(row, "h1_closed", abs(h1 - t.H[0]) / max(abs(h1), 1.0), TOL.curvature_agreement)
    num = curvature_numeric(sp.point, params)
    g = metric_closed(sp).entries.real
    diff = frame_normalised(num.components - tensor.components, g)
    add_check(row, "closed_vs_numeric", float(np.max(np.abs(diff))), TOL.curvature_agreement)
    zeros = frame_normalised(num.components, g)[zero_pattern_mask()]
    add_check(row, "zero_pattern", float(np.max(np.abs(zeros))), TOL.curvature_agreement)
    add_check(row, "symmetry", num.symmetry_residual(), TOL.symmetry)
    return finish_row(row, "closed_vs_jet", float(np.max(np.abs(diff))), tol)


def cmd_curvature(cfg: RunConfig) -> Report:
    params, tol = cfg.params, cfg.tol or TOL.identities
    jobs, rows_pre = _slice_jobs(cfg, cfg.grid_spec(), (tol,))
    report = Report("curvature", cfg.echo(), _merge(rows_pre, _pmap(_curvature_row, jobs, cfg.workers)))
    lim, err = extrapolated_f_limits(params)
    closed = f_limits(params) + ftilde_limits(params) + (hx_closed(1.0, params),)
    names = ("limF1", "limF2", "limFt1", "limFt2", "limFt3", "limHX")
    for name, c, e, ee in zip(names, closed, lim, err):
        report.check(name, abs(e - c) / abs(c), TOL.limits_f, closed=float(c), extrapolated=float(e),
                     error_estimate=float(ee))
    return report


# -- hsc --------------------------------------------------------------------------------------


def _hsc_row(args) -> dict:
    z, delta, params, tol = args
    row = scan_cell(params, z, delta)
    flag = row.pop("flag")
    zres = row.pop("zero_residuals")
    if flag:
        row.update({f"{k}_closed": NAN for k in HSC_NAMES})
        return _flagged(row, flag)
    scale = max(abs(row[k]) for k in HSC_NAMES)
    add_check(row, "zero_combinations", zres / scale, TOL.curvature_agreement)
    sp = SlicePoint.from_delta(delta, z, params)
    if sp.y >= AXIS_EPS and z >= AXIS_EPS:
        closed = hsc_report(sp, params, "closed")
        row.update({f"{k}_closed": v for k, v in zip(HSC_NAMES, closed.values())})
        gap = max(abs(row[k] - row[f"{k}_closed"]) for k in HSC_NAMES)
        add_check(row, "closed_vs_numeric", gap, tol)
    else:
        row.update({f"{k}_closed": NAN for k in HSC_NAMES})
    if params.p == 1 and params.lam == 1:
        target = dict(zip(HSC_NAMES, (-0.5, -0.5, -0.5, -0.25, -0.25, -0.25)))
        add_check(row, "space_form", max(abs(row[k] - v) for k, v in target.items()), TOL.space_form)
    return finish_row(row, "numeric_frame", zres, tol)


def cmd_hsc(cfg: RunConfig) -> Report:
    params, tol = cfg.params, cfg.tol or TOL.hsc_agreement
    spec = cfg.scan_spec()
    fine = spec.refine()
    cells = scan_cells(fine)
    rows_fine = _pmap(_hsc_row, [(z, d, params, tol) for z, d in cells], cfg.workers)
    # the coarse grid is every other node of the refined one
    nd = fine.delta_count
    rows = [rows_fine[i * nd + j] for i in range(0, fine.z_count, 2) for j in range(0, nd, 2)]
    report = Report("hsc", cfg.echo(), rows)

    def sup(rs):
        ok = [r for r in rs if not r["flag"]]
        return {k: max(abs(r[k]) for r in ok) for k in HSC_NAMES}

    s_coarse, s_fine = sup(rows), sup(rows_fine)
    drift = max(abs(s_fine[k] - s_coarse[k]) / s_fine[k] for k in HSC_NAMES)
    report.check("scan_drift", drift, TOL.scan_drift, sup=s_coarse, sup_refined=s_fine)
    if cfg.ke:
        c, res = ke_residual(params)
        threshold = golden.ke_threshold(params.p, params.lam)
        if params.p == 1 and params.lam == 1:
            report.check("ke_residual", res, TOL.ke_ball, c_best=c)
        elif threshold is not None:
            report.check("ke_residual", res, threshold, passed=res > threshold, c_best=c,
                         rule="residual must exceed golden threshold")
        else:
            report.extras["ke_residual"] = {"c_best": c, "residual": res, "note": "no golden threshold; reported only"}
    return report


# -- disk ----------------------------------------------------------------------------------------


def _disk_row(check, inp, value, reference, residual, tol, source, passed=None, flag="") -> dict:
    residual = float(residual)
    ok = (residual <= tol) if passed is None else bool(passed)
    row = {"check": check, "input": inp, "value": float(value), "reference": float(reference), "residual": residual}
    if not (ok and math.isfinite(residual)):
        row["_failed"] = [check]
    return finish_row(row, source, abs(residual), tol, flag)


def cmd_disk(cfg: RunConfig) -> Report:
    tol = cfg.tol or 1e-6
    rows = []
    for R in (0.0, 0.25, 0.5, 0.75, 1.0):
        closed = phi(R)
        rows.append(_disk_row("phi_1d", f"R={R:g}", phi_1d(R), closed, abs(phi_1d(R) - closed), tol, "quadrature_1d"))
        rows.append(_disk_row("phi_2d", f"R={R:g}", phi_2d(R), closed, abs(phi_2d(R) - closed), tol, "quadrature_2d"))
    rows.append(_disk_row("phi_at_0", "R=0", phi(0.0), 11 / 72, abs(phi(0.0) - 11 / 72), 1e-9, "closed"))
    rows.append(_disk_row("phi_at_1", "R=1", phi(1.0), 0.0, abs(phi(1.0)), 0.0, "closed", passed=phi(1.0) == 0.0))
    for aa in (0.3, 0.5, 1.0, 2.0):
        for bb in (0.3, 0.5, 1.0, 2.0):
            q, c = ring_integral(aa, bb), ring_integral_closed(aa, bb)
            rows.append(_disk_row("ring_integral", f"a={aa:g};b={bb:g}", q, c, abs(q - c), 1e-8, "quadrature"))
    for p in cfg.p_list:
        for conv in GRAD_CONVENTIONS:
            lhs, rhs, holds = disk_inequality(p, conv)
            rows.append(_disk_row(f"inequality_{conv}", f"p={p:g}", lhs, rhs, lhs / rhs, 0.1, "quadrature",
                                  passed=holds and lhs / rhs <= 0.1))
    gold = golden.heat_value()
    h = heat_lower_bound(BoundsParams(n=gold["n"], b=gold["b"], t=gold["t"], r=gold["r"]))
    rows.append(_disk_row("heat_golden", "n=1;b=1;t=1;r=1", h.value, gold["value"],
                          abs(h.value - gold["value"]) / gold["value"], 1e-12, "closed"))
    radii = np.linspace(0.0, 6.0, 61)
    for n in (1, 2, 3):
        vals = np.array([heat_lower_bound(BoundsParams(n=n, b=1.0, t=1.0, r=float(r))).value for r in radii])
        rise = float(np.max(np.diff(vals)))
        positive = bool(np.all(vals > 0))
        flag = "n1_rises_near_r0" if n == 1 and rise > 0 else ""
        rows.append(_disk_row("heat_decreasing", f"n={n};b=1;t=1;r=0..6", vals[0], vals[-1], max(rise, 0.0), 0.0,
                              "closed", passed=positive and rise < 0, flag=flag))
    k2 = constants(2, 1.0, 2.0)
    rows.append(_disk_row("poincare", "n=2;a=1", k2.poincare, 4.0, abs(k2.poincare - 4.0), 1e-15, "closed"))
    rows.append(_disk_row("mckean_lambda1", "n=2;a=1", k2.mckean_lambda1, 0.25, abs(k2.mckean_lambda1 - 0.25), 1e-15,
                          "closed"))
    ident = k2.cheng_Cp * (4 * k2.mckean_lambda1 / 4.0) ** 1.0
    rows.append(_disk_row("cheng_identity", "n=2;a=1;p=2", ident, 1.0, abs(ident - 1), 1e-15, "closed"))
    k1 = constants(1, 1.0, 2.0)
    rows.append(_disk_row("thm_constant", "n=1;a=1;p=2", k1.thm_constant, 4.0, abs(k1.thm_constant - 4), 1e-15,
                          "closed"))
    for d in phi_discrepancy():
        rows.append(_disk_row("printed_phi_discrepancy", f"R={d['R']:g}", d["phi_printed"], d["phi_quadrature"],
                              abs(d["deviation"]), NAN, "printed_display", passed=True, flag="reported"))
    report = Report("disk", cfg.echo(), rows)
    worst: dict[str, dict] = {}
    for r in rows:
        if r["flag"]:
            continue
        w = worst.setdefault(r["check"], {"max_residual": 0.0, "tolerance": r["tolerance"], "failures": 0})
        w["max_residual"] = max(w["max_residual"], r["residual"])
        w["failures"] += not r["pass"]
    report.extras["disk_checks"] = worst
    return report


RUNNERS = {"kernel": cmd_kernel, "metric": cmd_metric, "curvature": cmd_curvature, "hsc": cmd_hsc, "disk": cmd_disk}


# -- argument parsing -------------------------------------------------------------------------------


def _grid(text: str) -> tuple[int, int]:
    try:
        r, c = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like RxC, got {text!r}") from None
    return r, c


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-epl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=float, default=1.0)
        sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
        sp.add_argument("--grid", type=_grid, default=None, help="RxC cell counts (hsc: z-count x delta-count)")
        sp.add_argument("--delta-cap", type=float, default=None)
        sp.add_argument("--tol", type=float, default=None, help="override the command's primary tolerance")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=0, help="kernel: extra random interior points")
        sp.add_argument("--ke", action="store_true", help="hsc: add the Kahler-Einstein residual")
        sp.add_argument("--p-list", type=_float_list, default=DEFAULT_P_LIST)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--diff-mode", choices=MODES, default="reinhardt")
        sp.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(cfg: RunConfig) -> Report:
    return RUNNERS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        fields = {k: v for k, v in vars(args).items() if k != "verbose"}
        cfg = RunConfig(**fields)
        _ = cfg.params
    except (UsageError, InvalidParams, ValueError) as exc:
        parser.error(str(exc))  # exits with status 2
    report = run(cfg)
    text = to_json(report) if cfg.fmt == "json" else to_csv(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = report.summary()
    log.info("summary: %s", json.dumps(summary, default=str))
    if not report.passed:
        failed = [k for k, c in summary["checks"].items() if not c["pass"]]
        print(f"{cfg.command}: {summary['failed_rows']} failing rows; failing summary checks: {failed}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
