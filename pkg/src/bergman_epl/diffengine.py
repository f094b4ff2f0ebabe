"""Mixed Wirtinger derivatives of real scalar fields on open subsets of C^3.

Three estimation modes are available:

``real6``
    Treat C^3 as R^6, take tensor-product central differences in the real
    coordinates with Richardson extrapolation, then assemble Wirtinger
    combinations from d/dz = (d/du - i d/dv)/2 and d/dzbar = (d/du + i d/dv)/2.
    Works for any field.
``reinhardt``
    For fields depending only on nu_i = |z_i|^2: central differences with
    Richardson extrapolation in the three nu coordinates, followed by the exact
    chain rule back to z, zbar.  Preferred finite-difference path.
``jet``
    Same chain rule, but the nu derivatives come from truncated Taylor
    arithmetic (:mod:`bergman_epl.jets`) and are exact up to rounding.

Complex-step differentiation is deliberately absent: the fields are real
valued and not holomorphic, so the complex-step trick does not apply.

Error estimates for the difference modes are ten times the magnitude of the
last Richardson correction plus a rounding term; for the jet mode they are a
small multiple of machine epsilon times the propagated magnitudes.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import DomainEscape, StepUnderflow
from .jets import Jet

MAX_ORDER = 4
MODES = ("real6", "reinhardt", "jet")
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DiffConfig:
    base_step: float = 1e-2
    richardson_levels: int = 3
    mode: str = "reinhardt"

    def __post_init__(self):
        if not self.base_step > 0:
            raise ValueError(f"base_step must be > 0, got {self.base_step}")
        if not 1 <= self.richardson_levels <= 4:
            raise ValueError(f"richardson_levels must be in [1, 4], got {self.richardson_levels}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


EXACT = DiffConfig(mode="jet")


@dataclass(frozen=True, order=True)
class DerivRequest:
    """Orders of differentiation in (z1, z2, z3) and (z1bar, z2bar, z3bar)."""

    holo: tuple[int, int, int] = (0, 0, 0)
    anti: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        holo, anti = tuple(int(k) for k in self.holo), tuple(int(k) for k in self.anti)
        if len(holo) != 3 or len(anti) != 3:
            raise ValueError("holo and anti must have three entries")
        if min(holo + anti) < 0:
            raise ValueError("derivative orders must be >= 0")
        if sum(holo) + sum(anti) > MAX_ORDER:
            raise ValueError(f"total order must be <= {MAX_ORDER}")
        object.__setattr__(self, "holo", holo)
        object.__setattr__(self, "anti", anti)

    @property
    def total(self) -> int:
        return sum(self.holo) + sum(self.anti)

    @classmethod
    def of(cls, holo: Iterable[int] = (), anti: Iterable[int] = ()) -> "DerivRequest":
        """Build from 1-based coordinate lists, e.g. ``of([1, 2], [1])`` is d1 d2 dbar1."""
        h, a = [0, 0, 0], [0, 0, 0]
        for i in holo:
            h[i - 1] += 1
        for i in anti:
            a[i - 1] += 1
        return cls(tuple(h), tuple(a))

    def conjugate(self) -> "DerivRequest":
        return DerivRequest(self.anti, self.holo)


def all_requests(max_order: int) -> list[DerivRequest]:
    out = []
    for total in range(max_order + 1):
        for combo in itertools.product(range(total + 1), repeat=6):
            if sum(combo) == total:
                out.append(DerivRequest(combo[:3], combo[3:]))
    return out


# ----------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class ReinhardtField:
    """A real field on C^3 that depends on z only through nu_i = |z_i|^2.

    ``of_nu(nu1, nu2, nu3)`` must accept floats, arrays and :class:`Jet`
    arguments.  ``nu_scale(nu)`` returns per-coordinate distances over which
    the field is well resolved; finite-difference steps are multiples of it.
    """

    of_nu: Callable
    nu_contains: Callable[[np.ndarray], np.ndarray]
    nu_scale: Callable[[np.ndarray], np.ndarray] = field(default=lambda nu: np.ones(3))
    name: str = "field"

    def __call__(self, points) -> np.ndarray:
        nu = np.abs(np.asarray(points, dtype=complex)) ** 2
        if not np.all(self.nu_contains(nu)):
            raise DomainEscape(f"{self.name}: evaluation outside the domain")
        return np.real(self.of_nu(nu[..., 0], nu[..., 1], nu[..., 2]))

    def contains(self, points) -> np.ndarray:
        nu = np.abs(np.asarray(points, dtype=complex)) ** 2
        return self.nu_contains(nu)

    def z_scale(self, point) -> np.ndarray:
        """Per complex coordinate step scale s with 2|z|s + s^2 <= nu_scale."""
        point = np.asarray(point, dtype=complex)
        s = np.asarray(self.nu_scale(np.abs(point) ** 2), dtype=float)
        r = np.abs(point)
        return s / (r + np.sqrt(r * r + s))


# ----------------------------------------------------------------------------
# finite-difference machinery

_STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


def _partial_indices(nvars: int, order: int) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(order + 1), repeat=nvars) if sum(a) <= order]


@functools.lru_cache(maxsize=None)
def _stencil_plan(nvars: int, order: int):
    """Node offsets and weight matrix for all partials of total order <= order."""
    alphas = _partial_indices(nvars, order)
    nodes: dict[tuple[int, ...], int] = {}
    entries = []
    for row, alpha in enumerate(alphas):
        per_dim = [list(_STENCILS[k].items()) for k in alpha]
        for combo in itertools.product(*per_dim):
            offset = tuple(o for o, _ in combo)
            w = math.prod(wt for _, wt in combo)
            col = nodes.setdefault(offset, len(nodes))
            entries.append((row, col, w))
    weights = np.zeros((len(alphas), len(nodes)))
    for row, col, w in entries:
        weights[row, col] += w
    offsets = np.array(sorted(nodes, key=nodes.get), dtype=float)
    return alphas, offsets, weights, np.array([sum(a) for a in alphas])


def fd_partials(fn, x0, steps, order: int, levels: int):
    """Partial derivatives of ``fn: (N, d) -> (N,)`` at ``x0`` by Richardson-extrapolated
    central differences.

    Returns ``(alphas, values, errors)``; ``values[k]`` estimates d^alphas[k] fn.
    """
    x0 = np.asarray(x0, dtype=float)
    steps = np.asarray(steps, dtype=float)
    alphas, offsets, weights, _ = _stencil_plan(x0.size, order)
    alpha_arr = np.array(alphas, dtype=float)
    nlev = max(levels, 2)
    h_min = steps / 2.0 ** (nlev - 1)
    if np.any(h_min < 1e-11 * np.abs(x0)) or np.any(h_min < 1e-250):
        raise StepUnderflow(f"finest step {h_min.min():.3e} too small at {x0}")
    table = []
    rounding = None
    for lev in range(nlev):
        h = steps / 2.0**lev
        pts = x0 + offsets * h
        fvals = np.asarray(fn(pts), dtype=float)
        if not np.all(np.isfinite(fvals)):
            raise DomainEscape("non-finite field value at a stencil node")
        denom = np.prod(h ** alpha_arr, axis=1)
        table.append(weights @ fvals / denom)
        rounding = _EPS * (np.abs(weights) @ np.abs(fvals)) / denom
    # Richardson on the even-power error expansion, step ratio 2
    rows = [table[0]]
    value, correction = table[0], np.abs(table[1] - table[0])
    for lev in range(1, levels):
        new = [table[lev]]
        for m in range(1, lev + 1):
            f = 4.0**m
            new.append((f * new[m - 1] - rows[m - 1]) / (f - 1.0))
        correction = np.abs(new[-1] - new[-2])
        value = new[-1]
        rows = new
    return alphas, value, 10.0 * correction + 4.0 * rounding


# ----------------------------------------------------------------------------
# conversions to Wirtinger derivatives


@functools.lru_cache(maxsize=None)
def _nu_chain_terms(req: DerivRequest):
    """Terms (coef, z_powers, w_powers, nu_alpha) of d^holo dbar^anti F(z zbar).

    For one variable: d_z^a d_w^b F(zw) = sum_k a! b! / (k! (a-k)! (b-k)!)
    z^(b-k) w^(a-k) F^(a+b-k)(zw).
    """
    per_var = []
    for a, b in zip(req.holo, req.anti):
        opts = []
        for k in range(min(a, b) + 1):
            coef = math.factorial(a) * math.factorial(b) / (
                math.factorial(k) * math.factorial(a - k) * math.factorial(b - k)
            )
            opts.append((coef, b - k, a - k, a + b - k))
        per_var.append(opts)
    terms = []
    for combo in itertools.product(*per_var):
        coef = math.prod(c[0] for c in combo)
        terms.append((coef, tuple(c[1] for c in combo), tuple(c[2] for c in combo),
                      tuple(c[3] for c in combo)))
    return terms


def nu_to_wirtinger(nu_derivs: dict, nu_errors: dict, at, max_order: int):
    """Convert nu-partials of F into Wirtinger derivatives of F(|z|^2) at ``at``.

    ``at`` may carry leading batch axes; the derivative dicts then hold arrays
    with the same batch shape.
    """
    z = np.asarray(at, dtype=complex)
    w = np.conj(z)
    values, errors = {}, {}
    for req in all_requests(max_order):
        val = 0.0
        err = 0.0
        for coef, zp, wp, alpha in _nu_chain_terms(req):
            mono = coef
            amono = coef
            for i in range(3):
                if zp[i]:
                    mono = mono * z[..., i] ** zp[i]
                    amono = amono * np.abs(z[..., i]) ** zp[i]
                if wp[i]:
                    mono = mono * w[..., i] ** wp[i]
                    amono = amono * np.abs(w[..., i]) ** wp[i]
            val = val + mono * nu_derivs[alpha]
            err = err + amono * nu_errors[alpha]
        values[req] = val
        errors[req] = err
    return values, errors


@functools.lru_cache(maxsize=None)
def _real_terms(req: DerivRequest):
    """Expansion of prod_i (du_i - i dv_i)^a_i (du_i + i dv_i)^b_i / 2^(a_i+b_i)."""
    per_var = []
    for a, b in zip(req.holo, req.anti):
        opts = []
        for j in range(a + 1):
            for k in range(b + 1):
                coef = math.comb(a, j) * math.comb(b, k) * (-1j) ** (a - j) * (1j) ** (b - k)
                opts.append((coef / 2.0 ** (a + b), j + k, a - j + b - k))
        per_var.append(opts)
    terms = {}
    for combo in itertools.product(*per_var):
        coef = math.prod(c[0] for c in combo)
        key = tuple(c[1] for c in combo) + tuple(c[2] for c in combo)
        terms[key] = terms.get(key, 0.0) + coef
    return [(c, k) for k, c in terms.items() if abs(c) > 0]


# ----------------------------------------------------------------------------
# public operations


class WirtingerJet:
    """All mixed Wirtinger derivatives up to ``max_order`` at one point (or a batch).

    Indexing with a :class:`DerivRequest` returns the value; ``error(req)``
    the matching error estimate.
    """

    def __init__(self, values: dict, errors: dict, max_order: int, mode: str):
        self.values = values
        self.errors = errors
        self.max_order = max_order
        self.mode = mode

    def __getitem__(self, req: DerivRequest):
        return self.values[req]

    def __contains__(self, req):
        return req in self.values

    def __iter__(self):
        return iter(self.values)

    def error(self, req: DerivRequest):
        return self.errors[req]

    def tensor(self, n_holo: int, n_anti: int, errors: bool = False) -> np.ndarray:
        """Array T[i1..i_nh, j1..j_na] = d_i1..d_inh dbar_j1..dbar_jna f (0-based axes).

        Batch axes, if any, come first.
        """
        src = self.errors if errors else self.values
        shape = (3,) * (n_holo + n_anti)
        sample = np.asarray(next(iter(src.values())))
        out = np.zeros(sample.shape + shape, dtype=float if errors else complex)
        for idx in itertools.product(range(3), repeat=n_holo + n_anti):
            req = DerivRequest.of([i + 1 for i in idx[:n_holo]], [j + 1 for j in idx[n_holo:]])
            out[(Ellipsis,) + idx] = src[req]
        return out


def _nu_partials(field: ReinhardtField, nu, max_order: int, cfg: DiffConfig):
    nu = np.asarray(nu, dtype=float)
    if cfg.mode == "jet":
        if not np.all(field.nu_contains(nu)):
            raise DomainEscape(f"{field.name}: point outside the domain")
        vars_ = Jet.variables(nu, max_order)
        jet = field.of_nu(*vars_)
        derivs = jet.derivatives()
        values = {a: derivs[..., i] for i, a in enumerate(jet.space.multi)}
        errors = {a: 64 * _EPS * (np.abs(v) + _EPS) for a, v in values.items()}
        return values, errors
    if nu.ndim != 1:
        return _batched(lambda x: _nu_partials(field, x, max_order, cfg), nu)
    steps = cfg.base_step * np.asarray(field.nu_scale(nu), dtype=float)
    reach = nu + np.array([[-2.0], [2.0]]) * steps
    corners = np.array(list(itertools.product(*reach.T)))
    if not np.all(field.nu_contains(corners)):
        raise DomainEscape(f"{field.name}: stencil leaves the domain at nu={nu}")

    def fn(pts):
        if not np.all(field.nu_contains(pts)):
            raise DomainEscape(f"{field.name}: stencil node outside the domain")
        return np.real(field.of_nu(pts[:, 0], pts[:, 1], pts[:, 2]))

    alphas, vals, errs = fd_partials(fn, nu, steps, max_order, cfg.richardson_levels)
    values = {a: vals[k] for k, a in enumerate(alphas)}
    errors = {a: errs[k] for k, a in enumerate(alphas)}
    return values, errors


def _batched(fun, nu):
    flat = nu.reshape(-1, nu.shape[-1])
    results = [fun(x) for x in flat]
    keys = results[0][0].keys()
    shape = nu.shape[:-1]
    values = {k: np.array([r[0][k] for r in results]).reshape(shape) for k in keys}
    errors = {k: np.array([r[1][k] for r in results]).reshape(shape) for k in keys}
    return values, errors


def _real6_jet(field, at, max_order: int, cfg: DiffConfig) -> WirtingerJet:
    at = np.asarray(at, dtype=complex)
    x0 = np.concatenate([at.real, at.imag])
    zs = field.z_scale(at) if hasattr(field, "z_scale") else np.ones(3)
    steps = cfg.base_step * np.concatenate([zs, zs])
    reach = np.max(np.abs(_stencil_plan(6, max_order)[1]), axis=0) * steps
    contains = getattr(field, "contains", None)

    def fn(pts):
        z = pts[:, :3] + 1j * pts[:, 3:]
        if contains is not None and not np.all(contains(z)):
            raise DomainEscape("stencil node outside the domain")
        return np.real(field(z))

    if contains is not None:
        box = at + np.array(list(itertools.product((-1, 1), repeat=3))) * (reach[:3] + 1j * reach[3:])
        if not np.all(contains(box)):
            raise DomainEscape(f"stencil leaves the domain at {at}")
    alphas, vals, errs = fd_partials(fn, x0, steps, max_order, cfg.richardson_levels)
    partial = {a: (v, e) for a, v, e in zip(alphas, vals, errs)}
    values, errors = {}, {}
    for req in all_requests(max_order):
        v, e = 0.0, 0.0
        for coef, key in _real_terms(req):
            pv, pe = partial[key]
            v += coef * pv
            e += abs(coef) * pe
        values[req] = v
        errors[req] = e
    return WirtingerJet(values, errors, max_order, "real6")


def wirtinger_jet(field, at, max_order: int = 2, cfg: DiffConfig = DiffConfig()) -> WirtingerJet:
    """Every mixed Wirtinger derivative of ``field`` up to ``max_order`` at ``at``.

    ``at`` is a point of C^3; the ``jet`` and ``reinhardt`` modes also accept
    an array of points with leading batch axes.
    """
    if not 0 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must be in [0, {MAX_ORDER}]")
    if cfg.mode == "real6":
        return _real6_jet(field, at, max_order, cfg)
    if not isinstance(field, ReinhardtField):
        raise TypeError(f"mode {cfg.mode!r} needs a ReinhardtField")
    at = np.asarray(at, dtype=complex)
    nu = np.abs(at) ** 2
    nd, ne = _nu_partials(field, nu, max_order, cfg)
    values, errors = nu_to_wirtinger(nd, ne, at, max_order)
    return WirtingerJet(values, errors, max_order, cfg.mode)


def wirtinger(field, at, req: DerivRequest, cfg: DiffConfig = DiffConfig()):
    """One mixed Wirtinger derivative and its error estimate: ``(value, error)``."""
    jet = wirtinger_jet(field, at, req.total, cfg)
    return complex(jet[req]), float(jet.error(req))
