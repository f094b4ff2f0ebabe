"""The domains E_{p,lambda} = {(|x|^{2p} + |y|^2)^{1/lambda} + |z|^2 < 1} and their Bergman kernel.

With nu = (|x|^2, |y|^2, |z|^2) and

    a = 1 - nu3,   b = a^lambda - nu2,   c = b^(1/p) - nu1,

the kernel is a four-term expression in real powers of a, b, c.  All powers
are real powers of strictly positive reals: a, b, c > 0 on the interior, so no
branch choices arise.  The formula is analytic in nu wherever a, b, c > 0,
including small negative nu1 or nu2; finite-difference stencils centred on a
coordinate hyperplane rely on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import jets
from .diffengine import EXACT, DiffConfig, ReinhardtField, wirtinger_jet
from .errors import DomainEscape, InvalidParams, NearBoundary, SingularLocus

KERNEL_FLOOR = 1e-12
PI3 = math.pi**3


@dataclass(frozen=True)
class DomainParams:
    p: float
    lam: float

    def __post_init__(self):
        for name in ("p", "lam"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                label = "lambda" if name == "lam" else name
                raise InvalidParams(f"{label} must be a finite positive real (p > 0 and lambda > 0), got {v!r}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "lam", float(self.lam))


@dataclass(frozen=True)
class UConstants:
    u1: float
    u2: float
    u3: float
    u4: float
    u5: float
    u6: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.u1, self.u2, self.u3, self.u4, self.u5, self.u6)


def u_constants(params: DomainParams) -> UConstants:
    p, lam = params.p, params.lam
    return UConstants(
        u1=(p - 1) * (lam * (p - 1) + p),
        u2=p * (p - 1) * (lam - 1),
        u3=(p + 1) * (lam + lam * p + p),
        u4=p * (p + 1) * (lam - 1),
        u5=-2 * (lam * (p * p - 2) + p * p),
        u6=-2 * (lam - 1) * p * p,
    )


@dataclass(frozen=True)
class NuPoint:
    nu1: float
    nu2: float
    nu3: float

    def __post_init__(self):
        if min(self.nu1, self.nu2, self.nu3) < 0:
            raise ValueError("nu coordinates are squared moduli and must be >= 0")

    @classmethod
    def from_point(cls, pt) -> "NuPoint":
        nu = np.abs(np.asarray(pt, dtype=complex)) ** 2
        return cls(*map(float, nu))

    def as_array(self) -> np.ndarray:
        return np.array([self.nu1, self.nu2, self.nu3])

    def is_interior(self, params: DomainParams) -> bool:
        a, b, c = abc(self.nu1, self.nu2, self.nu3, params)
        return bool(a > 0 and b > 0 and c > 0)


@dataclass(frozen=True)
class SlicePoint:
    """A point (0, y, z) of the slice K1, 0 <= y, z < 1."""

    y: float
    z: float
    params: DomainParams

    def __post_init__(self):
        if not (0 <= self.y < 1 and 0 <= self.z < 1):
            raise ValueError(f"slice point needs 0 <= y, z < 1, got y={self.y}, z={self.z}")
        if not self.b > 0:
            raise DomainEscape(f"(0, {self.y}, {self.z}) is not interior for {self.params}")

    @classmethod
    def from_delta(cls, delta: float, z: float, params: DomainParams) -> "SlicePoint":
        """The slice point with given z and y = sqrt(delta * a^lambda)."""
        a = 1.0 - z * z
        return cls(math.sqrt(delta * a**params.lam), z, params)

    @cached_property
    def a(self) -> float:
        return 1.0 - self.z**2

    @cached_property
    def b(self) -> float:
        return self.a**self.params.lam - self.y**2

    @cached_property
    def c(self) -> float:
        return self.b ** (1.0 / self.params.p)

    @cached_property
    def delta(self) -> float:
        return self.y**2 / self.a**self.params.lam

    @property
    def point(self) -> np.ndarray:
        return np.array([0.0, self.y, self.z], dtype=complex)

    @property
    def nu(self) -> NuPoint:
        return NuPoint(0.0, self.y**2, self.z**2)


def membership_defect(pt, params: DomainParams):
    """(|x|^{2p} + |y|^2)^{1/lambda} + |z|^2 - 1; negative exactly on the interior."""
    pt = np.asarray(pt, dtype=complex)
    x, y, z = np.abs(pt[..., 0]), np.abs(pt[..., 1]), np.abs(pt[..., 2])
    return (x ** (2 * params.p) + y**2) ** (1.0 / params.lam) + z**2 - 1.0


def abc(nu1, nu2, nu3, params: DomainParams):
    a = 1 - nu3
    b = a**params.lam - nu2
    c = b ** (1.0 / params.p) - nu1
    return a, b, c


def _kernel_direct(nu1, nu2, nu3, p: float, lam: float):
    a = 1 - nu3
    al = a**lam
    b = al - nu2
    c = b ** (1.0 / p) - nu1
    pref = PI3 * p * p * c**4
    t1 = b ** (1 / p - 3) * nu1**2 * ((p - 1) * (lam * (p - 1) + p)) / (a ** (2 - 2 * lam) * pref)
    t2 = a ** (lam - 2) * b ** (1 / p - 3) * nu1**2 * nu2 * ((p - 1) * (lam - 1) * p) / pref
    t3 = b ** (3 / p - 3) * (p + 1) * (al * (lam + lam * p + p) + (lam - 1) * p * nu2) / (a ** (2 - lam) * pref)
    t4 = b ** (2 / p - 3) * (-2 * nu1) * (al * (lam * (p * p - 2) + p * p) + (lam - 1) * p * p * nu2) / (
        a ** (2 - lam) * pref
    )
    return t1 + t2 + t3 + t4


def _check_floor(b, c, floor: float):
    b0, c0 = np.min(jets.value(b)), np.min(jets.value(c))
    if not (b0 >= floor and c0 >= floor):
        raise NearBoundary(f"b={b0:.3e}, c={c0:.3e} below conditioning floor {floor:g}")


def _nu_args(nu):
    if isinstance(nu, NuPoint):
        return nu.nu1, nu.nu2, nu.nu3
    nu = np.asarray(nu, dtype=float)
    return nu[..., 0], nu[..., 1], nu[..., 2]


def bergman_kernel(nu, params: DomainParams, floor: float = KERNEL_FLOOR):
    """Bergman kernel on the diagonal, from the four-term explicit formula."""
    nu1, nu2, nu3 = _nu_args(nu)
    _, b, c = abc(nu1, nu2, nu3, params)
    _check_floor(b, c, floor)
    return _kernel_direct(nu1, nu2, nu3, params.p, params.lam)


def n_monomials(nu, params: DomainParams):
    """The six monomials N_i with N = sum u_i N_i."""
    nu1, nu2, nu3 = _nu_args(nu)
    p, lam = params.p, params.lam
    a, b, _ = abc(nu1, nu2, nu3, params)
    a2l, al = a ** (2 * lam), a**lam
    b1, b2, b3 = b ** (1 / p - 3), b ** (2 / p - 3), b ** (3 / p - 3)
    return (
        a2l * b1 * nu1**2,
        al * b1 * nu1**2 * nu2,
        a2l * b3,
        al * b3 * nu2,
        a2l * b2 * nu1,
        al * b2 * nu1 * nu2,
    )


def kernel_factored(nu, params: DomainParams, floor: float = KERNEL_FLOOR):
    """``(N, D, B)`` with D = a^2 c^4 and B = N / (pi^3 p^2 D)."""
    nu1, nu2, nu3 = _nu_args(nu)
    a, b, c = abc(nu1, nu2, nu3, params)
    _check_floor(b, c, floor)
    u = u_constants(params).as_tuple()
    mono = n_monomials(nu, params)
    n = sum(ui * ni for ui, ni in zip(u, mono))
    d = a**2 * c**4
    return n, d, n / (PI3 * params.p**2 * d)


def _log_kernel_scaled(nu1, nu2, nu3, p: float, lam: float):
    """log B via delta = nu2 / a^lambda and t = nu1 / b^(1/p).

    N = a^(2 lambda) b^(3/p - 3) Q with Q = u3 + u4 delta + (u5 + u6 delta) t + (u1 + u2 delta) t^2,
    and c = b^(1/p) (1 - t), so no power of b or c is ever formed directly.
    Keeps jets finite for small p, where c = b^(1/p) underflows near the boundary.
    """
    u1, u2, u3, u4, u5, u6 = u_constants(DomainParams(p, lam)).as_tuple()
    log_a = jets.log(1 - nu3)
    delta = nu2 * jets.exp(-lam * log_a)
    log_b = lam * log_a + jets.log(1 - delta)
    t = nu1 * jets.exp(-log_b / p)
    q = u3 + u4 * delta + (u5 + u6 * delta) * t + (u1 + u2 * delta) * t * t
    log_c = log_b / p + jets.log(1 - t)
    return (2 * lam - 2) * log_a + (3 / p - 3) * log_b + jets.log(q) - 4 * log_c - math.log(PI3 * p * p)


def _log_kernel_scale(params: DomainParams):
    p, lam = params.p, params.lam

    def scale(nu):
        a, b, c = abc(nu[0], nu[1], nu[2], params)
        s1 = c
        s2 = min(b, p * c * b ** (1 - 1 / p))
        s3 = min(a, s2 / (lam * a ** (lam - 1)))
        return np.minimum(np.array([s1, s2, s3], dtype=float), 1.0)

    return scale


def log_kernel_field(params: DomainParams) -> ReinhardtField:
    """(x, y, z) -> log B(|x|^2, |y|^2, |z|^2), the potential of the Bergman metric."""

    def of_nu(nu1, nu2, nu3):
        return _log_kernel_scaled(nu1, nu2, nu3, params.p, params.lam)

    def contains(nu):
        nu = np.asarray(nu, dtype=float)
        a, b, _ = abc(nu[..., 0], nu[..., 1], nu[..., 2], params)
        with np.errstate(invalid="ignore"):
            ok = (a > 0) & (b > 0)
            c = np.where(ok, np.abs(b) ** (1 / params.p) - nu[..., 0], -1.0)
        return ok & (c > 0)

    return ReinhardtField(of_nu, contains, _log_kernel_scale(params), name=f"logB{params}")


def exhaustion_field(params: DomainParams) -> ReinhardtField:
    """u = (|x|^{2p} + |y|^2)^{1/lambda} + |z|^2, smooth where x != 0 and y != 0."""
    p, lam = params.p, params.lam

    def of_nu(nu1, nu2, nu3):
        return (nu1**p + nu2) ** (1 / lam) + nu3

    def contains(nu):
        nu = np.asarray(nu, dtype=float)
        return (nu[..., 0] > 0) & (nu[..., 1] > 0)

    def scale(nu):
        return np.minimum(np.array([nu[0], nu[0] ** p + nu[1], 1.0]), 1.0)

    return ReinhardtField(of_nu, contains, scale, name=f"u{params}")


def psh_defect(pt, params: DomainParams, cfg: DiffConfig = EXACT, exclusion: float = 1e-3) -> float:
    """Smallest eigenvalue of the complex Hessian of the exhaustion u at ``pt``."""
    pt = np.asarray(pt, dtype=complex)
    if abs(pt[0]) < exclusion or abs(pt[1]) < exclusion:
        raise SingularLocus(f"psh_defect needs |x|, |y| >= {exclusion:g}; got {pt[:2]}")
    jet = wirtinger_jet(exhaustion_field(params), pt, 2, cfg)
    hess = jet.tensor(1, 1)
    hess = 0.5 * (hess + hess.conj().T)
    return float(np.linalg.eigvalsh(hess)[0])


def random_interior_nu(params: DomainParams, n: int, rng: np.random.Generator, delta_cap: float = 0.999,
                       floor: float = KERNEL_FLOOR):
    """``n`` interior nu samples with delta <= delta_cap, rejecting b or c below ``floor``."""
    out = np.empty((0, 3))
    while len(out) < n:
        m = 2 * (n - len(out)) + 16
        nu3 = rng.uniform(0.0, 0.99, m)
        a = 1 - nu3
        nu2 = rng.uniform(0.0, delta_cap, m) * a**params.lam
        b = a**params.lam - nu2
        nu1 = rng.uniform(0.0, delta_cap, m) * b ** (1 / params.p)
        c = b ** (1 / params.p) - nu1
        keep = (b >= floor) & (c >= floor)
        out = np.concatenate([out, np.stack([nu1, nu2, nu3], axis=-1)[keep]])
    return out[:n]
