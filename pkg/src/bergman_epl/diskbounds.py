"""The unit-disk instance of the integrated gradient bound, plus the heat-kernel
lower bound and the spectral constants it is assembled from.

Green's function of the disk, positive convention:

    G(x, y) = (1 / 2 pi) ln(|1 - conj(x) y| / |x - y|) >= 0,

which vanishes for |x| = 1.  The radial profile

    phi(R) = int_D G(R, y) (1 - |y|^2)^2 dA(y)

reduces to a one-dimensional integral and has the closed form
11/72 - R^2/4 + R^4/8 - R^6/36.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .errors import Coincident, DimensionTooSmall

QUAD_EPSABS = 1e-11
QUAD_EPSREL = 1e-11
GRAD_CONVENTIONS = ("grad_unit", "grad_sq")
INEQUALITY_P = (2.0, 2.5, 3.0, 4.0, 6.0)


@dataclass(frozen=True)
class DiskPoint:
    w: complex

    def __post_init__(self):
        w = complex(self.w)
        if not abs(w) < 1:
            raise ValueError(f"disk point needs |w| < 1, got {w}")
        object.__setattr__(self, "w", w)


def _as_complex(x) -> complex:
    return x.w if isinstance(x, DiskPoint) else complex(x)


def green_disk(x, y) -> float:
    """Positive Green's function of the unit disk; ``x`` may lie on the unit circle."""
    x, y = _as_complex(x), _as_complex(y)
    if x == y:
        raise Coincident(f"Green's function has a pole at x = y = {x}")
    return math.log(abs(1 - x.conjugate() * y) / abs(x - y)) / (2 * math.pi)


def green_disk_printed(x, y) -> float:
    """The rewritten form (1/4pi) ln(|x|^2 |y - x/|x|^2|^2 / |x - y|^2), for x != 0."""
    x, y = _as_complex(x), _as_complex(y)
    if x == y:
        raise Coincident(f"Green's function has a pole at x = y = {x}")
    r2 = abs(x) ** 2
    return math.log(r2 * abs(y - x / r2) ** 2 / abs(x - y) ** 2) / (4 * math.pi)


def ring_integral(aa: float, bb: float) -> float:
    """int_0^{2 pi} ln(aa^2 + bb^2 - 2 aa bb cos theta) d theta by adaptive quadrature.

    Written as ln((aa - bb)^2 + 4 aa bb sin^2(theta/2)) and folded onto
    [0, pi] so the only possible log singularity sits at an endpoint.
    """
    if not (aa > 0 and bb > 0):
        raise ValueError("ring_integral needs aa > 0 and bb > 0")
    d2, k = (aa - bb) ** 2, 4 * aa * bb

    def f(theta):
        return math.log(d2 + k * math.sin(theta / 2) ** 2)

    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
    return 2 * val


def ring_integral_closed(aa: float, bb: float) -> float:
    return 4 * math.pi * max(math.log(aa), math.log(bb))


def phi(R: float) -> float:
    """Closed form of the radial profile; phi(1) = 0 exactly."""
    _check_radius(R)
    s = R * R
    # 11/72 - s/4 + s^2/8 - s^3/36 with the root s = 1 factored out
    return (1 - s) * (2 * s * s - 7 * s + 11) / 72


def _check_radius(R: float):
    if not 0 <= R <= 1:
        raise ValueError(f"R must lie in [0, 1], got {R}")


def phi_1d(R: float) -> float:
    """-int_0^1 r (1 - r^2)^2 max(ln r, ln R) dr by quadrature, split at r = R."""
    _check_radius(R)
    weight = lambda r: r * (1 - r * r) ** 2  # noqa: E731
    inner = 0.0
    if R > 0:
        inner = -math.log(R) * integrate.quad(weight, 0.0, R, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL)[0]
    outer = integrate.quad(lambda r: -weight(r) * math.log(r), R, 1.0, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL)[0]
    return inner + outer


def phi_2d(R: float, epsabs: float = 1e-10) -> float:
    """int_D G(R, y) (1 - |y|^2)^2 dA(y) by 2D quadrature in polar coordinates about x = R.

    Centring the polar grid on the pole turns G's log singularity into the
    integrable rho ln rho.
    """
    _check_radius(R)
    if R == 1:
        return 0.0

    def rho_max(ang):
        return -R * math.cos(ang) + math.sqrt(1 - (R * math.sin(ang)) ** 2)

    def inner(ang):
        c, s = math.cos(ang), math.sin(ang)

        def f(rho):
            if rho == 0.0:
                return 0.0
            y = complex(R + rho * c, rho * s)
            return green_disk(R, y) * (1 - abs(y) ** 2) ** 2 * rho

        return integrate.quad(f, 0.0, rho_max(ang), epsabs=epsabs, epsrel=1e-10, limit=200)[0]

    # integrand symmetric under ang -> -ang
    return 2 * integrate.quad(inner, 0.0, math.pi, epsabs=epsabs, epsrel=1e-10, limit=200)[0]


def phi_printed(R: float) -> float:
    """The closed form as printed alongside the disk inequality (kept only to report its deviation)."""
    _check_radius(R)
    if R == 0:
        return 1 / 6
    ln = math.log(R)
    return 1 / 6 - R**2 / 2 * ln - R**4 / 8 * (4 * ln - 1) - R**6 / 36 * (6 * ln - 1)


def phi_discrepancy(radii=(0.0, 0.25, 0.5, 0.75, 1.0)) -> list[dict]:
    """Printed display vs the quadrature-anchored profile at a few radii."""
    rows = []
    for R in radii:
        anchored, printed = phi_1d(R), phi_printed(R)
        rows.append({"R": R, "phi_quadrature": anchored, "phi_printed": printed, "deviation": printed - anchored})
    return rows


class Inequality(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def inequality_lhs(p: float) -> float:
    """2 pi int_0^1 phi(R)^p R dR."""
    val, _ = integrate.quad(lambda R: phi(R) ** p * R, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
    return 2 * math.pi * val


def inequality_rhs(p: float, convention: str) -> float:
    """p^p int_D |z|^p gamma(z; grad z)^{p/2} dA under the chosen gradient normalisation."""
    if convention == "grad_unit":
        return p**p * 2 * math.pi / (p + 2)
    if convention == "grad_sq":
        val, _ = integrate.quad(lambda s: s ** (p + 1) * (1 - s * s) ** (p / 2), 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
        return p**p * 2 * math.pi * val
    raise ValueError(f"convention must be one of {GRAD_CONVENTIONS}, got {convention!r}")


def inequality_rhs_beta(p: float) -> float:
    """Closed form of the grad_sq right-hand side via the Beta function."""
    return p**p * math.pi * special.beta(p / 2 + 1, p / 2 + 1)


def disk_inequality(p: float, convention: str = "grad_unit") -> Inequality:
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    lhs, rhs = inequality_lhs(p), inequality_rhs(p, convention)
    return Inequality(lhs, rhs, bool(lhs <= rhs))


# -- heat kernel and spectral constants -----------------------------------------------------


@dataclass(frozen=True)
class BoundsParams:
    n: int = 1
    a: float = 1.0
    b: float = 1.0
    p: float = 2.0
    t: float = 1.0
    r: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not (self.a > 0 and self.b > 0 and self.t > 0):
            raise ValueError("a, b and t must be > 0")
        if not self.p >= 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if not self.r >= 0:
            raise ValueError(f"r must be >= 0, got {self.r}")


class HeatValue(NamedTuple):
    value: float
    underflow: bool
    log_value: float


_LOG_TINY = math.log(np.finfo(float).tiny)


def heat_lower_bound(params: BoundsParams) -> HeatValue:
    """Two-sided heat kernel comparison function h(t, r), evaluated in log space.

    Returns 0 with ``underflow=True`` when the value is below the smallest
    normal double.
    """
    n, b, t, r = params.n, params.b, params.t, params.r
    m = 2 * n - 1
    logh = (
        -n * math.log(2 * math.pi * t)
        - r * r / (2 * t)
        - m * m * b * b * t / 8
        - m * b * r / 2
        + (m / 2 - 1) * math.log1p(b * r + b * b * t / 2)
        + math.log1p(b * r)
    )
    if logh < _LOG_TINY:
        return HeatValue(0.0, True, logh)
    return HeatValue(math.exp(logh), False, logh)


def poincare_constant(n: int, a: float) -> float:
    if n < 2:
        raise DimensionTooSmall("the Poincare constant 4/((n-1)^2 a^2) needs n >= 2")
    return 4 / ((n - 1) ** 2 * a * a)


def mckean_lambda1(n: int, a: float) -> float:
    if n < 2:
        raise DimensionTooSmall("McKean's bound (n-1)^2 a^2 / 4 needs n >= 2")
    return (n - 1) ** 2 * a * a / 4


def cheng_constant(p: float, lam1: float) -> float:
    """(p^2 / (4 lam1))^{p/2}, the reciprocal of (4 lam1 / p^2)^{p/2}."""
    return (p * p / (4 * lam1)) ** (p / 2)


def thm_constant(n: int, a: float, p: float) -> float:
    return (p / ((2 * n - 1) * a)) ** p


@dataclass(frozen=True)
class Constants:
    n: int
    a: float
    p: float
    thm_constant: float
    poincare: float | None = None
    mckean_lambda1: float | None = None
    cheng_Cp: float | None = None


def constants(n: int, a: float, p: float) -> Constants:
    """All four constants; the three that divide by n - 1 are None when n = 1."""
    if not (a > 0 and p >= 2 and n >= 1):
        raise ValueError("constants need n >= 1, a > 0 and p >= 2")
    thm = thm_constant(n, a, p)
    if n == 1:
        return Constants(n, a, p, thm)
    lam1 = mckean_lambda1(n, a)
    return Constants(n, a, p, thm, poincare_constant(n, a), lam1, cheng_constant(p, lam1))
