"""Truncated multivariate Taylor arithmetic (forward-mode jets).

A :class:`Jet` stores the Taylor coefficients ``c[alpha]`` of a function of
``nvars`` real variables around a base point, for every multi-index with
``|alpha| <= order``.  Leading array axes are batch axes, so one jet can carry
many base points at once.

Only the operations the kernel formulas need are provided: ring operations,
real powers, ``log`` and ``exp``.  Derivatives are exact up to rounding, which
makes the jet mode of :mod:`bergman_epl.diffengine` the reference against
which the finite-difference modes are judged.
"""

from __future__ import annotations

import functools
import itertools
import math

import numpy as np


def _multi_indices(nvars: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(order + 1):
        level = [a for a in itertools.product(range(deg + 1), repeat=nvars) if sum(a) == deg]
        out.extend(sorted(level, reverse=True))
    return out


class JetSpace:
    """Monomial bookkeeping for jets of a fixed (nvars, order)."""

    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        self.multi = _multi_indices(nvars, order)
        self.index = {a: i for i, a in enumerate(self.multi)}
        self.size = len(self.multi)
        self.degree = np.array([sum(a) for a in self.multi])
        self.factorial = np.array(
            [math.prod(math.factorial(k) for k in a) for a in self.multi], dtype=float
        )
        rows, cols, target = [], [], []
        for i, a in enumerate(self.multi):
            for j, b in enumerate(self.multi):
                s = tuple(x + y for x, y in zip(a, b))
                if sum(s) <= order:
                    rows.append(i)
                    cols.append(j)
                    target.append(self.index[s])
        self._left = np.array(rows)
        self._right = np.array(cols)
        scatter = np.zeros((len(rows), self.size))
        scatter[np.arange(len(rows)), target] = 1.0
        self._scatter = scatter

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a[..., self._left] * b[..., self._right]) @ self._scatter


@functools.lru_cache(maxsize=None)
def jet_space(nvars: int, order: int) -> JetSpace:
    return JetSpace(nvars, order)


@functools.lru_cache(maxsize=None)
def _partial_plan(nvars: int, order: int, i: int):
    high, low = jet_space(nvars, order), jet_space(nvars, order - 1)
    src, scale = [], []
    for a in low.multi:
        b = list(a)
        b[i] += 1
        src.append(high.index[tuple(b)])
        scale.append(float(b[i]))
    return np.array(src), np.array(scale)


class Jet:
    __array_priority__ = 1000

    def __init__(self, space: JetSpace, coeffs):
        self.space = space
        self.coeffs = np.asarray(coeffs)

    # construction ---------------------------------------------------------
    @classmethod
    def variables(cls, point, order: int) -> list["Jet"]:
        """Independent variables x_i = point_i + dx_i, batched over leading axes."""
        point = np.asarray(point, dtype=float)
        nvars = point.shape[-1]
        space = jet_space(nvars, order)
        out = []
        for i in range(nvars):
            c = np.zeros(point.shape[:-1] + (space.size,), dtype=point.dtype)
            c[..., 0] = point[..., i]
            if order >= 1:
                e = [0] * nvars
                e[i] = 1
                c[..., space.index[tuple(e)]] = 1.0
            out.append(cls(space, c))
        return out

    @property
    def value(self):
        return self.coeffs[..., 0]

    def derivatives(self) -> np.ndarray:
        """Partial derivatives d^alpha f, in ``space.multi`` order (last axis)."""
        return self.coeffs * self.space.factorial

    def derivative(self, alpha) -> np.ndarray:
        i = self.space.index[tuple(alpha)]
        return self.coeffs[..., i] * self.space.factorial[i]

    def partial(self, i: int) -> "Jet":
        """d/dx_i as a jet of one order less."""
        low = jet_space(self.space.nvars, self.space.order - 1)
        src, scale = _partial_plan(self.space.nvars, self.space.order, i)
        return Jet(low, self.coeffs[..., src] * scale)

    def truncate(self, order: int) -> "Jet":
        """Drop terms above ``order``; graded ordering makes the low space a prefix."""
        low = jet_space(self.space.nvars, order)
        return Jet(low, self.coeffs[..., : low.size])

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            return other.coeffs
        other = np.asarray(other)
        c = np.zeros(other.shape + (self.space.size,), dtype=np.result_type(other, self.coeffs))
        c[..., 0] = other
        return c

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.coeffs + other.coeffs)
        c = self.coeffs.astype(np.result_type(self.coeffs, np.asarray(other)), copy=True)
        c = c + np.zeros(np.shape(other) + (1,), dtype=c.dtype)
        c[..., 0] += other
        return Jet(self.space, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.mul(self.coeffs, other.coeffs))
        other = np.asarray(other)
        return Jet(self.space, self.coeffs * other[..., None])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other)
        return Jet(self.space, self.coeffs / other[..., None])

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, r):
        if isinstance(r, Jet):
            return (self.log() * r).exp()
        if float(r) == int(r) and 0 <= r <= 8:
            out = Jet(self.space, self._lift(np.ones(self.coeffs.shape[:-1])))
            for _ in range(int(r)):
                out = out * self
            return out
        r = float(r)
        c0 = self.value
        scale = np.ones_like(c0)
        derivs = []
        for k in range(self.space.order + 1):
            derivs.append(scale * c0 ** (r - k))
            scale = scale * (r - k) / (k + 1)
        return self._compose(derivs)

    # elementary functions ---------------------------------------------------
    def _compose(self, derivs):
        """f(c0 + h) = sum_k derivs[k] h^k with h the non-constant part."""
        h = self.coeffs.copy()
        h[..., 0] = 0
        out = self._lift(derivs[-1])
        for d in reversed(derivs[:-1]):
            out = self.space.mul(out, h)
            out[..., 0] += d
        return Jet(self.space, out)

    def reciprocal(self):
        c0 = self.value
        return self._compose([(-1.0) ** k / c0 ** (k + 1) for k in range(self.space.order + 1)])

    def log(self):
        c0 = self.value
        derivs = [np.log(c0)]
        derivs += [(-1.0) ** (k + 1) / (k * c0**k) for k in range(1, self.space.order + 1)]
        return self._compose(derivs)

    def exp(self):
        e = np.exp(self.value)
        return self._compose([e / math.factorial(k) for k in range(self.space.order + 1)])

    def sqrt(self):
        return self ** 0.5

    def __repr__(self):
        return f"Jet(nvars={self.space.nvars}, order={self.space.order}, value={self.value!r})"


def log(x):
    return x.log() if isinstance(x, Jet) else np.log(x)


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def value(x):
    """Base-point value of a jet, or ``x`` itself for plain numbers/arrays."""
    return x.value if isinstance(x, Jet) else x
