"""Truncated bivariate Taylor (jet) arithmetic at a base point.

A Jet2 of order K at (a0, b0) stores the grid

    coeffs[m, n] = d_a^m d_b^n f(a0, b0) / (m! n!)        for m, n <= K,

i.e. normalized Taylor coefficients over a *rectangular* truncation.
Rectangular (not total-degree) truncation matters: the twist operator
applies up to deg(Q)+1 derivatives independently in each variable, which
a total-degree cutoff would corrupt.

exp and reciprocal use nested univariate recurrences: the jet is viewed as
a series in db whose coefficients are series in da, so both reduce to the
classical 1-D power-series recurrences over a coefficient ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NEAR_SINGULAR_THRESHOLD = 1e-9


class NearSingularError(ArithmeticError):
    """Jet reciprocal attempted too close to a zero value (a+b ~ 0 line)."""


class NonFiniteJetError(ArithmeticError):
    """A jet operation produced NaN or infinity."""


@dataclass(frozen=True, eq=False)
class Jet2:
    base: tuple[float, float]
    order: int
    coeffs: np.ndarray  # shape (order+1, order+1), float64

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("jet order must be >= 0")
        if self.coeffs.shape != (self.order + 1, self.order + 1):
            raise ValueError(f"coefficient grid {self.coeffs.shape} does not match "
                             f"order {self.order}")
        if not np.all(np.isfinite(self.coeffs)):
            raise NonFiniteJetError("jet has non-finite entries")
        self.coeffs.setflags(write=False)

    @property
    def value(self) -> float:
        return float(self.coeffs[0, 0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Jet2):
            return NotImplemented
        return (self.base == other.base and self.order == other.order
                and np.array_equal(self.coeffs, other.coeffs))


def _check_compatible(f: Jet2, g: Jet2) -> None:
    if f.base != g.base or f.order != g.order:
        raise ValueError("jet base/order mismatch")


def jet_const(v: float, base: tuple[float, float], order: int) -> Jet2:
    c = np.zeros((order + 1, order + 1))
    c[0, 0] = v
    return Jet2(base, order, c)


def jet_var_a(base: tuple[float, float], order: int) -> Jet2:
    c = np.zeros((order + 1, order + 1))
    c[0, 0] = base[0]
    if order >= 1:
        c[1, 0] = 1.0
    return Jet2(base, order, c)


def jet_var_b(base: tuple[float, float], order: int) -> Jet2:
    c = np.zeros((order + 1, order + 1))
    c[0, 0] = base[1]
    if order >= 1:
        c[0, 1] = 1.0
    return Jet2(base, order, c)


def jet_add(f: Jet2, g: Jet2) -> Jet2:
    _check_compatible(f, g)
    return Jet2(f.base, f.order, f.coeffs + g.coeffs)


def jet_sub(f: Jet2, g: Jet2) -> Jet2:
    _check_compatible(f, g)
    return Jet2(f.base, f.order, f.coeffs - g.coeffs)


def jet_scale(f: Jet2, s: float) -> Jet2:
    return Jet2(f.base, f.order, f.coeffs * s)


def jet_mul(f: Jet2, g: Jet2) -> Jet2:
    """Truncated 2-D convolution (terms with m > K or n > K dropped)."""
    _check_compatible(f, g)
    k = f.order
    out = np.zeros((k + 1, k + 1))
    fc, gc = f.coeffs, g.coeffs
    for m in range(k + 1):
        for n in range(k + 1):
            v = fc[m, n]
            if v != 0.0:
                out[m:, n:] += v * gc[: k + 1 - m, : k + 1 - n]
    return Jet2(f.base, k, out)


def _series_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Truncated product of two 1-D coefficient arrays of equal length."""
    return np.convolve(p, q)[: len(p)]


def _series_exp(c: np.ndarray) -> np.ndarray:
    """exp of a truncated 1-D series: g' = c' g recurrence."""
    g = np.zeros_like(c)
    g[0] = math.exp(c[0])
    for k in range(1, len(c)):
        acc = 0.0
        for j in range(1, k + 1):
            acc += j * c[j] * g[k - j]
        g[k] = acc / k
    return g


def _series_recip(c: np.ndarray) -> np.ndarray:
    """Reciprocal of a truncated 1-D series (c[0] != 0)."""
    g = np.zeros_like(c)
    g[0] = 1.0 / c[0]
    for k in range(1, len(c)):
        acc = 0.0
        for j in range(1, k + 1):
            acc += c[j] * g[k - j]
        g[k] = -acc * g[0]
    return g


def jet_exp(f: Jet2) -> Jet2:
    """Exponential of a jet, exact to order K.

    Outer recurrence in the b-direction with coefficients that are
    truncated series in a: n G_n = sum_{j=1}^{n} j F_j G_{n-j}.
    """
    k = f.order
    fc = f.coeffs
    out = np.empty_like(fc)
    out[:, 0] = _series_exp(fc[:, 0])
    for n in range(1, k + 1):
        acc = np.zeros(k + 1)
        for j in range(1, n + 1):
            acc += j * _series_mul(fc[:, j], out[:, n - j])
        out[:, n] = acc / n
    return Jet2(f.base, k, out)


def jet_recip(f: Jet2) -> Jet2:
    """Reciprocal series of a jet, exact to order K.

    Rejects base values within NEAR_SINGULAR_THRESHOLD of zero; kernel
    evaluations sit at a0+b0 = -2R, far from the removable singularity,
    so a tight rejection is safe.
    """
    if abs(f.value) < NEAR_SINGULAR_THRESHOLD:
        raise NearSingularError(
            f"jet value {f.value!r} within {NEAR_SINGULAR_THRESHOLD} of zero")
    k = f.order
    fc = f.coeffs
    out = np.empty_like(fc)
    g0 = _series_recip(fc[:, 0])
    out[:, 0] = g0
    for n in range(1, k + 1):
        acc = np.zeros(k + 1)
        for j in range(1, n + 1):
            acc += _series_mul(fc[:, j], out[:, n - j])
        out[:, n] = -_series_mul(g0, acc)
    return Jet2(f.base, k, out)


def jet_extract(f: Jet2, m: int, n: int) -> float:
    """d_a^m d_b^n f at the base point: coeffs[m, n] * m! * n!."""
    if m > f.order or n > f.order:
        raise ValueError(f"derivative order ({m},{n}) exceeds jet order {f.order}")
    return float(f.coeffs[m, n]) * math.factorial(m) * math.factorial(n)
