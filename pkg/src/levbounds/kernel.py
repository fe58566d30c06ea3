"""Moment tables and the singular mollifier kernel as a jet.

For a polynomial pair (P_1, P_2) and length exponent theta, the bilinear
moment function is

    g(a, b) = m_dd + a theta m_pd + b theta m_dp + a b theta^2 m_pp,

built from the four exact integrals over [0,1] of P_1'P_2', P_1'P_2,
P_1 P_2', P_1 P_2.  The kernel evaluated by this module is

    h(a, b) = [ g(b, a) - e^{-a-b} g(-a, -b) ] / (theta (a + b)),

carried as a Jet2 at a chosen base point, normally a0 = b0 = -R.  The
numerator vanishes identically on the line a + b = 0 (there e^{-a-b} = 1
and both g values coincide), so the singularity is removable and h is
entire.  Assembly exploits that explicitly: with s = a + b,

    g(b,a) - g(-a,-b) = theta s (m_pd + m_dp)        (exact identity)
    h(a,b) = (m_pd + m_dp) + E(s) g(-a,-b) / theta,  E(s) = (1 - e^{-s})/s,

which contains no division by s and so stays fully accurate even with the
base point close to (or on) the line a + b = 0.  The textbook assembly
jet_mul(numerator, jet_recip(theta (a+b))) loses all significant digits
of the high-order entries once |a0+b0| is small (the reciprocal's entries
grow like |s0|^-(m+n+1) with matching cancellation in the product), which
is why it is kept only as a cross-validation path.

Moments stay exact rationals until kernel assembly, where they convert
once to binary64; that single boundary is where all rounding enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .jets import Jet2, jet_add, jet_const, jet_exp, jet_mul, jet_recip, jet_scale, jet_sub, jet_var_a, jet_var_b
from .polyalg import Poly, integrate01_product, poly_derivative

import numpy as np


@dataclass(frozen=True)
class MomentTable:
    """The four exact moments of a polynomial pair."""

    m_dd: Fraction  # integral of P1' P2'
    m_dp: Fraction  # integral of P1' P2
    m_pd: Fraction  # integral of P1  P2'
    m_pp: Fraction  # integral of P1  P2

    def transpose(self) -> "MomentTable":
        """Moment table of the reversed pair (P2, P1)."""
        return MomentTable(self.m_dd, self.m_pd, self.m_dp, self.m_pp)


def moments(p1: Poly, p2: Poly) -> MomentTable:
    d1 = poly_derivative(p1)
    d2 = poly_derivative(p2)
    return MomentTable(
        m_dd=integrate01_product(d1, d2),
        m_dp=integrate01_product(d1, p2),
        m_pd=integrate01_product(p1, d2),
        m_pp=integrate01_product(p1, p2),
    )


@dataclass(frozen=True)
class KernelSpec:
    moments: MomentTable
    theta: float
    base_R: float
    order: int

    def __post_init__(self) -> None:
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if self.base_R < 1e-6:
            raise ValueError(f"base_R must be >= 1e-6, got {self.base_R}")
        if self.order < 0:
            raise ValueError("order must be >= 0")


def g_jet(mt: MomentTable, theta: float, base: tuple[float, float], order: int,
          swap: bool = False, negate: bool = False) -> Jet2:
    """The bilinear g as an exact jet (bidegree (1,1); higher entries zero).

    swap   replaces (a, b) by (b, a); negate replaces them by (-a, -b).
    """
    mdd = float(mt.m_dd)
    ca = theta * float(mt.m_pd)   # coefficient of a
    cb = theta * float(mt.m_dp)   # coefficient of b
    cab = theta * theta * float(mt.m_pp)
    if swap:
        ca, cb = cb, ca
    if negate:
        ca, cb = -ca, -cb
    a0, b0 = base
    c = np.zeros((order + 1, order + 1))
    c[0, 0] = mdd + ca * a0 + cb * b0 + cab * a0 * b0
    if order >= 1:
        c[1, 0] = ca + cab * b0
        c[0, 1] = cb + cab * a0
        c[1, 1] = cab
    return Jet2(base, order, c)


def kernel_numerator_jet(mt: MomentTable, theta: float,
                         base: tuple[float, float], order: int) -> Jet2:
    """g(b,a) - e^{-a-b} g(-a,-b) as a jet; value is 0 whenever a0+b0 = 0."""
    straight = g_jet(mt, theta, base, order, swap=True)
    reflected = g_jet(mt, theta, base, order, negate=True)
    minus_sum = jet_scale(jet_add(jet_var_a(base, order), jet_var_b(base, order)), -1.0)
    return jet_sub(straight, jet_mul(jet_exp(minus_sum), reflected))


def _expm1_ratio_derivatives(s0: float, dmax: int) -> list[float]:
    """Derivatives E^(d)(s0), d = 0..dmax, of E(s) = (1 - e^{-s})/s.

    Summed from the entire-series form E^(d)(s) = sum_j (-1)^{d+j} s^j /
    (j! (d+j+1)).  For s0 <= 0 (every kernel base point) all terms share
    one sign, so the sum is exact to rounding; for s0 > 0 the alternating
    cancellation is bounded by e^{s0}, fine for the moderate synthetic
    bases the tests use.
    """
    out = []
    nterms = max(36, int(3 * abs(s0)) + 36)
    for d in range(dmax + 1):
        total = 0.0
        term = 1.0  # (-s0)^j / j!
        for j in range(nterms):
            total += term / (d + j + 1)
            term *= -s0 / (j + 1)
            if abs(term) < 1e-22 * (abs(total) + 1e-300) and j > abs(s0):
                break
        out.append(((-1.0) ** d) * total)
    return out


def _e_jet(base: tuple[float, float], order: int) -> Jet2:
    """Jet of E(a+b) at the base point; entry (m,n) = E^(m+n)(s0)/(m! n!)."""
    s0 = base[0] + base[1]
    derivs = _expm1_ratio_derivatives(s0, 2 * order)
    c = np.zeros((order + 1, order + 1))
    for m in range(order + 1):
        for n in range(order + 1):
            c[m, n] = derivs[m + n] / (math.factorial(m) * math.factorial(n))
    return Jet2(base, order, c)


def kernel_jet_at(mt: MomentTable, theta: float,
                  base: tuple[float, float], order: int) -> Jet2:
    """Kernel jet at an arbitrary base point, in the stable product form."""
    const = float(mt.m_pd + mt.m_dp)
    reflected = g_jet(mt, theta, base, order, negate=True)
    tail = jet_scale(jet_mul(_e_jet(base, order), reflected), 1.0 / theta)
    return jet_add(jet_const(const, base, order), tail)


def kernel_jet_division_form(mt: MomentTable, theta: float,
                             base: tuple[float, float], order: int) -> Jet2:
    """Textbook numerator/(theta (a+b)) assembly; validation only.

    Accurate while |a0 + b0| is comfortably away from zero; high-order
    entries degrade rapidly as the base approaches the removable
    singularity.
    """
    numerator = kernel_numerator_jet(mt, theta, base, order)
    denom = jet_scale(jet_add(jet_var_a(base, order), jet_var_b(base, order)), theta)
    return jet_mul(numerator, jet_recip(denom))


def kernel_jet(spec: KernelSpec) -> Jet2:
    """Kernel jet at the standard evaluation point a0 = b0 = -R."""
    return kernel_jet_at(spec.moments, spec.theta, (-spec.base_R, -spec.base_R),
                         spec.order)
