"""Bound constants and the distinct/simple zero proportion combiners.

Two independent constants are computed from kernel jets:

  c(theta, r, R)   one kernel per mollifier pair, combined as
                   h11 + (1/r) d_a h21 + (1/r) d_b h12 + (1/r^2) d_ab h22,
                   all at a = b = -R;
  c1(theta, R)     a single kernel for the pair (P, P), hit on each side by
                   the twist operator D = (1-delta) Id + delta (Id + 2 d) Q(-d)
                   and extracted at (0,0).

From them the bound coefficients are nu = ln(c)/(2R) and
kappa = 1 - ln(c1)/R (natural logarithm: the only base consistent with the
reference constants), and the four proportions

  d        = 1/2 + kappa/2 - nu        s        = kappa - 2 nu
  d_grh    = 1 - nu                    s_grh    = 1 - 2 nu.

nu and kappa share no parameters, so a report evaluates its two halves
independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .jets import jet_extract
from .kernel import KernelSpec, kernel_jet, moments
from .polyalg import MollifierShape, TwistShape, expand_mollifier, expand_twist


class NonFiniteError(ArithmeticError):
    """A bound computation produced NaN or infinity."""


class NonPositiveConstantError(ValueError):
    """log of a non-positive moment constant requested."""


C_JET_ORDER = 2  # value, one derivative per variable, and the mixed term


@dataclass(frozen=True)
class SectionFourParams:
    """Inputs of the additional-zeros constant c: two mollifier shapes plus
    the derivative weight r and the contour offset R."""

    p1_shape: MollifierShape
    p2_shape: MollifierShape
    theta: float
    r: float
    R: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class SectionFiveParams:
    """Inputs of the critical-line constant c1: one mollifier shape, a twist
    shape, the mixing weight delta and the contour offset R."""

    p_shape: MollifierShape
    q_shape: TwistShape
    theta: float
    R: float
    delta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class BoundReport:
    c: float
    nu: float
    c1: float
    kappa: float
    d_uncond: float
    s_uncond: float
    d_grh: float
    s_grh: float
    params4: SectionFourParams
    params5: SectionFiveParams


def c_value(p: SectionFourParams) -> float:
    """The mollified second-moment constant of the two-mollifier detector.

    Builds kernels for the pairs (P1,P1), (P2,P1), (P1,P2), (P2,P2) at
    a = b = -R and combines value, first and mixed-second extractions with
    weights 1, 1/r, 1/r, 1/r^2.
    """
    poly1 = expand_mollifier(p.p1_shape)
    poly2 = expand_mollifier(p.p2_shape)

    def kern(pa, pb):
        return kernel_jet(KernelSpec(moments(pa, pb), p.theta, p.R, C_JET_ORDER))

    h11 = kern(poly1, poly1)
    h21 = kern(poly2, poly1)
    h12 = kern(poly1, poly2)
    h22 = kern(poly2, poly2)
    inv_r = 1.0 / p.r
    c = (jet_extract(h11, 0, 0)
         + inv_r * jet_extract(h21, 1, 0)
         + inv_r * jet_extract(h12, 0, 1)
         + inv_r * inv_r * jet_extract(h22, 1, 1))
    if not math.isfinite(c):
        raise NonFiniteError(f"c evaluated to {c!r}")
    return c


def nu_bound(c: float, R: float) -> float:
    """Additional-zeros bound coefficient ln(c) / (2R)."""
    if not c > 0:
        raise NonPositiveConstantError(f"c must be positive, got {c!r}")
    if not R > 0:
        raise ValueError(f"R must be positive, got {R!r}")
    return math.log(c) / (2.0 * R)


def twist_operator_coefficients(q_monomial: list[float], delta: float) -> list[float]:
    """Expansion of (1-delta) Id + delta (Id + 2 d) Q(-d) over powers of d.

    With Q(x) = sum_k q_k x^k the derivative-power coefficients are

        u_j = (1-delta) [j=0] + delta (-1)^j (q_j - 2 q_{j-1}),

    one entry per j = 0 .. deg(Q)+1.  These are exactly the weights of the
    coefficient-shift maps the operator induces on a jet grid.
    """
    deg = len(q_monomial) - 1
    u = [0.0] * (deg + 2)
    u[0] = 1.0 - delta
    for j in range(deg + 2):
        qj = q_monomial[j] if j <= deg else 0.0
        qjm1 = q_monomial[j - 1] if 1 <= j <= deg + 1 else 0.0
        u[j] += delta * ((-1.0) ** j) * (qj - 2.0 * qjm1)
    return u


def c1_value(p: SectionFiveParams) -> float:
    """The twisted second-moment constant of the critical-line detector.

    The kernel for the pair (P, P) is built to order deg(Q)+1 per variable
    (the Id + 2d factor needs one derivative beyond Q's degree), then the
    operator is applied in a and in b as extraction sums.
    """
    poly = expand_mollifier(p.p_shape)
    q_poly = expand_twist(p.q_shape)
    q_monomial = q_poly.float_coeffs()
    order = (len(q_monomial) - 1) + 1
    h = kernel_jet(KernelSpec(moments(poly, poly), p.theta, p.R, order))
    u = twist_operator_coefficients(q_monomial, p.delta)
    c1 = 0.0
    for j, uj in enumerate(u):
        if uj == 0.0:
            continue
        for l, ul in enumerate(u):
            if ul == 0.0:
                continue
            c1 += uj * ul * jet_extract(h, j, l)
    if not math.isfinite(c1):
        raise NonFiniteError(f"c1 evaluated to {c1!r}")
    return c1


def kappa_bound(c1: float, R: float) -> float:
    """Critical-line proportion coefficient 1 - ln(c1) / R."""
    if not c1 > 0:
        raise NonPositiveConstantError(f"c1 must be positive, got {c1!r}")
    if not R > 0:
        raise ValueError(f"R must be positive, got {R!r}")
    return 1.0 - math.log(c1) / R


def unconditional_bounds(kappa: float, nu: float) -> tuple[float, float]:
    """Distinct and simple proportions without GRH: (1/2 + k/2 - nu, k - 2 nu)."""
    return 0.5 + kappa / 2.0 - nu, kappa - 2.0 * nu


def grh_bounds(nu: float) -> tuple[float, float]:
    """Distinct and simple proportions under GRH: (1 - nu, 1 - 2 nu)."""
    return 1.0 - nu, 1.0 - 2.0 * nu


def full_report(p4: SectionFourParams, p5: SectionFiveParams) -> BoundReport:
    c = c_value(p4)
    nu = nu_bound(c, p4.R)
    c1 = c1_value(p5)
    kappa = kappa_bound(c1, p5.R)
    d_uncond, s_uncond = unconditional_bounds(kappa, nu)
    d_grh, s_grh = grh_bounds(nu)
    return BoundReport(c=c, nu=nu, c1=c1, kappa=kappa,
                       d_uncond=d_uncond, s_uncond=s_uncond,
                       d_grh=d_grh, s_grh=s_grh,
                       params4=p4, params5=p5)
