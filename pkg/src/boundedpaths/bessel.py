"""Bessel-function numerics for the continuous-side speed constant.

The chain is: power series for J0 and J1 (compensated summation), a
sign-bracketed bisection for the first positive zero of J0, adaptive
quadrature for the weighted-orthogonality identities, and finally the
mean square radius of the disk-confined diffusion and its reciprocal,
the limiting speed 3 / (1 - 2 j0^-2) = 4.5860...

Series, root finder and quadrature are deliberately self-contained so the
exact-rational series oracle in the tests remains an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .errors import QuadratureError

SERIES_WINDOW = 20.0          # x-range with certified series accuracy
_SERIES_RELTOL = 1e-18


@dataclass(frozen=True)
class QuadratureConfig:
    """Adaptive-quadrature knobs: absolute tolerance and subdivision cap."""

    abs_tol: float = 1e-12
    max_subdivisions: int = 200_000
    method: str = "adaptive-simpson"

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise ValueError("tolerance must be positive")


_DEFAULT_QUAD = QuadratureConfig()


def _series(x: float, shift: int) -> float:
    """Compensated alternating series sum_k (-1)^k (x/2)^{2k+shift} / (k! (k+shift)!).

    shift = 0 gives J0, shift = 1 gives J1.  Terms are generated by
    recurrence; summation is Kahan-compensated and stops once the term
    drops below 1e-18 of the largest partial magnitude.
    """
    if not 0.0 <= x <= SERIES_WINDOW:
        raise ValueError(f"series window is [0, {SERIES_WINDOW}], got {x}")
    h = 0.5 * x
    term = h if shift else 1.0
    total = term
    comp = 0.0
    biggest = abs(term)
    k = 0
    while True:
        k += 1
        term *= -(h * h) / (k * (k + shift))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        biggest = max(biggest, abs(total))
        if abs(term) <= _SERIES_RELTOL * max(biggest, 1.0):
            return total


def bessel_j0(x: float) -> float:
    """J0 by power series on [0, 20]; absolute error <= 1e-12 there."""
    return _series(x, 0)


def bessel_j1(x: float) -> float:
    """J1 by its power series on [0, 20] (used for J0' = -J1)."""
    return _series(x, 1)


def bessel_j0_fraction(x: Fraction, terms: int = 50) -> Fraction:
    """Exact-rational truncated J0 series: the independent oracle.

    Evaluates sum_{k<terms} (-1)^k (x/2)^{2k} / (k!)^2 in rational
    arithmetic.  For |x| <= 5 and 50 terms the truncation error is far
    below 1e-30, so disagreement with ``bessel_j0`` beyond 1e-12 indicts
    the float series, not this oracle.
    """
    q = x * x / 4
    term = Fraction(1)
    total = Fraction(1)
    for k in range(1, terms):
        term *= -q / (k * k)
        total += term
    return total


class BesselZero(NamedTuple):
    """First positive zero of J0 and the derivative J0' there."""

    x: float
    dj0: float
    bracket_low: float
    bracket_high: float


def find_j0(tol: float = 1e-13) -> BesselZero:
    """Sign-bracketed bisection for the first positive zero of J0.

    The initial bracket [2, 3] is verified by evaluation (J0(2) > 0 >
    J0(3)); the returned bracket endpoints certify the root.  J0' at the
    root comes from the companion J1 series, not differencing.
    """
    lo, hi = 2.0, 3.0
    flo, fhi = bessel_j0(lo), bessel_j0(hi)
    if not (flo > 0 > fhi):
        raise AssertionError("J0 sign bracket on [2, 3] failed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bessel_j0(mid) > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return BesselZero(root, -bessel_j1(root), lo, hi)


# -- Quadrature -----------------------------------------------------------------


def _simpson(f, a, fa, m, fm, b, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def integrate(f: Callable[[float], float], a: float, b: float,
              config: QuadratureConfig | None = None) -> float:
    """Adaptive Simpson quadrature to absolute tolerance.

    Error control is the classical two-halves comparison (|S2 - S1|/15);
    exceeding the subdivision budget raises QuadratureError rather than
    returning a degraded value.
    """
    cfg = config or _DEFAULT_QUAD
    if a > b:
        raise ValueError("need a <= b")
    if a == b:
        return 0.0
    used = 0

    def rec(a, fa, b, fb, m, fm, whole, tol, depth):
        nonlocal used
        used += 1
        if used > cfg.max_subdivisions:
            raise QuadratureError(
                f"quadrature exceeded {cfg.max_subdivisions} subdivisions")
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(f, a, fa, lm, flm, m, fm)
        right = _simpson(f, m, fm, rm, frm, b, fb)
        err = left + right - whole
        if abs(err) <= 15.0 * tol or depth > 60:
            return left + right + err / 15.0
        half = 0.5 * tol
        return (rec(a, fa, m, fm, lm, flm, left, half, depth + 1)
                + rec(m, fm, b, fb, rm, frm, right, half, depth + 1))

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, fa, m, fm, b, fb)
    return rec(a, fa, b, fb, m, fm, whole, cfg.abs_tol, 0)


# -- Identities -------------------------------------------------------------------


def schafheitlin_residual(mu: float, z: float,
                          config: QuadratureConfig | None = None) -> float:
    """|LHS - RHS| of Schafheitlin's reduction formula at (mu, z).

    Both integrals are evaluated independently by ``integrate``; the
    boundary bracket is evaluated at z only, its x = 0 limit vanishing
    for mu >= 0 because of the x^{mu+1} factor (asserted).
    """
    if mu < 0:
        raise ValueError("mu must be >= 0")
    if not 0 < z <= SERIES_WINDOW:
        raise ValueError("z must lie in the series window")

    def j0sq_weight(p):
        return lambda x: (x ** p) * bessel_j0(x) ** 2

    lhs = (mu + 2.0) * integrate(j0sq_weight(mu + 2.0), 0.0, z, config)

    def bracket(x):
        j0 = bessel_j0(x)
        dj0 = -bessel_j1(x)
        inner = (x * dj0 - 0.5 * (mu + 1.0) * j0) ** 2 \
            + (x * x + 0.25 * (mu + 1.0) ** 2) * j0 * j0
        return x ** (mu + 1.0) * inner

    assert bracket(0.0) == 0.0  # x^{mu+1} kills the 0 endpoint for mu >= 0
    rhs = -0.25 * (mu + 1.0) ** 3 * integrate(j0sq_weight(mu), 0.0, z, config) \
        + 0.5 * bracket(z)
    return abs(lhs - rhs)


def weighted_orthogonality_residual(config: QuadratureConfig | None = None) -> float:
    """|int_0^{j0} x J0(x)^2 dx - (1/2) j0^2 J0'(j0)^2| (weight-x identity)."""
    zero = find_j0()
    integral = integrate(lambda x: x * bessel_j0(x) ** 2, 0.0, zero.x, config)
    return abs(integral - 0.5 * zero.x ** 2 * zero.dj0 ** 2)


def mean_square_radius(config: QuadratureConfig | None = None,
                       agreement_tol: float = 1e-8) -> tuple[float, float]:
    """Mean square radius of the disk-confined diffusion, two ways.

    Returns (ratio, closed): the quadrature ratio
    j0^-2 * int x^3 J0^2 / int x J0^2 over [0, j0], and the closed form
    (1 - 2 j0^-2) / 3.  Their agreement within ``agreement_tol`` is
    asserted -- disagreement means a broken quadrature or series.
    """
    zero = find_j0()
    j0 = zero.x
    num = integrate(lambda x: x ** 3 * bessel_j0(x) ** 2, 0.0, j0, config)
    den = integrate(lambda x: x * bessel_j0(x) ** 2, 0.0, j0, config)
    ratio = num / (den * j0 * j0)
    closed = (1.0 - 2.0 / (j0 * j0)) / 3.0
    if abs(ratio - closed) > agreement_tol:
        raise AssertionError(
            f"mean-square-radius routes disagree: {ratio} vs {closed}")
    return ratio, closed


def limiting_speed() -> float:
    """The asymptotic speed 3 / (1 - 2 j0^-2) = 4.5860... of the
    unit-capped conditioned motion; equals 1 / mean_square_radius."""
    j0 = find_j0().x
    return 3.0 / (1.0 - 2.0 / (j0 * j0))


def invariant_density_moment(p: int,
                             config: QuadratureConfig | None = None) -> float:
    """E |x|^p under the stationary law of the disk-confined diffusion.

    The density is proportional to J0(j0 r)^2 with the area element, so
    the moment reduces to radial integrals; p = 0 returns 1 and p = 2 the
    mean square radius.
    """
    if not 0 <= p <= 8:
        raise ValueError("p must be in [0, 8]")
    j0 = find_j0().x
    num = integrate(lambda r: r ** (p + 1) * bessel_j0(j0 * r) ** 2,
                    0.0, 1.0, config)
    den = integrate(lambda r: r * bessel_j0(j0 * r) ** 2, 0.0, 1.0, config)
    return num / den


@dataclass(frozen=True)
class ContinuousConstants:
    """The continuous-side constants bundle, with derivation tolerances."""

    j0: float
    dj0: float
    lambda0: float          # j0^2 / 2: principal rate for the (1/2)-Laplacian
    C: float                # normalization 2 pi int_0^1 r J0(j0 r)^2 dr
    m0: float
    gamma0: float
    root_tol: float
    quad_tol: float

    def to_json(self) -> dict:
        return {
            "j0": self.j0, "dj0": self.dj0, "lambda0": self.lambda0,
            "normalization": self.C, "mean_square_radius": self.m0,
            "limiting_speed": self.gamma0,
            "tolerances": {"root": self.root_tol, "quadrature": self.quad_tol},
        }


def continuous_constants(config: QuadratureConfig | None = None) -> ContinuousConstants:
    """Compute the full constants bundle with its tolerances recorded.

    lambda0 follows the (1/2)-Laplacian convention (half the value the
    plain Laplacian convention would give); this matters when comparing
    against references that use the other convention.
    """
    cfg = config or _DEFAULT_QUAD
    zero = find_j0()
    _, m0 = mean_square_radius(cfg)
    C = 2.0 * math.pi * integrate(
        lambda r: r * bessel_j0(zero.x * r) ** 2, 0.0, 1.0, cfg)
    return ContinuousConstants(
        j0=zero.x,
        dj0=zero.dj0,
        lambda0=0.5 * zero.x ** 2,
        C=C,
        m0=m0,
        gamma0=1.0 / m0,
        root_tol=zero.bracket_high - zero.bracket_low,
        quad_tol=cfg.abs_tol,
    )
