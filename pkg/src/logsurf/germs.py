"""Local biholomorphism germs at the puncture and their composition algebra.

A germ is the data (a, k, h, radius) describing the map

    phi(z) = a * z**k * (1 + h(z))

on the logarithmic surface, where a is a surface point (its argument is
part of the data), k is a nonnegative integer, and h is a power series
with h(0) = 0 and |h| <= 1/2 on the stated radius.  Germs with k >= 1
are stable under composition; germs with k = 1 form a group.

Composed radii always use the fixed printed formula
r = (1/10) * min(r(phi), r(psi)) / max(1, |a(psi)|), never a numerically
estimated improvement, so radius recursions stay bit-for-bit
reproducible.  The factory make_germ verifies the smallness of h by
circle sampling and shrinks the radius by halving until the sampled
bound holds; algebraic operations construct directly from the printed
formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGerm, NotInvertible, OutOfRadius
from .series import PowerSeries, binom_pow, ps_compose, ps_eval, ps_mul, reversion
from .surface import LPoint, mul, power, project, tau

IDENTITY_RADIUS = 1e12

_SAMPLE_FRACTIONS = (1.0, 0.5, 0.25)
_SAMPLE_ANGLES = 64


@dataclass(frozen=True)
class Germ:
    """Germ data (a, k, h, radius); member of the group class iff k = 1."""

    a: LPoint
    k: int
    h: PowerSeries
    radius: float

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 0):
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")
        if self.h.coeffs[0] != 0:
            raise ValueError("h must vanish at the origin")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be a finite positive real, got {self.radius!r}")


def _one_plus(h_coeffs: tuple) -> tuple:
    coeffs = list(h_coeffs)
    coeffs[0] = coeffs[0] + 1.0
    return tuple(coeffs)


def sampled_h_sup(h_coeffs: tuple, radius: float) -> float:
    """Max of |h| sampled on the circles radius * {1, 1/2, 1/4} x 64 angles."""
    coeffs = np.asarray(h_coeffs, dtype=complex)
    worst = 0.0
    angles = np.exp(2j * np.pi * np.arange(_SAMPLE_ANGLES) / _SAMPLE_ANGLES)
    for frac in _SAMPLE_FRACTIONS:
        w = radius * frac * angles
        vals = np.polyval(coeffs[::-1], w)
        worst = max(worst, float(np.max(np.abs(vals))))
    return worst


def _shrink_to_bound(h_coeffs: tuple, radius: float) -> float:
    r = float(radius)
    for _ in range(200):
        if sampled_h_sup(h_coeffs, r) <= 0.5:
            return r
        r /= 2.0
    raise ValueError("could not certify |h| <= 1/2 by radius halving")


def make_germ(a: LPoint, k: int, h_coeffs, radius: float) -> Germ:
    """Construct a germ, halving the radius until the sampled |h| <= 1/2 holds."""
    coeffs = tuple(complex(c) for c in h_coeffs) or (0.0 + 0.0j,)
    if coeffs[0] != 0:
        raise InvalidGerm("h must vanish at the origin")
    r = _shrink_to_bound(coeffs, radius)
    return Germ(a, k, PowerSeries(coeffs, r), r)


def identity_germ() -> Germ:
    return Germ(LPoint(1.0, 0.0), 1, PowerSeries((0.0,), IDENTITY_RADIUS), IDENTITY_RADIUS)


def rotation_germ(angle: float, radius: float = IDENTITY_RADIUS) -> Germ:
    """The germ z -> (r, phi + angle): a = (1, angle), k = 1, h = 0."""
    return Germ(LPoint(1.0, angle), 1, PowerSeries((0.0,), radius), radius)


def power_germ(m: int, radius: float = IDENTITY_RADIUS) -> Germ:
    """The monomial germ z -> z**m for integer m >= 1."""
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"power germ needs a positive integer, got {m!r}")
    return Germ(LPoint(1.0, 0.0), m, PowerSeries((0.0,), radius), radius)


def is_identity(phi: Germ) -> bool:
    return (
        phi.k == 1
        and phi.a.r == 1.0
        and phi.a.phi == 0.0
        and all(c == 0 for c in phi.h.coeffs)
    )


def is_ray(phi: Germ) -> bool:
    """True when the germ maps rays near 0 to exact rays: h vanishes identically."""
    return all(c == 0 for c in phi.h.coeffs)


def root_pullback(phi: Germ, m: int) -> Germ:
    """The germ of p_(1/m) o phi, defined when m divides k(phi).

    Data laws: a -> a**(1/m) on the surface, k -> k/m, and
    1 + h -> (1 + h)**(1/m) with the principal branch, which matches the
    surface root of the unit factor because |h| <= 1/2.  The radius
    starts unchanged and halves only if the sampled bound on the new h
    fails, so germs with h = 0 keep their radius exactly.
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"root order must be a positive integer, got {m!r}")
    if phi.k % m != 0:
        raise InvalidGerm(f"root order {m} does not divide k = {phi.k}")
    if m == 1:
        return phi
    a = power(1.0 / m, phi.a)
    h_new = list(binom_pow(phi.h.coeffs, 1.0 / m))
    h_new[0] = 0.0
    r = _shrink_to_bound(tuple(h_new), phi.radius)
    return Germ(a, phi.k // m, PowerSeries(tuple(h_new), r), r)


def s_series(phi: Germ) -> tuple:
    """Coefficients of the plane shadow a * w**k * (1 + h(w)) of the germ."""
    a1 = project(phi.a)
    return tuple([0j] * phi.k + [a1 * c for c in _one_plus(phi.h.coeffs)])


def apply_germ(phi: Germ, z: LPoint) -> LPoint:
    """Apply the germ to a surface point inside its radius.

    The unit factor 1 + h(z) is lifted with its principal argument,
    which lies in (-pi/2, pi/2) because |h| <= 1/2.
    """
    if z.r >= phi.radius:
        raise OutOfRadius(f"|z| = {z.r} is not below the germ radius {phi.radius}")
    hv = ps_eval(phi.h, project(z))
    unit = 1.0 + hv
    lifted = LPoint(abs(unit), cmath.phase(unit))
    return mul(phi.a, mul(power(phi.k, z), lifted))


def compose(phi: Germ, psi: Germ) -> Germ:
    """The germ of phi after psi.

    Data laws: a = a(phi) * a(psi)**k(phi) on the surface,
    k = k(phi) * k(psi), and
    1 + h = (1 + h(psi))**k(phi) * (1 + h(phi) o s(psi)).
    The radius is the printed (1/10)*min(r(phi), r(psi))/max(1, |a(psi)|).
    """
    if psi.k == 0:
        raise InvalidGerm("inner germ must have k >= 1")
    a = mul(phi.a, power(float(phi.k), psi.a))
    k = phi.k * psi.k
    factor1 = binom_pow(psi.h.coeffs, float(phi.k))
    factor2 = list(ps_compose(phi.h.coeffs, s_series(psi)))
    factor2[0] += 1.0
    h_new = list(ps_mul(factor1, factor2))
    h_new[0] = 0.0
    radius = 0.1 * min(phi.radius, psi.radius) / max(1.0, psi.a.r)
    return Germ(a, k, PowerSeries(tuple(h_new), radius), radius)


def invert(phi: Germ) -> Germ:
    """Group inverse for k = 1 germs, via series reversion of the shadow.

    The inverse shadow is f'(0)**-1 * w * (1 + h~(w)); its leading factor
    is the surface point b with a * b = (1, 0).  The radius starts at
    r(phi) and halves until the sampled bound on h~ holds, so germs with
    h = 0 keep their radius exactly.
    """
    if phi.k != 1:
        raise NotInvertible("only k = 1 germs are invertible")
    b = LPoint(1.0 / phi.a.r, -phi.a.phi)
    g = reversion(s_series(phi))
    a1 = project(phi.a)
    h_tilde = (0.0 + 0.0j,) + tuple(c * a1 for c in g[2:])
    r = _shrink_to_bound(h_tilde, phi.radius)
    return Germ(b, 1, PowerSeries(h_tilde, r), r)


def tau_conj(phi: Germ) -> Germ:
    """Conjugation by tau: a -> tau(a), h coefficients conjugated, radius kept."""
    h = PowerSeries(tuple(c.conjugate() for c in phi.h.coeffs), phi.h.radius, phi.h.boundM)
    return Germ(tau(phi.a), phi.k, h, phi.radius)


def arg_shift_bound(phi: Germ, z: LPoint) -> float:
    """|arg phi(z) - arg a(phi)|, asserted <= |arg z| + pi/2 for k = 1."""
    if phi.k != 1:
        raise InvalidGerm("argument shift bound is stated for k = 1 germs")
    if z.r >= phi.radius:
        raise OutOfRadius(f"|z| = {z.r} is not below the germ radius {phi.radius}")
    shift = abs(apply_germ(phi, z).phi - phi.a.phi)
    if shift > abs(z.phi) + math.pi / 2:
        raise AssertionError(
            f"argument shift {shift} exceeded |arg z| + pi/2 = {abs(z.phi) + math.pi / 2}"
        )
    return shift
