"""Points and maps on the Riemann surface of the logarithm.

The surface is the set of pairs (r, phi) with r > 0 and phi real.  The
argument phi is never reduced modulo 2*pi: two points with the same
projection but arguments differing by 2*pi are different points (they
live on different sheets).  All operations are pure functions on
immutable values.

>>> z = LPoint(4.0, 2 * math.pi)
>>> cpow(0.5, z)            # square root on the second sheet
(-2+...j)
>>> project(z)              # projection collapses sheets
(4-...j)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LPoint:
    """A point (r, phi) on the surface; r is the modulus, phi the unreduced argument."""

    r: float
    phi: float

    def __post_init__(self):
        if not (isinstance(self.r, (int, float)) and math.isfinite(self.r) and self.r > 0):
            raise ValueError(f"modulus must be a finite positive real, got {self.r!r}")
        if not (isinstance(self.phi, (int, float)) and math.isfinite(self.phi)):
            raise ValueError(f"argument must be a finite real, got {self.phi!r}")


@dataclass(frozen=True)
class QuadraticDomain:
    """The region 0 < r < c * exp(-C * sqrt(|phi|)) on the surface."""

    c: float
    C: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be a finite positive real, got {self.c!r}")
        if not (math.isfinite(self.C) and self.C > 0):
            raise ValueError(f"C must be a finite positive real, got {self.C!r}")


ONE = LPoint(1.0, 0.0)


def mul(a: LPoint, b: LPoint) -> LPoint:
    """Multiply two surface points: moduli multiply, arguments add."""
    return LPoint(a.r * b.r, a.phi + b.phi)


def power(rho: float, z: LPoint) -> LPoint:
    """The power map z -> (r**rho, rho*phi) for rho >= 0; power(0, z) is the unit."""
    if rho < 0:
        raise ValueError(f"power exponent must be nonnegative, got {rho!r}")
    if rho == 0:
        return ONE
    return LPoint(z.r ** rho, rho * z.phi)


def tau(z: LPoint) -> LPoint:
    """The conjugation involution (r, phi) -> (r, -phi)."""
    return LPoint(z.r, -z.phi)


def logmap(z: LPoint) -> complex:
    """The global logarithm log r + i*phi; a bijection onto the plane."""
    return complex(math.log(z.r), z.phi)


def cpow(alpha: float, z: LPoint) -> complex:
    """The complex value exp(alpha * logmap(z)) for alpha >= 0.

    For phi in (-pi, pi) this agrees with the principal-branch power of
    the projected point; on other sheets it differs, which is the point.
    """
    if alpha < 0:
        raise ValueError(f"power exponent must be nonnegative, got {alpha!r}")
    if alpha == 0:
        return 1.0 + 0.0j
    return cmath.exp(alpha * logmap(z))


def project(z: LPoint) -> complex:
    """Project to the punctured plane: r * exp(i*phi).  Never zero."""
    return cmath.rect(z.r, z.phi)


def from_complex(w: complex) -> LPoint:
    """Lift a nonzero complex number to the principal sheet (phi in (-pi, pi])."""
    if w == 0:
        raise ValueError("cannot lift zero to the surface")
    return LPoint(abs(w), cmath.phase(w))


def nudge(z: LPoint, delta: complex) -> LPoint:
    """Move z by the complex offset delta without changing sheets.

    The new argument stays within pi of z.phi, so finite-difference
    stencils built from nudge never jump sheets.  Requires
    |delta| < |z|.
    """
    w = 1 + delta / project(z)
    if w == 0:
        raise ValueError("nudge through the puncture is not defined")
    return LPoint(z.r * abs(w), z.phi + cmath.phase(w))


def sqd_contains(Q: QuadraticDomain, z: LPoint) -> bool:
    """Strict membership test r < c * exp(-C * sqrt(|phi|))."""
    return z.r < Q.c * math.exp(-Q.C * math.sqrt(abs(z.phi)))
