"""Truncated power series and Puiseux series with radius bookkeeping.

A PowerSeries is a plain truncated Taylor series a_0 + a_1 w + ... + a_N w**N
together with an asserted radius of validity and, optionally, an asserted
sup bound on that disc.  A PuiseuxSeries wraps a PowerSeries in the
variable w = z**(1/d) and evaluates on the logarithmic surface, where
fractional powers are single valued.

All radius claims propagate by fixed printed formulas, never by numeric
estimation; every evaluation outside an asserted radius raises OutOfRadius.
Coefficients are complex floats.  Results of arithmetic are truncated at
the global order from logsurf.config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lcm
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from . import config
from .errors import InvalidGerm, OutOfRadius
from .surface import LPoint, cpow, project

if TYPE_CHECKING:
    from .germs import Germ


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series sum(coeffs[n] * w**n), asserted valid for |w| < radius."""

    coeffs: tuple
    radius: float
    boundM: float | None = None

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a power series needs at least the constant coefficient")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be a finite positive real, got {self.radius!r}")
        if self.boundM is not None and not self.boundM > 0:
            raise ValueError(f"boundM must be positive when present, got {self.boundM!r}")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def power_series(coeffs: Iterable[complex], radius: float, boundM: float | None = None) -> PowerSeries:
    return PowerSeries(tuple(complex(c) for c in coeffs), float(radius), boundM)


ZERO_PS = PowerSeries((0.0,), 1e300)
ONE_PS = PowerSeries((1.0,), 1e300)


def ps_eval(f: PowerSeries | Sequence[complex], w: complex) -> complex:
    """Evaluate at a complex point, summing in ascending degree order."""
    coeffs = f.coeffs if isinstance(f, PowerSeries) else f
    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for n, c in enumerate(coeffs):
        if n > 0:
            term *= w
        total += c * term
    return total


def _arr(coeffs: Sequence[complex], length: int) -> np.ndarray:
    out = np.zeros(length, dtype=complex)
    src = np.asarray(coeffs, dtype=complex)
    out[: min(len(src), length)] = src[: min(len(src), length)]
    return out


def ps_add(f: Sequence[complex], g: Sequence[complex]) -> tuple:
    n = max(len(f), len(g))
    return tuple((_arr(f, n) + _arr(g, n)).tolist())


def ps_scale(c: complex, f: Sequence[complex]) -> tuple:
    return tuple((c * np.asarray(f, dtype=complex)).tolist())


def ps_mul(f: Sequence[complex], g: Sequence[complex], order: int | None = None) -> tuple:
    if order is None:
        order = config.get_trunc_order()
    prod = np.convolve(np.asarray(f, dtype=complex), np.asarray(g, dtype=complex))
    return tuple(prod[: order + 1].tolist())


def ps_compose(f: Sequence[complex], g: Sequence[complex], order: int | None = None) -> tuple:
    """Coefficients of f(g(w)) truncated; requires g(0) = 0."""
    if order is None:
        order = config.get_trunc_order()
    g_arr = np.asarray(g, dtype=complex)
    if len(g_arr) and g_arr[0] != 0:
        raise ValueError("inner series must have zero constant term")
    acc = np.zeros(1, dtype=complex)
    for c in reversed(np.asarray(f, dtype=complex)):
        acc = np.convolve(acc, g_arr)[: order + 1]
        if len(acc) == 0:
            acc = np.zeros(1, dtype=complex)
        acc[0] += c
    return tuple(acc[: order + 1].tolist())


def binom_coefficients(alpha: float, count: int) -> np.ndarray:
    """Generalized binomial coefficients C(alpha, j) for j = 0..count-1."""
    out = np.zeros(count, dtype=complex)
    b = 1.0 + 0.0j
    for j in range(count):
        out[j] = b
        b *= (alpha - j) / (j + 1)
    return out


def binom_pow(h: Sequence[complex], alpha: float, order: int | None = None) -> tuple:
    """Coefficients of (1 + h(w))**alpha via the binomial series; h(0) = 0.

    Converges wherever |h| <= 1/2, the standing smallness bound; at the
    truncated level the expansion is exact polynomial algebra because
    h**j has valuation >= j.
    """
    if order is None:
        order = config.get_trunc_order()
    h_arr = np.asarray(h, dtype=complex)
    if len(h_arr) and h_arr[0] != 0:
        raise ValueError("binomial base must be 1 + (series without constant term)")
    coeffs = binom_coefficients(alpha, order + 1)
    acc = np.zeros(order + 1, dtype=complex)
    acc[0] = coeffs[0]
    pw = np.ones(1, dtype=complex)
    for j in range(1, order + 1):
        pw = np.convolve(pw, h_arr)[: order + 1]
        if not pw.any():
            break
        acc[: len(pw)] += coeffs[j] * pw
    return tuple(acc.tolist())


def log1p_series(h: Sequence[complex], order: int | None = None) -> tuple:
    """Coefficients of log(1 + h(w)) (principal branch); h(0) = 0."""
    if order is None:
        order = config.get_trunc_order()
    h_arr = np.asarray(h, dtype=complex)
    if len(h_arr) and h_arr[0] != 0:
        raise ValueError("log1p base must be 1 + (series without constant term)")
    acc = np.zeros(order + 1, dtype=complex)
    pw = np.ones(1, dtype=complex)
    for j in range(1, order + 1):
        pw = np.convolve(pw, h_arr)[: order + 1]
        if not pw.any():
            break
        acc[: len(pw)] += ((-1) ** (j + 1) / j) * pw
    return tuple(acc.tolist())


def reversion(f: Sequence[complex], order: int | None = None) -> tuple:
    """Compositional inverse of f = f_1 w + f_2 w**2 + ... with f_1 != 0.

    Returns g with f(g(w)) = w up to the truncation order.
    """
    if order is None:
        order = config.get_trunc_order()
    f_arr = _arr(f, order + 1)
    if f_arr[0] != 0:
        raise ValueError("reversion needs zero constant term")
    if f_arr[1] == 0:
        raise ValueError("reversion needs a nonzero linear coefficient")
    g = np.zeros(order + 1, dtype=complex)
    if order >= 1:
        g[1] = 1 / f_arr[1]
    for n in range(2, order + 1):
        comp = np.asarray(ps_compose(f_arr, g[: n], order=n), dtype=complex)
        residual = comp[n] if len(comp) > n else 0.0
        g[n] = -residual / f_arr[1]
    return tuple(g.tolist())


@dataclass(frozen=True)
class PuiseuxSeries:
    """Series sum(a_n z**(n/d)): a PowerSeries base in w = z**(1/d).

    The radius is measured in z and never exceeds base.radius**d, so an
    in-radius z always yields an in-radius w.
    """

    d: int
    base: PowerSeries
    radius: float

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ValueError(f"denominator must be a positive integer, got {self.d!r}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be a finite positive real, got {self.radius!r}")
        cap = self.base.radius ** self.d if self.base.radius < 1e100 else 1e300
        if self.radius > cap * (1 + 1e-12):
            raise ValueError("radius in z may not exceed base.radius**d")


def puiseux(coeffs: Iterable[complex], radius: float, d: int = 1) -> PuiseuxSeries:
    """Build a Puiseux series from base coefficients (index n means z**(n/d))."""
    base_radius = radius ** (1.0 / d) if radius < 1e100 else 1e300
    base = PowerSeries(tuple(complex(c) for c in coeffs), base_radius)
    return PuiseuxSeries(d, base, float(radius))


def puiseux_from_terms(terms: Iterable[tuple[int, complex]], radius: float, d: int = 1) -> PuiseuxSeries:
    """Build from sparse (n, coefficient) pairs, n counted in units of 1/d."""
    terms = list(terms)
    top = max((n for n, _ in terms), default=0)
    coeffs = [0j] * (top + 1)
    for n, c in terms:
        if n < 0:
            raise ValueError("exponents must be nonnegative")
        coeffs[n] += complex(c)
    return puiseux(coeffs, radius, d)


ZERO_PUISEUX = puiseux((0.0,), 1e300)


def evaluate(g: PuiseuxSeries, z: LPoint) -> complex:
    """Evaluate on the surface; fractional powers use the sheet of z."""
    if z.r >= g.radius:
        raise OutOfRadius(f"|z| = {z.r} is not below the asserted radius {g.radius}")
    w = cpow(1.0 / g.d, z)
    return ps_eval(g.base, w)


def tail_bound(c: float, d: int, radius: float, N: int, z: LPoint) -> float:
    """Cauchy-estimate bound on the modulus of the tail past order N.

    For a series with denominator d, sup bound c on the disc of the given
    radius, the tail after the z**(N/d) term is at most
    c * x**((N+1)/d) / (1 - x**(1/d)) with x = |z| / radius.
    """
    if c <= 0 or radius <= 0 or d < 1 or N < 0:
        raise ValueError("need c > 0, radius > 0, d >= 1, N >= 0")
    if z.r >= radius:
        raise OutOfRadius(f"|z| = {z.r} is not below the asserted radius {radius}")
    x = z.r / radius
    return c * x ** ((N + 1) / d) / (1 - x ** (1.0 / d))


def conj_tau(g: PuiseuxSeries) -> PuiseuxSeries:
    """The series with conjugated coefficients; equals conj(g(tau(z))) pointwise."""
    base = PowerSeries(tuple(c.conjugate() for c in g.base.coeffs), g.base.radius, g.base.boundM)
    return PuiseuxSeries(g.d, base, g.radius)


def _common_base(g1: PuiseuxSeries, g2: PuiseuxSeries) -> tuple[int, np.ndarray, np.ndarray]:
    L = lcm(g1.d, g2.d)
    order = config.get_trunc_order()
    out = []
    for g in (g1, g2):
        stride = L // g.d
        arr = np.zeros(order + 1, dtype=complex)
        for n, c in enumerate(g.base.coeffs):
            if n * stride > order:
                break
            arr[n * stride] = c
        out.append(arr)
    return L, out[0], out[1]


def add(g1: PuiseuxSeries, g2: PuiseuxSeries) -> PuiseuxSeries:
    """Sum after rescaling to the common denominator lcm(d1, d2)."""
    L, a1, a2 = _common_base(g1, g2)
    radius = min(g1.radius, g2.radius)
    base = PowerSeries(tuple((a1 + a2).tolist()), radius ** (1.0 / L) if radius < 1e100 else 1e300)
    return PuiseuxSeries(L, base, radius)


def scale(c: complex, g: PuiseuxSeries) -> PuiseuxSeries:
    base = PowerSeries(ps_scale(c, g.base.coeffs), g.base.radius)
    return PuiseuxSeries(g.d, base, g.radius)


def sub(g1: PuiseuxSeries, g2: PuiseuxSeries) -> PuiseuxSeries:
    return add(g1, scale(-1.0, g2))


def mul_series(g1: PuiseuxSeries, g2: PuiseuxSeries) -> PuiseuxSeries:
    """Product after rescaling to the common denominator lcm(d1, d2)."""
    L, a1, a2 = _common_base(g1, g2)
    radius = min(g1.radius, g2.radius)
    base = PowerSeries(ps_mul(a1, a2), radius ** (1.0 / L) if radius < 1e100 else 1e300)
    return PuiseuxSeries(L, base, radius)


def param_power(g: PuiseuxSeries, m: int) -> PuiseuxSeries:
    """Precompose with the power map: t**(n/d) becomes t**(m*n/d).

    Used by corner normalization when a boundary parameter is rescaled
    t -> t**m.  The denominator is unchanged; the radius becomes
    radius**(1/m).
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"parameter power must be a positive integer, got {m!r}")
    if m == 1:
        return g
    order = config.get_trunc_order()
    arr = np.zeros(order + 1, dtype=complex)
    for n, c in enumerate(g.base.coeffs):
        if n * m > order:
            break
        arr[n * m] = c
    radius = g.radius ** (1.0 / m) if g.radius < 1e100 else 1e300
    base = PowerSeries(tuple(arr.tolist()), radius ** (1.0 / g.d) if radius < 1e100 else 1e300)
    return PuiseuxSeries(g.d, base, radius)


def compose_germ(g: PuiseuxSeries, phi: "Germ") -> PuiseuxSeries:
    """Compose a Puiseux series with a germ: z -> g(phi(z)).

    The denominator d is preserved.  The radius is the printed value
    s = min(r(phi), (g.radius / (2|a(phi)|)) ** (1/k(phi))).  Requires
    k(phi) >= 1.
    """
    if phi.k == 0:
        raise InvalidGerm("composition needs a germ with k >= 1")
    order = config.get_trunc_order()
    d = g.d
    s = min(phi.radius, (g.radius / (2.0 * phi.a.r)) ** (1.0 / phi.k))
    out = np.zeros(order + 1, dtype=complex)
    h = phi.h.coeffs
    for n, c in enumerate(g.base.coeffs):
        if c == 0:
            continue
        shift = n * phi.k
        if shift > order:
            break
        lead = c * cpow(n / d, phi.a)
        block = np.asarray(binom_pow(h, n / d, order=order), dtype=complex)
        for j, b in enumerate(block):
            idx = shift + d * j
            if idx > order:
                break
            out[idx] += lead * b
    base_radius = s ** (1.0 / d) if s < 1e100 else 1e300
    base = PowerSeries(tuple(out.tolist()), base_radius)
    return PuiseuxSeries(d, base, s)


def coefficients_close(g1: PuiseuxSeries, g2: PuiseuxSeries, tol: float) -> bool:
    """Compare coefficient lists after rescaling to a common denominator."""
    _, a1, a2 = _common_base(g1, g2)
    return bool(np.max(np.abs(a1 - a2)) <= tol)
