"""Finite log-power series: sums of terms z**alpha * P(log z).

Terms are stored sorted by strictly increasing exponent alpha >= 0, with
each P a dense polynomial in the symbol lambda = log z.  Exponents are
exact rationals (fractions.Fraction) when declared rational and floats
otherwise; the two kinds compare and merge exactly, since ints and
floats are exact rationals.

The module provides ring operations, truncation by exponent cutoff, the
two composition rules (with power maps and with germs), and the sampled
coefficient-bound certificate for the germ rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import InvalidGerm, NoSupport, OutOfRadius
from .series import PowerSeries, binom_pow, log1p_series, ps_add, ps_eval
from .surface import LPoint, cpow, logmap

Exponent = Fraction | float


def _exp(x) -> Exponent:
    """Normalize an exponent: ints and Fractions stay exact, floats stay floats."""
    if isinstance(x, bool):
        raise ValueError("exponent cannot be a bool")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return x
    raise ValueError(f"unsupported exponent type {type(x).__name__}")


def _strip(poly: Sequence[complex]) -> tuple:
    out = [complex(c) for c in poly]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class LogPowerSeries:
    """Finite sum over terms (alpha, poly): poly[m] multiplies (log z)**m."""

    terms: tuple

    def __post_init__(self):
        for alpha, poly in self.terms:
            if alpha < 0:
                raise ValueError(f"exponents must be nonnegative, got {alpha}")
            if alpha == 0 and len(poly) > 1:
                raise ValueError("the constant term may not carry log powers")
        exps = [alpha for alpha, _ in self.terms]
        if any(not (a < b) for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")


def log_power_series(terms: Iterable[tuple]) -> LogPowerSeries:
    """Build from (alpha, poly) pairs; merges equal exponents, drops zeros."""
    bucket: dict = {}
    for alpha, poly in terms:
        key = _exp(alpha)
        cur = list(bucket.get(key, ()))
        poly = [complex(c) for c in poly]
        if len(cur) < len(poly):
            cur += [0j] * (len(poly) - len(cur))
        for m, c in enumerate(poly):
            cur[m] += c
        bucket[key] = tuple(cur)
    out = []
    for alpha in sorted(bucket):
        poly = _strip(bucket[alpha])
        if poly:
            out.append((alpha, poly))
    return LogPowerSeries(tuple(out))


ZERO_LP = LogPowerSeries(())


def monomial(alpha, log_degree: int = 0, coeff: complex = 1.0) -> LogPowerSeries:
    """The single term coeff * z**alpha * (log z)**log_degree."""
    poly = (0j,) * log_degree + (complex(coeff),)
    return log_power_series([(alpha, poly)])


def evaluate(g: LogPowerSeries, z: LPoint) -> complex:
    """Evaluate at a surface point; finite sums are entire on the surface."""
    lam = logmap(z)
    total = 0j
    for alpha, poly in g.terms:
        pv = 0j
        for c in reversed(poly):
            pv = pv * lam + c
        total += pv * cpow(float(alpha), z)
    return total


def nu(g: LogPowerSeries) -> Exponent:
    """The least exponent of the support; the zero series has none."""
    if not g.terms:
        raise NoSupport("the zero series has no least exponent")
    return g.terms[0][0]


def support(g: LogPowerSeries) -> tuple:
    return tuple(alpha for alpha, _ in g.terms)


def add(g1: LogPowerSeries, g2: LogPowerSeries) -> LogPowerSeries:
    return log_power_series(list(g1.terms) + list(g2.terms))


def scale(c: complex, g: LogPowerSeries) -> LogPowerSeries:
    return log_power_series([(alpha, tuple(c * x for x in poly)) for alpha, poly in g.terms])


def mul_lp(g1: LogPowerSeries, g2: LogPowerSeries) -> LogPowerSeries:
    """Product: exponents add, lambda-polynomials multiply."""
    out = []
    for a1, p1 in g1.terms:
        for a2, p2 in g2.terms:
            prod = np.convolve(np.asarray(p1, dtype=complex), np.asarray(p2, dtype=complex))
            out.append((a1 + a2, tuple(prod.tolist())))
    return log_power_series(out)


def truncate(g: LogPowerSeries, R) -> LogPowerSeries:
    """Keep exactly the terms with alpha <= R."""
    return LogPowerSeries(tuple((alpha, poly) for alpha, poly in g.terms if alpha <= R))


def is_log_free(g: LogPowerSeries) -> bool:
    return all(len(poly) <= 1 for _, poly in g.terms)


def compose_pow(g: LogPowerSeries, rho) -> LogPowerSeries:
    """Substitute the power map: z**a (log z)**m becomes rho**m z**(a*rho) (log z)**m.

    Exponent arithmetic is exact: a float rho is converted to the exact
    rational it represents before scaling rational exponents.
    """
    if isinstance(rho, float):
        if not (math.isfinite(rho) and rho > 0):
            raise ValueError(f"power must be a positive real, got {rho!r}")
        rho_exact: Fraction | int = Fraction(rho)
    elif isinstance(rho, (int, Fraction)):
        if rho <= 0:
            raise ValueError(f"power must be a positive real, got {rho!r}")
        rho_exact = Fraction(rho)
    else:
        raise ValueError(f"unsupported power type {type(rho).__name__}")
    out = []
    for alpha, poly in g.terms:
        if isinstance(alpha, Fraction):
            new_alpha: Exponent = alpha * rho_exact
        else:
            new_alpha = alpha * float(rho_exact)
        new_poly = tuple(c * float(rho_exact ** m) for m, c in enumerate(poly))
        out.append((new_alpha, new_poly))
    return log_power_series(out)


@dataclass(frozen=True)
class LogPowerGermImage:
    """Image of a log-power series under germ substitution.

    Each term is (alpha, series_list): the function
    z**alpha * sum(series_list[m](z) * (log z)**m), where the
    coefficients are power series valid for |z| < radius.
    """

    terms: tuple
    radius: float


@dataclass(frozen=True)
class BoundRow:
    alpha: float
    m: int
    ell: int
    observed: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class BoundCertificate:
    """Sampled coefficient bounds for the germ substitution rule.

    The printed bound 2**(m+alpha) * (|arg a| + 3)**m applies to k = 1
    germs with |a| = 1; `applicable` records whether the input germ is in
    that range.  Rows are emitted for every monomial either way.
    """

    applicable: bool
    rows: tuple
    ok: bool


_CERT_FRACTIONS = (1.0, 0.5, 0.25)
_CERT_ANGLES = 64


def _sampled_sup(coeffs: Sequence[complex], radius: float) -> float:
    arr = np.asarray(coeffs, dtype=complex)
    angles = np.exp(2j * np.pi * np.arange(_CERT_ANGLES) / _CERT_ANGLES)
    worst = 0.0
    for frac in _CERT_FRACTIONS:
        vals = np.polyval(arr[::-1], radius * frac * angles)
        worst = max(worst, float(np.max(np.abs(vals))))
    return worst


def compose_germ_lp(g: LogPowerSeries, phi) -> tuple[LogPowerSeries | LogPowerGermImage, BoundCertificate]:
    """Substitute a germ: each z**a (log z)**m becomes z**(k a) * sum g_l(z) (log z)**l.

    The coefficient series follow the product-rule expansion
    g_l = k**l * C(m, l) * a**a_pow * (1 + h)**a * (log(a(1+h)))**(m-l),
    where log(a(1+h)) = logmap(a) + log(1 + h) uses the argument carried
    by a.  Coefficients are returned as truncated power series, not
    numbers.  The certificate samples each |g_l| against the printed
    bound.
    """
    if phi.k == 0:
        raise InvalidGerm("substitution needs a germ with k >= 1")
    order = config.get_trunc_order()
    log_factor = list(log1p_series(phi.h.coeffs, order=order))
    log_factor[0] += logmap(phi.a)
    log_factor = np.asarray(log_factor, dtype=complex)
    arg_a = abs(phi.a.phi)
    applicable = phi.k == 1 and abs(phi.a.r - 1.0) <= 1e-9

    bucket: dict = {}
    rows = []
    for alpha, poly in g.terms:
        alpha_f = float(alpha)
        new_alpha = alpha * phi.k
        a_pow = cpow(alpha_f, phi.a)
        unit_pow = np.asarray(binom_pow(phi.h.coeffs, alpha_f, order=order), dtype=complex)
        base = a_pow * unit_pow
        m_top = len(poly) - 1
        # log_powers[j] = (log(a(1+h)))**j truncated
        log_powers = [np.ones(1, dtype=complex)]
        for _ in range(m_top):
            log_powers.append(np.convolve(log_powers[-1], log_factor)[: order + 1])
        for m, c_m in enumerate(poly):
            if c_m == 0:
                continue
            for ell in range(m + 1):
                canonical = (
                    float(phi.k) ** ell
                    * math.comb(m, ell)
                    * np.convolve(base, log_powers[m - ell])[: order + 1]
                )
                observed = _sampled_sup(canonical, phi.radius)
                bound = 2.0 ** (m + alpha_f) * (arg_a + 3.0) ** m
                rows.append(BoundRow(alpha_f, m, ell, observed, bound, observed <= bound))
                contrib = c_m * canonical
                key = (new_alpha, ell)
                bucket[key] = ps_add(bucket.get(key, (0j,)), tuple(contrib.tolist()))

    grouped: dict = {}
    for (new_alpha, ell), coeffs in bucket.items():
        grouped.setdefault(new_alpha, {})[ell] = coeffs
    terms = []
    for new_alpha in sorted(grouped):
        by_ell = grouped[new_alpha]
        top = max(by_ell)
        series_list = tuple(
            PowerSeries(by_ell.get(ell, (0j,)), phi.radius) for ell in range(top + 1)
        )
        terms.append((new_alpha, series_list))
    image = LogPowerGermImage(tuple(terms), phi.radius)
    ok = (not applicable) or all(row.ok for row in rows)
    return image, BoundCertificate(applicable, tuple(rows), ok)


def evaluate_image(img: LogPowerGermImage, z: LPoint) -> complex:
    """Evaluate a germ-substitution image inside its radius."""
    if z.r >= img.radius:
        raise OutOfRadius(f"|z| = {z.r} is not below the image radius {img.radius}")
    lam = logmap(z)
    w = complex(z.r * math.cos(z.phi), z.r * math.sin(z.phi))
    total = 0j
    for alpha, series_list in img.terms:
        inner = 0j
        lam_pow = 1.0 + 0j
        for m, ps in enumerate(series_list):
            if m > 0:
                lam_pow *= lam
            inner += ps_eval(ps, w) * lam_pow
        total += cpow(float(alpha), z) * inner
    return total


def image_is_log_free(img: LogPowerGermImage) -> bool:
    return all(len(series_list) <= 1 for _, series_list in img.terms)
