"""Iterated reflection of a corner solution across its boundary curves.

Starting from a solved corner problem in normalized position (first
curve the real ray, second curve a k = 1 germ, unit tangent moduli),
each step reflects the current domain across the current image curve:

    phi_{k+1} = phi_k o tau_conj(phi_k^{-1} o psi),
    w(z)      = phi_k(tau(phi_k^{-1}(z))),
    f_{k+1}(z) = -conj((f_k - h_k)(w)) + h_k(z),

where h_k is the boundary data transported to the k-th curve.  Radii
follow the printed recursion r_{k+1} = r_k / 100, s_{k+1} = s_k / 100
and the transported data is valid on radius s_k / 4; these values are
set by the recursion, never re-estimated.  The union of the rotated
sectors reached after k steps covers arguments up to 2**(k-1) * theta
(minus a fixed pi/2 haircut for curvature), which is what makes the
extension reach every quadratic domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .corner import CornerSpec, HarmonicEvaluator, angle_value
from .errors import (
    InsufficientSteps,
    NotNormalized,
    OutsideExtension,
    WindowEmpty,
)
from .germs import Germ, apply_germ, compose, invert, is_identity, is_ray, tau_conj
from .logpower import LogPowerSeries
from .logpower import evaluate as lp_evaluate
from .logpower import support
from .series import (
    PowerSeries,
    PuiseuxSeries,
    add,
    compose_germ,
    conj_tau,
    evaluate,
    scale,
    sub,
)
from .surface import LPoint, QuadraticDomain, tau


@dataclass(frozen=True)
class ReflectionState:
    """One level of the reflection tower.

    phi is the k-th image curve as a germ, h the boundary data on it
    written as a function of z, and r, s the printed domain radii.  The
    germ radii of phi and its cached inverse may be smaller than r for
    curved corners; they gate evaluation, while r and s drive the
    covering windows.
    """

    k: int
    r: float
    s: float
    phi: Germ
    h: PuiseuxSeries
    phi_inv: Germ
    omega: Germ
    psi: Germ
    h0: PuiseuxSeries
    alpha: float
    theta: float


def _with_radius(g: PuiseuxSeries, radius: float) -> PuiseuxSeries:
    base_radius = radius ** (1.0 / g.d) if radius < 1e100 else 1e300
    return PuiseuxSeries(g.d, PowerSeries(g.base.coeffs, base_radius), radius)


def init_state(corner: CornerSpec) -> ReflectionState:
    """Check normalization and build the level-1 state.

    Preconditions: both curves have k = 1 and unit-modulus tangent
    coefficient, the first tangent argument is below the second, and
    their difference equals the declared opening.  The data series are
    transported to functions of z by composing with the curve inverses;
    s_1 is the least of r_1, eps and the transported radii.
    """
    psi, chi = corner.psi, corner.chi
    if psi.k != 1 or chi.k != 1:
        raise NotNormalized("both boundary curves must have k = 1")
    if abs(psi.a.r - 1.0) > 1e-9 or abs(chi.a.r - 1.0) > 1e-9:
        raise NotNormalized("boundary tangents must have unit modulus")
    alpha = psi.a.phi
    beta = chi.a.phi
    theta = angle_value(corner.theta)
    if not alpha < beta:
        raise NotNormalized("the first tangent argument must precede the second")
    if abs((beta - alpha) - theta) > 1e-9:
        raise NotNormalized("the declared opening does not match the tangents")
    h0 = corner.g0 if is_identity(psi) else compose_germ(corner.g0, invert(psi))
    h1 = corner.g1 if is_identity(chi) else compose_germ(corner.g1, invert(chi))
    r1 = min(psi.radius, chi.radius)
    s1 = min(r1, corner.eps, h0.radius, h1.radius)
    phi_inv = invert(chi)
    omega = compose(chi, tau_conj(phi_inv))
    return ReflectionState(1, r1, s1, chi, h1, phi_inv, omega, psi, h0, alpha, theta)


def step(state: ReflectionState) -> ReflectionState:
    """One reflection: double the sector, transport the data.

    The next curve is phi o tau_conj(phi^{-1} o psi); the next data is
    h_{k+1} = -conj_tau((h0 - h_k) o omega_k) + h_k with
    omega_k = phi_k o tau_conj(phi_k^{-1}), valid on radius s_k / 4.
    """
    inner = compose(state.phi_inv, state.psi)
    phi_next = compose(state.phi, tau_conj(inner))
    diff = sub(state.h0, state.h)
    reflected = conj_tau(compose_germ(diff, state.omega))
    h_next = _with_radius(add(scale(-1.0, reflected), state.h), state.s / 4.0)
    phi_next_inv = invert(phi_next)
    omega_next = compose(phi_next, tau_conj(phi_next_inv))
    return ReflectionState(
        state.k + 1,
        state.r / 100.0,
        state.s / 100.0,
        phi_next,
        h_next,
        phi_next_inv,
        omega_next,
        state.psi,
        state.h0,
        state.alpha,
        state.theta,
    )


def tower(corner: CornerSpec, steps: int) -> list[ReflectionState]:
    """The first `steps` levels of the reflection tower."""
    if steps < 1:
        raise ValueError("need at least one level")
    states = [init_state(corner)]
    while len(states) < steps:
        states.append(step(states[-1]))
    return states


def _lower_bound(states: Sequence[ReflectionState]) -> float:
    lead = states[0]
    return lead.alpha + (0.0 if is_ray(lead.psi) else math.pi / 2)


def _upper_bound(st: ReflectionState) -> float:
    return st.phi.a.phi - (0.0 if is_ray(st.phi) else math.pi / 2)


def membership(states: Sequence[ReflectionState], z: LPoint) -> int | None:
    """The least level whose window contains z, or None when outside.

    The level-k window is the sector between the transported lower edge
    and arg a(phi_k), shrunk by pi/2 on each curved side, within radius
    s_k.  Boundaries are excluded.
    """
    lo = _lower_bound(states)
    if not z.phi > lo:
        return None
    for st in states:
        if z.phi < _upper_bound(st) and z.r < st.s:
            return st.k
    return None


def extend_eval(states: Sequence[ReflectionState], base: HarmonicEvaluator, z: LPoint) -> complex:
    """Evaluate the extended holomorphic completion at z.

    Descends through reflections until the point lands in the original
    corner, evaluates the base completion there, then unwinds
    f_{j+1}(z) = -conj((f_j - h_j)(w)) + h_j(z).  Raises
    OutsideExtension when no materialized window contains z.
    """
    if base.f is None:
        raise ValueError("the base evaluator must provide a holomorphic completion")
    level = membership(states, z)
    if level is None:
        raise OutsideExtension(
            f"point (r={z.r}, phi={z.phi}) lies in no materialized window"
        )
    stack = []
    current = z
    while level > 1:
        st = states[level - 2]
        w = apply_germ(st.phi, tau(apply_germ(st.phi_inv, current)))
        stack.append((st.h, w, current))
        current = w
        level -= 1
    value = complex(base.f(current))
    for h, w, znext in reversed(stack):
        value = -(value - evaluate(h, w)).conjugate() + evaluate(h, znext)
    return value


def conjugate_corner(corner: CornerSpec) -> CornerSpec:
    """The corner reflected across the real axis, with curves swapped so
    the tangent arguments stay increasing."""
    return CornerSpec(
        tau_conj(corner.chi),
        tau_conj(corner.psi),
        corner.theta,
        corner.g1,
        corner.g0,
        corner.eps,
    )


def conjugate_evaluator(base: HarmonicEvaluator) -> HarmonicEvaluator:
    """Transport an evaluator through tau: u -> u o tau, f -> conj(f o tau)."""
    u = lambda z: base.u(tau(z))
    f = None
    if base.f is not None:
        f = lambda z: complex(base.f(tau(z))).conjugate()
    return HarmonicEvaluator(u, f, dict(base.meta))


# ----------------------------------------------------------------------
# covering envelope
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeResult:
    """A constant K and quadratic domain certified to lie inside the
    union of reflection windows, with the breakpoint rows that set K.

    Rows are (x, level, window_radius, needed_K) in the shifted
    coordinate x = arg z - alpha.
    """

    K: float
    domain: QuadraticDomain
    rows: tuple


def envelope(states: Sequence[ReflectionState], phi_max: float = 1e4) -> EnvelopeResult:
    """Certify a quadratic domain inside the union of windows.

    The level-k window covers shifted arguments x < 2**(k-1) * theta -
    pi/2 within radius s_1 / 100**(k-1); the recursion extends past the
    materialized levels, so K is the supremum of
    (100**(k-1) / s_1) ** (1 / log+ x) over the breakpoints in
    [1, phi_max].  The returned domain (c, C) = (min(1, s_1), log K)
    satisfies c * exp(-C * sqrt(x)) <= K ** (-log+ x) for x >= 1.
    """
    if len(states) < 3:
        raise InsufficientSteps(
            f"need at least 3 materialized levels, got {len(states)}"
        )
    s1 = states[0].s
    theta = states[0].theta

    def reach(k: int) -> float:
        return 2.0 ** (k - 1) * theta - math.pi / 2

    def level_of(x: float) -> int:
        k = 1
        while reach(k) <= x:
            k += 1
        return k

    def log_plus(x: float) -> float:
        return max(1.0, math.log(x))

    xs = [1.0]
    k = level_of(1.0)
    while reach(k) < phi_max:
        if reach(k) >= 1.0:
            xs.append(reach(k))
        k += 1
    K = 1.0 + 1e-6
    rows = []
    for x in xs:
        lev = level_of(x)
        window_radius = s1 / 100.0 ** (lev - 1)
        needed = (1.0 / window_radius) ** (1.0 / log_plus(x))
        rows.append((x, lev, window_radius, needed))
        K = max(K, needed)
    K *= 1.0 + 1e-9
    c = min(1.0, s1)
    return EnvelopeResult(K, QuadraticDomain(c, math.log(K)), tuple(rows))


# ----------------------------------------------------------------------
# expansion certificate
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionCertificate:
    """Sampled growth certificate comparing the extension with a finite
    log-power expansion gamma of order R.

    step_bounds rows are (k, C_k, A**k, t_k); window_rows are
    (k, t_hi, t_lo, worst_ratio, ok) checking |f - gamma| <= |z|**S on
    the matching scale window of each level.
    """

    R: float
    R_prime: float
    S: float
    A: float
    step_bounds: tuple
    window_rows: tuple
    ok: bool


_NOISE_FLOOR = 1e-12


def _next_exponent_bound(gamma: LogPowerSeries, R: float) -> float:
    exps = set()
    d = 1
    for a in support(gamma):
        exps.add(float(a))
        if isinstance(a, Fraction):
            d = lcm(d, a.denominator)
    exps.add(0.0)
    best = math.inf
    for a in exps:
        if a > R:
            best = min(best, a)
            continue
        best = min(best, a + math.floor(R - a) + 1.0)
    best = min(best, (math.floor(R * d) + 1.0) / d)
    return best


def _cert_angles(states: Sequence[ReflectionState], idx: int, count: int) -> np.ndarray:
    lo = _lower_bound(states)
    hi = _upper_bound(states[idx])
    if not hi > lo:
        return np.empty(0)
    pad = (hi - lo) * 1e-3 + 1e-9
    return np.linspace(lo + pad, hi - pad, count)


def certify_expansion(
    states: Sequence[ReflectionState],
    base: HarmonicEvaluator,
    gamma: LogPowerSeries,
    R: float,
    angle_samples: int = 5,
    radial_samples: int = 8,
) -> ExtensionCertificate:
    """Sample the printed growth certificate for f - gamma.

    R' sits halfway between R and the next exponent the expansion
    lattice allows, S between R and R'.  C_k is the sampled supremum of
    |f - gamma| / |z|**R' over the level-k window (minus a fixed
    relative noise floor), A is chosen so C_k <= A**k and so the scale
    t_k = A**(-k / (R' - S)) stays below s_k; the window check then
    verifies |f - gamma| <= |z|**S for t_{k+1} <= |z| <= t_k.  Raises
    WindowEmpty when the scales underflow before the last level.
    """
    bound = _next_exponent_bound(gamma, R)
    if not bound > R:
        raise ValueError("the expansion lattice admits no exponent beyond R")
    R_prime = R + 0.5 * (bound - R)
    S = max(0.5 * (R + R_prime), R_prime - 1.0)

    c_values = []
    for idx, st in enumerate(states):
        angles = _cert_angles(states, idx, angle_samples)
        worst = 0.0
        if len(angles):
            radii = np.geomspace(st.s * 1e-2, st.s * (1.0 - 1e-9), radial_samples)
            for ang in angles:
                for rr in radii:
                    z = LPoint(float(rr), float(ang))
                    g = lp_evaluate(gamma, z)
                    f = extend_eval(states, base, z)
                    resid = abs(f - g) - _NOISE_FLOOR * abs(g)
                    if resid > 0:
                        worst = max(worst, resid / float(rr) ** R_prime)
        c_values.append(worst)

    denom = R_prime - S
    A = 1.0001
    for k, ck in enumerate(c_values, start=1):
        if ck > 0:
            A = max(A, (1.1 * ck) ** (1.0 / k))
    for st in states:
        cap = 0.99 * st.s
        if cap < 1.0:
            A = max(A, cap ** (-denom / st.k))

    scales = [A ** (-k / denom) for k in range(1, len(states) + 2)]
    step_bounds = tuple(
        (k, ck, A ** k, scales[k - 1]) for k, ck in enumerate(c_values, start=1)
    )

    window_rows = []
    all_ok = True
    for idx, st in enumerate(states):
        k = st.k
        t_hi = scales[k - 1]
        t_lo = scales[k]
        lo_r = max(t_lo, t_hi * 1e-3)
        if t_hi < 1e-300 or t_lo == 0.0 or lo_r ** S == 0.0:
            raise WindowEmpty(
                f"certificate scales underflow at level {k}: t = {t_hi}"
            )
        angles = _cert_angles(states, idx, angle_samples)
        worst_ratio = 0.0
        sample_radii = np.geomspace(lo_r, t_hi, 6)
        for ang in angles:
            for rr in sample_radii:
                z = LPoint(float(rr), float(ang))
                g = lp_evaluate(gamma, z)
                f = extend_eval(states, base, z)
                allowed = float(rr) ** S + _NOISE_FLOOR * abs(g)
                worst_ratio = max(worst_ratio, abs(f - g) / allowed)
        ok = worst_ratio <= 1.0
        window_rows.append((k, t_hi, t_lo, worst_ratio, ok))
        all_ok = all_ok and ok

    return ExtensionCertificate(
        float(R), R_prime, S, A, step_bounds, tuple(window_rows), all_ok
    )
