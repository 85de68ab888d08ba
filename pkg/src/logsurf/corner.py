"""Corner boundary problems on plane sectors and their closed-form solutions.

A corner is two analytic boundary curves leaving the origin with opening
angle theta, each carrying real boundary data as a fractional power
series in the curve parameter.  This module provides

* angle descriptors that make the resonance test (is beta * theta an
  integer multiple of pi) exactly decidable,
* the straight-wedge solver with closed-form harmonic solutions and the
  log-power expansion of their holomorphic completions,
* normalization of a general corner to the model form (first curve a
  ray, second curve a k = 1 germ) by root maps and one germ inverse,
* the exponent lattice of corner expansions,
* the Poisson integral and the Green function on the unit disc, and
* a five-point finite-difference Laplacian for harmonicity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (
    InvalidGerm,
    PoleCoincidence,
    ResonanceUndeclared,
    UndecidableAngle,
)
from .germs import Germ, apply_germ, compose, identity_germ, invert, is_identity, power_germ, root_pullback
from .logpower import LogPowerSeries, log_power_series
from .series import PuiseuxSeries, param_power
from .surface import LPoint, nudge, power


# ----------------------------------------------------------------------
# angle descriptors and resonance
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPi:
    """The angle pi * p / q for positive integers p, q with p/q <= 2."""

    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and self.p >= 1):
            raise ValueError(f"p must be a positive integer, got {self.p!r}")
        if not (isinstance(self.q, int) and self.q >= 1):
            raise ValueError(f"q must be a positive integer, got {self.q!r}")
        if self.p > 2 * self.q:
            raise ValueError("the angle must lie in (0, 2*pi]")


@dataclass(frozen=True)
class IrrationalAngle:
    """An angle declared to be an irrational multiple of pi."""

    value: float

    def __post_init__(self):
        if not (0.0 < self.value <= 2.0 * math.pi):
            raise ValueError("the angle must lie in (0, 2*pi]")


AngleLike = RationalPi | IrrationalAngle | float


def angle_value(theta: AngleLike) -> float:
    """The numeric value of an angle descriptor, in (0, 2*pi]."""
    if isinstance(theta, RationalPi):
        return math.pi * theta.p / theta.q
    if isinstance(theta, IrrationalAngle):
        return theta.value
    if isinstance(theta, (int, float)) and not isinstance(theta, bool):
        v = float(theta)
        if not (0.0 < v <= 2.0 * math.pi):
            raise ValueError("the angle must lie in (0, 2*pi]")
        return v
    raise ValueError(f"unsupported angle {theta!r}")


def scale_angle(theta: AngleLike, divisor: int) -> AngleLike:
    """The descriptor of theta / divisor, preserving the arithmetic kind."""
    if not (isinstance(divisor, int) and divisor >= 1):
        raise ValueError(f"divisor must be a positive integer, got {divisor!r}")
    if isinstance(theta, RationalPi):
        return RationalPi(theta.p, theta.q * divisor)
    if isinstance(theta, IrrationalAngle):
        return IrrationalAngle(theta.value / divisor)
    return angle_value(theta) / divisor


def is_resonant(theta: AngleLike, beta) -> bool:
    """Whether beta * theta is an integer multiple of pi, decided exactly.

    Rational-multiple angles decide by exact fraction arithmetic (floats
    convert to the exact rationals they represent); declared irrational
    angles never resonate for beta > 0.  A bare float angle carries no
    arithmetic declaration, so the question is undecidable.
    """
    if isinstance(beta, bool) or not isinstance(beta, (int, float, Fraction)):
        raise ValueError(f"unsupported exponent {beta!r}")
    if beta < 0:
        raise ValueError(f"exponent must be nonnegative, got {beta!r}")
    if beta == 0:
        return True
    if isinstance(theta, RationalPi):
        ratio = Fraction(beta) * Fraction(theta.p, theta.q)
        return ratio.denominator == 1
    if isinstance(theta, IrrationalAngle):
        return False
    raise UndecidableAngle(
        f"angle {theta!r} is a bare float; declare it rational_pi or irrational"
    )


def _resonance_order(theta: RationalPi, beta) -> int:
    ratio = Fraction(beta) * Fraction(theta.p, theta.q)
    return int(ratio)


# ----------------------------------------------------------------------
# straight wedges
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class WedgeProblem:
    """Dirichlet data on the sector 0 < arg z < theta.

    edge0 lists (beta, coeff) power data on the edge arg z = 0, edge1 on
    arg z = theta; coefficients are real.  Exponent-zero terms must carry
    the same constant on both edges, since the solution is continuous at
    the corner.
    """

    theta: AngleLike
    edge0: tuple
    edge1: tuple

    def __post_init__(self):
        angle_value(self.theta)
        clean = {"edge0": [], "edge1": []}
        for name in ("edge0", "edge1"):
            for beta, c in getattr(self, name):
                if isinstance(beta, bool) or not isinstance(beta, (int, float, Fraction)):
                    raise ValueError(f"{name}: unsupported exponent {beta!r}")
                if beta < 0:
                    raise ValueError(f"{name}: exponents must be nonnegative")
                if isinstance(c, complex):
                    if c.imag != 0:
                        raise ValueError(f"{name}: boundary data must be real")
                    c = c.real
                clean[name].append((beta, float(c)))
            object.__setattr__(self, name, tuple(clean[name]))
        c0 = sum(c for beta, c in self.edge0 if beta == 0)
        c1 = sum(c for beta, c in self.edge1 if beta == 0)
        if c0 != c1:
            raise ValueError("constant boundary data must agree at the corner")


@dataclass(frozen=True)
class HarmonicEvaluator:
    """A harmonic function u on a sector and its holomorphic completion f.

    u maps surface points to reals; f, when present, maps surface points
    to complex values with Re f = u.
    """

    u: Callable[[LPoint], float]
    f: Callable[[LPoint], complex] | None = None
    meta: dict = field(default_factory=dict)


def wedge_solve(problem: WedgeProblem) -> tuple[HarmonicEvaluator, LogPowerSeries]:
    """Solve the wedge Dirichlet problem term by term in closed form.

    Each non-resonant power t**beta contributes a pure power of z; each
    resonant one (beta * theta in pi * Z) contributes a z**beta * log z
    term.  Returns the evaluator (trigonometric closed forms for u, the
    expansion itself for f) and the holomorphic completion as a finite
    log-power series.  The completion is normalized to contain no
    homogeneous solution of the zero-data problem.
    """
    theta = angle_value(problem.theta)
    pieces = []
    lp_terms = []
    const = sum(float(c) for beta, c in problem.edge0 if beta == 0)
    if const:
        lp_terms.append((0, (complex(const),)))
    for side, edge in ((0, problem.edge0), (1, problem.edge1)):
        for beta, c in edge:
            if c == 0 or beta == 0:
                continue
            b = float(beta)
            try:
                resonant = is_resonant(problem.theta, beta)
            except UndecidableAngle as exc:
                raise ResonanceUndeclared(str(exc)) from exc
            if not resonant:
                s = math.sin(b * theta)
                if side == 0:
                    pieces.append(("0n", b, c / s))
                    lp_terms.append((beta, (c * (1.0 + 1j / math.tan(b * theta)),)))
                else:
                    pieces.append(("1n", b, c / s))
                    lp_terms.append((beta, (-1j * c / s,)))
            else:
                n = _resonance_order(problem.theta, beta)
                if side == 0:
                    pieces.append(("0r", b, c))
                    lp_terms.append((beta, (complex(c), 1j * c / theta)))
                else:
                    sign = -1.0 if n % 2 else 1.0
                    pieces.append(("1r", b, c * sign))
                    lp_terms.append((beta, (0j, -1j * c * sign / theta)))
    expansion = log_power_series(lp_terms)

    def u_of(z: LPoint) -> float:
        r, phi = z.r, z.phi
        total = const
        logr = math.log(r)
        for kind, b, amp in pieces:
            rb = r ** b
            if kind == "0n":
                total += amp * rb * math.sin(b * (theta - phi))
            elif kind == "1n":
                total += amp * rb * math.sin(b * phi)
            elif kind == "0r":
                total += amp * rb * (
                    math.cos(b * phi)
                    - (math.sin(b * phi) * logr + phi * math.cos(b * phi)) / theta
                )
            else:
                total += (amp / theta) * rb * (
                    math.sin(b * phi) * logr + phi * math.cos(b * phi)
                )
        return total

    from .logpower import evaluate as lp_evaluate

    def f_of(z: LPoint) -> complex:
        return lp_evaluate(expansion, z)

    evaluator = HarmonicEvaluator(u_of, f_of, {"theta": problem.theta})
    return evaluator, expansion


# ----------------------------------------------------------------------
# corner data and normalization
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CornerSpec:
    """A corner problem: curves psi, chi with k >= 1, opening theta,
    real boundary data g0 (on psi) and g1 (on chi) valid for parameter
    values below eps."""

    psi: Germ
    chi: Germ
    theta: AngleLike
    g0: PuiseuxSeries
    g1: PuiseuxSeries
    eps: float

    def __post_init__(self):
        angle_value(self.theta)
        if self.psi.k < 1 or self.chi.k < 1:
            raise InvalidGerm("boundary curves need k >= 1")
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ValueError(f"eps must be a finite positive real, got {self.eps!r}")
        for name, g in (("g0", self.g0), ("g1", self.g1)):
            if any(c.imag != 0 for c in g.base.coeffs):
                raise ValueError(f"{name} must have real coefficients")


@dataclass(frozen=True)
class TransformRecord:
    """The coordinate changes applied by normalize.

    stages lists them in application order; forward maps an original
    point into the normalized chart, backward inverts it.
    """

    stages: tuple
    forward: Callable[[LPoint], LPoint]
    backward: Callable[[LPoint], LPoint]


@dataclass(frozen=True)
class NormalizedCorner:
    corner: CornerSpec
    record: TransformRecord


def _chain(stages: Sequence[tuple]) -> tuple[Callable, Callable]:
    def forward(z: LPoint) -> LPoint:
        for stage in stages:
            if stage[0] == "root":
                z = power(1.0 / stage[1], z)
            else:
                z = apply_germ(stage[1], z)
        return z

    def backward(z: LPoint) -> LPoint:
        for stage in reversed(stages):
            if stage[0] == "root":
                z = power(float(stage[1]), z)
            else:
                z = apply_germ(stage[2], z)
        return z

    return forward, backward


def normalize(spec: CornerSpec) -> NormalizedCorner:
    """Normalize a corner to the model form: psi the identity ray, chi a
    k = 1 germ, without changing the solved function.

    The pipeline is: reparametrize chi by t -> t**k(psi) if k(psi) does
    not divide k(chi); pull both curves back by the root map of order
    k(psi); compose with the inverse of the straightened first curve;
    pull back by the root map of order k of the remaining second curve.
    Data series follow their parameters, the opening angle divides by
    the product of the two root orders, and the record chains the point
    maps.
    """
    if is_identity(spec.psi) and spec.chi.k == 1:
        fwd, bwd = _chain(())
        return NormalizedCorner(spec, TransformRecord((), fwd, bwd))

    m = spec.psi.k
    chi = spec.chi
    g1 = spec.g1
    eps0 = spec.eps
    eps1 = spec.eps
    stages = []
    if chi.k % m != 0:
        chi = compose(chi, power_germ(m))
        g1 = param_power(g1, m)
        eps1 = spec.eps ** (1.0 / m)

    psi1 = root_pullback(spec.psi, m)
    chi1 = root_pullback(chi, m)
    if m > 1:
        stages.append(("root", m))

    if is_identity(psi1):
        chi2 = chi1
    else:
        psi1_inv = invert(psi1)
        chi2 = compose(psi1_inv, chi1)
        stages.append(("germ", psi1_inv, psi1))

    n3 = chi2.k
    chi3 = root_pullback(chi2, n3)
    g0 = spec.g0
    if n3 > 1:
        stages.append(("root", n3))
        g0 = param_power(g0, n3)
        eps0 = spec.eps ** (1.0 / n3)

    theta3 = scale_angle(spec.theta, m * n3)
    fwd, bwd = _chain(tuple(stages))
    corner = CornerSpec(identity_germ(), chi3, theta3, g0, g1, min(eps0, eps1))
    return NormalizedCorner(corner, TransformRecord(tuple(stages), fwd, bwd))


# ----------------------------------------------------------------------
# exponent lattice
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentLattice:
    """The exponents k + (l/d) * alpha up to a cutoff, with the leading
    exponent (n0/d) * alpha marked."""

    exponents: tuple
    leading: float


def wasow_exponents(d: int, alpha: float, n0_over_d, R: float) -> ExponentLattice:
    """Enumerate {k + (l/d) * alpha : k, l >= 0} up to R, sorted without
    duplicates."""
    if not (isinstance(d, int) and d >= 1):
        raise ValueError(f"denominator must be a positive integer, got {d!r}")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be a positive real, got {alpha!r}")
    if R < 0:
        raise ValueError(f"cutoff must be nonnegative, got {R!r}")
    vals = set()
    k = 0
    while k <= R:
        ell = 0
        while True:
            v = k + (ell / d) * alpha
            if v > R:
                break
            vals.add(v)
            ell += 1
        k += 1
    return ExponentLattice(tuple(sorted(vals)), float(n0_over_d) * alpha)


# ----------------------------------------------------------------------
# Poisson integral and Green function on the unit disc
# ----------------------------------------------------------------------

def poisson_disk(h: Callable[[complex], float], xi: complex, nodes: int = 512) -> float:
    """The Poisson integral of boundary data h at a point of the open
    unit disc, by the equispaced trapezoidal rule on the circle."""
    xi = complex(xi)
    if abs(xi) >= 1.0:
        raise ValueError(f"the evaluation point must satisfy |xi| < 1, got |xi| = {abs(xi)}")
    if not (isinstance(nodes, int) and nodes >= 16):
        raise ValueError(f"need at least 16 boundary nodes, got {nodes!r}")
    eta = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    weights = (1.0 - abs(xi) ** 2) / np.abs(eta - xi) ** 2
    vals = np.array([float(h(complex(e))) for e in eta])
    return float(np.mean(weights * vals))


def unit_disk_solver(nodes: int = 512) -> Callable:
    """A Dirichlet solver for the unit disc: boundary data to evaluator."""

    def solve(h: Callable[[complex], float]) -> Callable[[complex], float]:
        return lambda x: poisson_disk(h, x, nodes)

    return solve


def green_function(solve: Callable, y: complex, x: complex) -> float:
    """The Green function G(x, y) = log(1/|x - y|) - u(x), where u solves
    the Dirichlet problem with boundary data log(1/|t - y|)."""
    x = complex(x)
    y = complex(y)
    if x == y:
        raise PoleCoincidence("the Green function argument coincides with the pole")

    def boundary(t: complex) -> float:
        return math.log(1.0 / abs(t - y))

    u = solve(boundary)
    return math.log(1.0 / abs(x - y)) - float(u(x))


def disk_green_reference(y: complex, x: complex) -> float:
    """Closed form of the unit-disc Green function."""
    x = complex(x)
    y = complex(y)
    if x == y:
        raise PoleCoincidence("the Green function argument coincides with the pole")
    return math.log(abs(1.0 - x * y.conjugate()) / abs(x - y))


# ----------------------------------------------------------------------
# harmonicity checks
# ----------------------------------------------------------------------

def fd_laplacian(u: Callable[[LPoint], float], z: LPoint, step: float) -> float:
    """Five-point finite-difference Laplacian of u at a surface point,
    with the stencil kept on the sheet of z."""
    total = 0.0
    for dz in (step, -step, 1j * step, -1j * step):
        total += u(nudge(z, dz))
    return (total - 4.0 * u(z)) / step ** 2
