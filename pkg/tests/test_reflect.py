from __future__ import annotations

import math

import numpy as np
import pytest

from logsurf import (
    CornerSpec,
    HarmonicEvaluator,
    InsufficientSteps,
    IrrationalAngle,
    LPoint,
    NotNormalized,
    OutsideExtension,
    RationalPi,
    WedgeProblem,
    WindowEmpty,
    apply_germ,
    certify_expansion,
    conjugate_corner,
    conjugate_evaluator,
    envelope,
    evaluate,
    extend_eval,
    identity_germ,
    init_state,
    log_power_series,
    make_germ,
    membership,
    puiseux,
    puiseux_from_terms,
    rotation_germ,
    tau,
    tower,
    truncate,
    wedge_solve,
)

from conftest import surface_dist


def _data_t(radius: float = 2.0):
    return puiseux_from_terms([(1, 1.0)], radius)


def _zero_data(radius: float = 2.0):
    return puiseux((0.0,), radius)


def unit_wedge_corner() -> CornerSpec:
    # identity ray at argument 0, rotated ray at argument 1, data t on the ray
    return CornerSpec(
        identity_germ(),
        rotation_germ(1.0),
        IrrationalAngle(1.0),
        _data_t(),
        _zero_data(),
        1.0,
    )


def unit_wedge_base() -> HarmonicEvaluator:
    ev, _ = wedge_solve(WedgeProblem(IrrationalAngle(1.0), ((1, 1.0),), ()))
    return ev


def resonant_corner() -> CornerSpec:
    return CornerSpec(
        identity_germ(),
        rotation_germ(math.pi / 2),
        RationalPi(1, 2),
        puiseux_from_terms([(2, 1.0)], 2.0),
        _zero_data(),
        1.0,
    )


def resonant_base() -> HarmonicEvaluator:
    ev, _ = wedge_solve(WedgeProblem(RationalPi(1, 2), ((2, 1.0),), ()))
    return ev


# ----------------------------------------------------------------------
# state construction
# ----------------------------------------------------------------------

def test_init_state_requires_normal_form():
    t, z = _data_t(), _zero_data()
    curved = make_germ(LPoint(1.0, 1.0), 2, (0.0,), 1e12)
    with pytest.raises(NotNormalized):
        init_state(CornerSpec(identity_germ(), curved, IrrationalAngle(1.0), t, z, 1.0))
    off_unit = make_germ(LPoint(1.5, 1.0), 1, (0.0,), 1e12)
    with pytest.raises(NotNormalized):
        init_state(CornerSpec(identity_germ(), off_unit, IrrationalAngle(1.0), t, z, 1.0))
    with pytest.raises(NotNormalized):
        init_state(CornerSpec(rotation_germ(1.0), rotation_germ(0.5), IrrationalAngle(0.5), t, z, 1.0))
    with pytest.raises(NotNormalized):
        init_state(CornerSpec(identity_germ(), rotation_germ(1.0), IrrationalAngle(0.9), t, z, 1.0))


def test_tower_frozen_table():
    states = tower(unit_wedge_corner(), 3)
    assert [st.k for st in states] == [1, 2, 3]
    assert [st.s for st in states] == pytest.approx([1.0, 1e-2, 1e-4], rel=1e-12)
    assert [st.r for st in states] == pytest.approx([1e12, 1e10, 1e8], rel=1e-12)
    # each reflection doubles the sector: arg a(phi_k) - alpha = 2**(k-1) * theta
    assert [st.phi.a.phi for st in states] == pytest.approx([1.0, 2.0, 4.0], abs=1e-10)
    assert [st.phi.a.r for st in states] == pytest.approx([1.0, 1.0, 1.0], abs=1e-10)
    assert all(st.h.d == states[0].h.d for st in states)
    assert states[1].h.radius == pytest.approx(0.25, rel=1e-12)
    assert states[2].h.radius == pytest.approx(0.25e-2, rel=1e-12)
    with pytest.raises(ValueError):
        tower(unit_wedge_corner(), 0)


def test_reflected_data_right_angle():
    # data t on the real ray, zero on the vertical ray: h_2 = +z
    corner = CornerSpec(
        identity_germ(),
        rotation_germ(math.pi / 2),
        RationalPi(1, 2),
        _data_t(),
        _zero_data(),
        1.0,
    )
    states = tower(corner, 2)
    coeffs = states[1].h.base.coeffs
    assert coeffs[1] == pytest.approx(1.0, abs=1e-12)
    assert max(abs(c) for c in coeffs[2:]) == 0.0


def test_reflected_data_generic_angle():
    # h_2 = -exp(-2 i theta) z keeps unit modulus
    states = tower(unit_wedge_corner(), 2)
    coeffs = states[1].h.base.coeffs
    want = -np.exp(-2.0j)
    assert coeffs[1] == pytest.approx(want, abs=1e-12)
    assert abs(coeffs[1]) == pytest.approx(1.0, abs=1e-12)


def test_reflected_data_mirror_tower():
    # the conjugated corner carries data t on its second curve: h_2 = 2 z
    mirror = conjugate_corner(unit_wedge_corner())
    states = tower(mirror, 2)
    coeffs = states[1].h.base.coeffs
    assert coeffs[1] == pytest.approx(2.0, abs=1e-12)


def test_conjugate_corner_involution():
    corner = unit_wedge_corner()
    assert conjugate_corner(conjugate_corner(corner)) == corner


def test_conjugate_evaluator_transport():
    base = unit_wedge_base()
    mbase = conjugate_evaluator(base)
    z = LPoint(0.3, -0.4)
    assert mbase.u(z) == pytest.approx(base.u(tau(z)), abs=1e-14)
    assert mbase.f(z) == pytest.approx(complex(base.f(tau(z))).conjugate(), abs=1e-14)


# ----------------------------------------------------------------------
# membership and evaluation
# ----------------------------------------------------------------------

def test_membership_windows():
    states = tower(unit_wedge_corner(), 3)
    assert membership(states, LPoint(0.5, 0.5)) == 1
    assert membership(states, LPoint(0.005, 1.5)) == 2
    assert membership(states, LPoint(5e-5, 3.0)) == 3
    # overlapping windows resolve to the smallest level
    assert membership(states, LPoint(5e-5, 0.5)) == 1
    # radius gates each level separately
    assert membership(states, LPoint(0.5, 1.5)) is None
    assert membership(states, LPoint(2.0, 0.5)) is None
    # at or below the lower edge
    assert membership(states, LPoint(0.5, 0.0)) is None
    assert membership(states, LPoint(0.5, -0.1)) is None


def test_membership_curved_side_shrinks_window():
    t, z = _data_t(), _zero_data()
    curved = make_germ(LPoint(1.0, 0.0), 1, (0.0, 0.1), 10.0)
    corner = CornerSpec(curved, rotation_germ(1.0), IrrationalAngle(1.0), t, z, 1.0)
    states = tower(corner, 3)
    # the curved first side pushes the lower edge up by pi / 2
    assert membership(states, LPoint(5e-5, 1.2)) is None
    assert membership(states, LPoint(5e-5, 2.0)) == 3


def test_extension_matches_entire_oracle(rng):
    # the wedge data t extends to f(z) = (1 + i cot 1) z on every sheet
    states = tower(unit_wedge_corner(), 3)
    base = unit_wedge_base()
    coeff = 1.0 + 1.0j / math.tan(1.0)
    worst = 0.0
    for _ in range(100):
        ang = 0.01 + 3.98 * rng.random()
        rr = 5e-5 * (1e-2 + (1.0 - 1e-2) * rng.random())
        z = LPoint(rr, ang)
        assert membership(states, z) is not None
        got = extend_eval(states, base, z)
        want = coeff * rr * complex(math.cos(ang), math.sin(ang))
        worst = max(worst, abs(got - want) / abs(want))
    assert worst < 1e-8


def test_extension_boundary_data(rng):
    states = tower(unit_wedge_corner(), 3)
    base = unit_wedge_base()
    worst = 0.0
    for st in states[:-1]:
        t_cap = min(states[st.k].s, st.phi.radius) * 0.5
        for t in np.geomspace(t_cap * 1e-2, t_cap, 5):
            z = apply_germ(st.phi, LPoint(float(t), 0.0))
            fv = extend_eval(states, base, z)
            hv = evaluate(st.h, z)
            worst = max(worst, abs(fv.real - hv.real))
    assert worst < 1e-8


def test_schwarz_reflection_special_case(rng):
    # zero data on the real ray: the extension is -conj(f(conj z))
    corner = CornerSpec(
        rotation_germ(-0.8),
        identity_germ(),
        IrrationalAngle(0.8),
        _data_t(),
        _zero_data(),
        1.0,
    )
    ev, _ = wedge_solve(WedgeProblem(IrrationalAngle(0.8), ((1, 1.0),), ()))
    rot = lambda z: LPoint(z.r, z.phi + 0.8)
    base = HarmonicEvaluator(lambda z: ev.u(rot(z)), lambda z: ev.f(rot(z)))
    states = tower(corner, 2)
    worst = 0.0
    for _ in range(100):
        z = LPoint(1e-6 + 0.004 * rng.random(), 0.01 + 0.78 * rng.random())
        assert membership(states, z) == 2
        got = extend_eval(states, base, z)
        want = -complex(base.f(tau(z))).conjugate()
        worst = max(worst, abs(got - want))
    assert worst < 1e-10


def test_extension_outside_raises():
    states = tower(unit_wedge_corner(), 3)
    base = unit_wedge_base()
    with pytest.raises(OutsideExtension):
        extend_eval(states, base, LPoint(0.5, -0.1))
    with pytest.raises(ValueError):
        extend_eval(states, HarmonicEvaluator(base.u, None), LPoint(0.5, 0.5))


# ----------------------------------------------------------------------
# covering envelope
# ----------------------------------------------------------------------

def test_envelope_needs_three_levels():
    with pytest.raises(InsufficientSteps):
        envelope(tower(unit_wedge_corner(), 2))


def test_envelope_frozen_constants():
    env = envelope(tower(unit_wedge_corner(), 5))
    assert env.K == pytest.approx(1.0e6, rel=1e-6)
    assert env.domain.c == pytest.approx(1.0, rel=1e-12)
    assert env.domain.C == pytest.approx(math.log(env.K), rel=1e-12)
    assert all(row[3] <= env.K for row in env.rows)


def test_envelope_containments():
    states = tower(unit_wedge_corner(), 5)
    env = envelope(states)
    s1, theta = states[0].s, states[0].theta
    for x in np.geomspace(1.0, 1e4, 200):
        lev = 1
        while 2.0 ** (lev - 1) * theta - math.pi / 2 <= x:
            lev += 1
        radius = s1 / 100.0 ** (lev - 1)
        depth = env.K ** (-max(1.0, math.log(x)))
        assert depth <= radius * (1.0 + 1e-12)
        assert env.domain.c * math.exp(-env.domain.C * math.sqrt(x)) <= depth * (1.0 + 1e-12)


# ----------------------------------------------------------------------
# expansion certificates
# ----------------------------------------------------------------------

def test_certificate_positive():
    states = tower(unit_wedge_corner(), 5)
    base = unit_wedge_base()
    _, expansion = wedge_solve(WedgeProblem(IrrationalAngle(1.0), ((1, 1.0),), ()))
    gamma = truncate(expansion, 2.5)
    cert = certify_expansion(states, base, gamma, 2.5)
    assert cert.ok
    assert cert.R < cert.S < cert.R_prime
    assert cert.R_prime == pytest.approx(2.75, rel=1e-12)
    assert cert.S == pytest.approx(2.625, rel=1e-12)
    # the truncation is exact here, so every level constant vanishes
    assert all(ck == 0.0 for _, ck, _, _ in cert.step_bounds)
    assert cert.A == pytest.approx((0.99e-8) ** (-0.125 / 5.0), rel=1e-9)
    for (k, _, _, t_k), st in zip(cert.step_bounds, states):
        assert t_k <= st.s


def test_certificate_resonant_full_expansion():
    states = tower(resonant_corner(), 5)
    _, expansion = wedge_solve(WedgeProblem(RationalPi(1, 2), ((2, 1.0),), ()))
    cert = certify_expansion(states, resonant_base(), truncate(expansion, 2.5), 2.5)
    assert cert.ok


def test_certificate_detects_missing_log_term():
    # dropping the log monomial from the resonant expansion must break
    # the window bounds by many orders of magnitude
    states = tower(resonant_corner(), 5)
    _, expansion = wedge_solve(WedgeProblem(RationalPi(1, 2), ((2, 1.0),), ()))
    gamma = truncate(expansion, 2.5)
    stripped = log_power_series([(alpha, poly[:1]) for alpha, poly in gamma.terms])
    cert = certify_expansion(states, resonant_base(), stripped, 2.5)
    assert not cert.ok
    assert max(row[3] for row in cert.window_rows) > 1e10


def test_certificate_zero_data_trivial():
    corner = CornerSpec(
        identity_germ(),
        rotation_germ(1.0),
        IrrationalAngle(1.0),
        _zero_data(),
        _zero_data(),
        1.0,
    )
    ev, expansion = wedge_solve(WedgeProblem(IrrationalAngle(1.0), (), ()))
    cert = certify_expansion(tower(corner, 4), ev, truncate(expansion, 2.5), 2.5)
    assert cert.ok
    assert all(ck == 0.0 for _, ck, _, _ in cert.step_bounds)


def test_certificate_scales_underflow():
    states = tower(resonant_corner(), 19)
    _, expansion = wedge_solve(WedgeProblem(RationalPi(1, 2), ((2, 1.0),), ()))
    gamma = truncate(expansion, 2.5)
    stripped = log_power_series([(alpha, poly[:1]) for alpha, poly in gamma.terms])
    with pytest.raises(WindowEmpty):
        certify_expansion(states, resonant_base(), stripped, 2.5)


def test_certificate_below_leading_exponent():
    # R below the first exponent leaves gamma empty; the certificate then
    # witnesses |f| <= |z|**S directly
    states = tower(unit_wedge_corner(), 5)
    base = unit_wedge_base()
    _, expansion = wedge_solve(WedgeProblem(IrrationalAngle(1.0), ((1, 1.0),), ()))
    cert = certify_expansion(states, base, truncate(expansion, 0.5), 0.5)
    assert cert.ok
    assert cert.R_prime == pytest.approx(0.75, rel=1e-12)
    assert cert.S == pytest.approx(0.625, rel=1e-12)
