from __future__ import annotations

import math

import numpy as np
import pytest

from logsurf import LPoint, OutOfRadius, config, power, rotation_germ, tau
from logsurf.series import (
    PowerSeries,
    add,
    binom_coefficients,
    binom_pow,
    coefficients_close,
    compose_germ,
    conj_tau,
    evaluate,
    log1p_series,
    mul_series,
    param_power,
    power_series,
    ps_add,
    ps_compose,
    ps_mul,
    ps_scale,
    puiseux,
    puiseux_from_terms,
    reversion,
    scale,
    sub,
    tail_bound,
)


def test_ps_arithmetic_exact():
    one_plus = (1.0, 1.0)
    one_minus = (1.0, -1.0)
    assert ps_mul(one_plus, one_minus)[:3] == (1.0, 0.0, -1.0)
    assert ps_add((1.0, 2.0), (0.0, -2.0, 5.0)) == (1.0, 0.0, 5.0)
    assert ps_scale(2.0, (1.0, -3.0)) == (2.0, -6.0)


def test_ps_mul_respects_the_global_order():
    with config.trunc_order(8):
        f = tuple(1.0 for _ in range(20))
        out = ps_mul(f, f)
        assert len(out) <= 9


def test_ps_compose_requires_vanishing_inner_constant():
    with pytest.raises(ValueError):
        ps_compose((1.0, 1.0), (1.0, 1.0))
    # f(g) with f = 1 + w, g = w + w**2
    out = ps_compose((1.0, 1.0), (0.0, 1.0, 1.0))
    assert out[:3] == (1.0, 1.0, 1.0)


def test_binomial_series_against_known_rows():
    row = binom_coefficients(0.5, 5)
    assert np.allclose(row, [1.0, 0.5, -0.125, 0.0625, -0.0390625])
    sq = binom_pow((0.0, 1.0), 2.0)
    assert sq[:3] == (1.0, 2.0, 1.0)
    # (1+w)**0.5 squared returns 1 + w up to truncation error
    half = binom_pow((0.0, 1.0), 0.5)
    back = ps_mul(half, half)
    assert back[0] == pytest.approx(1.0, abs=1e-14)
    assert back[1] == pytest.approx(1.0, abs=1e-14)
    assert max(abs(c) for c in back[2:16]) < 1e-14


def test_log1p_series_coefficients():
    out = log1p_series((0.0, 1.0))
    for n in range(1, 8):
        assert out[n] == pytest.approx((-1.0) ** (n + 1) / n)


def test_reversion_catalan_pattern():
    g = reversion((0.0, 1.0, 1.0))
    expect = [0.0, 1.0, -1.0, 2.0, -5.0, 14.0, -42.0]
    for n, c in enumerate(expect):
        assert g[n] == pytest.approx(c, abs=1e-12)
    # g o f = id through the truncation order
    back = ps_compose(g, (0.0, 1.0, 1.0))
    assert back[1] == pytest.approx(1.0, abs=1e-12)
    assert max(abs(c) for c in back[2:16]) < 1e-10


def test_reversion_requires_a_unit_linear_term():
    with pytest.raises(ValueError):
        reversion((0.0, 0.0, 1.0))


def test_puiseux_radius_is_capped_by_the_base():
    base = power_series((0.0, 1.0), 0.5)
    with pytest.raises(ValueError):
        # d = 2 forces radius <= 0.25
        from logsurf.series import PuiseuxSeries

        PuiseuxSeries(2, base, 0.3)


def test_puiseux_evaluation_uses_the_sheet():
    g = puiseux((0.0, 1.0), 4.0, 2)  # z**(1/2)
    assert evaluate(g, LPoint(1.0, 0.0)) == pytest.approx(1.0)
    assert evaluate(g, LPoint(1.0, 2.0 * math.pi)) == pytest.approx(-1.0)
    with pytest.raises(OutOfRadius):
        evaluate(g, LPoint(4.0, 0.0))


def test_puiseux_from_terms_matches_manual_sum(rng):
    from logsurf import cpow

    g = puiseux_from_terms([(1, 0.5), (3, -2.0j)], 1.0, 2)
    for _ in range(20):
        z = LPoint(0.9 * rng.random() + 1e-6, rng.uniform(-6.0, 6.0))
        want = 0.5 * cpow(0.5, z) - 2.0j * cpow(1.5, z)
        assert evaluate(g, z) == pytest.approx(want, rel=1e-13)


def test_tail_bound_closed_forms():
    assert tail_bound(1.0, 1, 1.0, 0, LPoint(0.5, 0.0)) == pytest.approx(1.0)
    assert tail_bound(2.0, 2, 1.0, 3, LPoint(0.25, 1.0)) == pytest.approx(0.25)
    with pytest.raises(OutOfRadius):
        tail_bound(1.0, 1, 1.0, 0, LPoint(1.0, 0.0))
    with pytest.raises(ValueError):
        tail_bound(-1.0, 1, 1.0, 0, LPoint(0.5, 0.0))


def test_tail_bound_dominates_geometric_tails(rng):
    # f(w) = sum w**n on |w| < 0.9 is bounded by c = 10
    N = 6
    for _ in range(200):
        z = LPoint(0.81 * rng.random() + 1e-9, rng.uniform(-7.0, 7.0))
        w = complex(z.r * math.cos(z.phi), z.r * math.sin(z.phi))
        exact_tail = abs(1.0 / (1.0 - w) - sum(w ** n for n in range(N + 1)))
        assert exact_tail <= tail_bound(10.0, 1, 0.9, N, z) * (1.0 + 1e-12)


def test_conj_tau_matches_pointwise(rng):
    g = puiseux((0.0, 1.0 + 2.0j, -0.5j), 1.0, 2)
    gc = conj_tau(g)
    for _ in range(30):
        z = LPoint(0.9 * rng.random() + 1e-9, rng.uniform(-6.0, 6.0))
        lhs = evaluate(gc, z)
        rhs = complex(evaluate(g, tau(z))).conjugate()
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-15)


def test_mixed_denominator_arithmetic(rng):
    g1 = puiseux((0.0, 1.0), 0.9, 2)  # z**(1/2)
    g2 = puiseux((0.0, 0.0, 0.0, 2.0), 0.9, 3)  # 2 z
    s = add(g1, g2)
    p = mul_series(g1, g2)
    assert s.d == 6
    for _ in range(20):
        z = LPoint(0.8 * rng.random() + 1e-9, rng.uniform(-5.0, 5.0))
        v1, v2 = evaluate(g1, z), evaluate(g2, z)
        assert evaluate(s, z) == pytest.approx(v1 + v2, rel=1e-12, abs=1e-15)
        assert evaluate(p, z) == pytest.approx(v1 * v2, rel=1e-12, abs=1e-15)
        assert evaluate(sub(g1, g1), z) == 0.0
        assert evaluate(scale(3.0, g1), z) == pytest.approx(3.0 * v1, rel=1e-13)


def test_param_power_substitutes_the_parameter(rng):
    g = puiseux((0.0, 1.0, 0.5), 0.9, 2)
    g3 = param_power(g, 3)
    for _ in range(20):
        z = LPoint(0.5 * rng.random() + 1e-9, rng.uniform(-4.0, 4.0))
        assert evaluate(g3, z) == pytest.approx(
            evaluate(g, power(3.0, z)), rel=1e-12, abs=1e-15
        )


def test_compose_germ_matches_pointwise(rng):
    from conftest import make_star_germ
    from logsurf import apply_germ

    g = puiseux((0.0, 1.0, -0.3, 0.1j), 0.8, 1)
    for _ in range(10):
        phi = make_star_germ(rng, radius=0.9)
        comp = compose_germ(g, phi)
        for _ in range(10):
            z = LPoint(comp.radius * 0.8 * rng.random() + 1e-12, rng.uniform(-3.0, 3.0))
            want = evaluate(g, apply_germ(phi, z))
            assert evaluate(comp, z) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_coefficients_close():
    g1 = puiseux((0.0, 1.0), 1.0, 1)
    g2 = puiseux((0.0, 1.0 + 5e-11), 1.0, 1)
    assert coefficients_close(g1, g2, 1e-10)
    assert not coefficients_close(g1, g2, 1e-12)
