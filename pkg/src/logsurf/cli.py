"""Scenario runner: json descriptions in, summary.json plus csv tables out.

A scenario file is a json object whose "scenario" key selects one of
the kinds wedge, reflect, expansion_compare, poisson, green, envelope.
Every run writes <out>/summary.json (sorted keys, stable float
formatting; the timestamp is the only line that varies between
identical runs) and one csv file per table.  The process exits 0
exactly when every check of every scenario passed, 1 when a check
failed, and 2 on schema or scenario errors, which are reported with
their json location.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import config
from .corner import (
    CornerSpec,
    HarmonicEvaluator,
    IrrationalAngle,
    RationalPi,
    WedgeProblem,
    angle_value,
    disk_green_reference,
    fd_laplacian,
    green_function,
    is_resonant,
    poisson_disk,
    unit_disk_solver,
    wedge_solve,
)
from .errors import LogSurfError, SchemaError, ScenarioError
from .germs import Germ, apply_germ, is_ray, make_germ
from .logpower import is_log_free, log_power_series, truncate
from .reflect import (
    certify_expansion,
    conjugate_corner,
    conjugate_evaluator,
    envelope,
    extend_eval,
    membership,
    tower,
)
from .series import PuiseuxSeries, evaluate as series_evaluate, puiseux
from .surface import LPoint

from . import __version__


# ----------------------------------------------------------------------
# schema helpers
# ----------------------------------------------------------------------

def _need(obj, key: str, loc: str):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", loc)
    if key not in obj:
        raise SchemaError(f"missing required key '{key}'", loc)
    return obj[key]


def _as_int(v, loc: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected an integer, got {v!r}", loc)
    if minimum is not None and v < minimum:
        raise SchemaError(f"expected an integer >= {minimum}, got {v}", loc)
    return v


def _as_real(v, loc: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"expected a number, got {v!r}", loc)
    return float(v)


def _as_list(v, loc: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(f"expected an array, got {v!r}", loc)
    return v


def _parse_theta(obj, loc: str):
    kind = _need(obj, "kind", loc)
    if kind == "rational_pi":
        p = _as_int(_need(obj, "p", loc), f"{loc}.p", 1)
        q = _as_int(_need(obj, "q", loc), f"{loc}.q", 1)
        try:
            return RationalPi(p, q)
        except ValueError as exc:
            raise SchemaError(str(exc), loc) from exc
    if kind == "irrational":
        value = _as_real(_need(obj, "value", loc), f"{loc}.value")
        try:
            return IrrationalAngle(value)
        except ValueError as exc:
            raise SchemaError(str(exc), loc) from exc
    raise SchemaError(f"unknown angle kind {kind!r}", f"{loc}.kind")


def _parse_series(obj, loc: str) -> PuiseuxSeries:
    d = _as_int(_need(obj, "d", loc), f"{loc}.d", 1)
    radius = _as_real(_need(obj, "radius", loc), f"{loc}.radius")
    if radius <= 0:
        raise SchemaError("radius must be positive", f"{loc}.radius")
    coeffs = [0j]
    for i, term in enumerate(_as_list(_need(obj, "terms", loc), f"{loc}.terms")):
        tloc = f"{loc}.terms[{i}]"
        num = _as_int(_need(term, "num", tloc), f"{tloc}.num", 0)
        den = _as_int(_need(term, "den", tloc), f"{tloc}.den", 1)
        re = _as_real(_need(term, "re", tloc), f"{tloc}.re")
        im = _as_real(term.get("im", 0.0), f"{tloc}.im")
        if (num * d) % den != 0:
            raise SchemaError(
                f"exponent {num}/{den} does not live on the 1/{d} lattice", tloc
            )
        idx = num * d // den
        if idx >= len(coeffs):
            coeffs.extend([0j] * (idx + 1 - len(coeffs)))
        coeffs[idx] += complex(re, im)
    return puiseux(coeffs, radius, d)


def _parse_germ(obj, loc: str) -> Germ:
    a_r = _as_real(_need(obj, "a_r", loc), f"{loc}.a_r")
    a_phi = _as_real(_need(obj, "a_phi", loc), f"{loc}.a_phi")
    k = _as_int(_need(obj, "k", loc), f"{loc}.k", 0)
    radius = _as_real(_need(obj, "radius", loc), f"{loc}.radius")
    h_terms = _as_list(obj.get("h_terms", []), f"{loc}.h_terms")
    coeffs = [0j]
    for i, term in enumerate(h_terms):
        tloc = f"{loc}.h_terms[{i}]"
        deg = _as_int(_need(term, "deg", tloc), f"{tloc}.deg", 1)
        re = _as_real(_need(term, "re", tloc), f"{tloc}.re")
        im = _as_real(term.get("im", 0.0), f"{tloc}.im")
        if deg >= len(coeffs):
            coeffs.extend([0j] * (deg + 1 - len(coeffs)))
        coeffs[deg] += complex(re, im)
    try:
        return make_germ(LPoint(a_r, a_phi), k, tuple(coeffs), radius)
    except ValueError as exc:
        raise SchemaError(str(exc), loc) from exc


def _parse_corner(obj, loc: str) -> CornerSpec:
    psi = _parse_germ(_need(obj, "psi", loc), f"{loc}.psi")
    chi = _parse_germ(_need(obj, "chi", loc), f"{loc}.chi")
    theta = _parse_theta(_need(obj, "theta", loc), f"{loc}.theta")
    g0 = _parse_series(_need(obj, "g0", loc), f"{loc}.g0")
    g1 = _parse_series(_need(obj, "g1", loc), f"{loc}.g1")
    eps = _as_real(_need(obj, "eps", loc), f"{loc}.eps")
    try:
        return CornerSpec(psi, chi, theta, g0, g1, eps)
    except (ValueError, LogSurfError) as exc:
        raise SchemaError(str(exc), loc) from exc


def _parse_edge(arr, loc: str) -> list:
    out = []
    for i, term in enumerate(_as_list(arr, loc)):
        tloc = f"{loc}[{i}]"
        coeff = _as_real(_need(term, "coeff", tloc), f"{tloc}.coeff")
        if "beta_real" in term:
            beta = _as_real(term["beta_real"], f"{tloc}.beta_real")
            if beta < 0:
                raise SchemaError("exponents must be nonnegative", f"{tloc}.beta_real")
            out.append((beta, coeff))
        else:
            num = _as_int(_need(term, "beta_num", tloc), f"{tloc}.beta_num", 0)
            den = _as_int(_need(term, "beta_den", tloc), f"{tloc}.beta_den", 1)
            out.append((Fraction(num, den), coeff))
    return out


def _parse_grid(obj, loc: str, defaults: dict) -> dict:
    grid = dict(defaults)
    if obj is None:
        return grid
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", loc)
    for key in obj:
        if key not in defaults:
            raise SchemaError(f"unknown grid key '{key}'", loc)
        if key.endswith("_n"):
            grid[key] = _as_int(obj[key], f"{loc}.{key}", 2)
        else:
            grid[key] = _as_real(obj[key], f"{loc}.{key}")
    return grid


# ----------------------------------------------------------------------
# checks and tables
# ----------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    observed: float
    tolerance: float


def _check_max(name: str, observed: float, tolerance: float) -> Check:
    return Check(name, bool(observed <= tolerance), float(observed), float(tolerance))


def _check_flag(name: str, passed: bool) -> Check:
    return Check(name, bool(passed), 0.0 if passed else 1.0, 0.0)


def _fmt_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def emit_grid(evaluate_point, r_values, phi_values) -> list:
    """Tabulate an evaluator over a rectangular grid, phi-major.

    evaluate_point maps a surface point to (u, f) and may raise a
    LogSurfError; such points get status 'outside' and empty value
    cells.
    """
    rows = []
    for phi in phi_values:
        for r in r_values:
            z = LPoint(float(r), float(phi))
            try:
                u, f = evaluate_point(z)
            except LogSurfError:
                rows.append([z.r, z.phi, "", "", "", "outside"])
                continue
            if f is None:
                rows.append([z.r, z.phi, u, "", "", "ok"])
            else:
                rows.append([z.r, z.phi, u, f.real, f.imag, "ok"])
    return rows


GRID_HEADER = ["r", "phi", "u", "re_f", "im_f", "status"]


# ----------------------------------------------------------------------
# scenario runners
# ----------------------------------------------------------------------

def _data_eval(edge, t: float) -> float:
    return sum(c * t ** float(b) for b, c in edge)


def _run_wedge(obj, rng):
    theta = _parse_theta(_need(obj, "theta", "$.theta"), "$.theta")
    edge0 = _parse_edge(_need(obj, "edge0", "$.edge0"), "$.edge0")
    edge1 = _parse_edge(_need(obj, "edge1", "$.edge1"), "$.edge1")
    try:
        problem = WedgeProblem(theta, tuple(edge0), tuple(edge1))
    except ValueError as exc:
        raise SchemaError(str(exc), "$") from exc
    try:
        evaluator, expansion = wedge_solve(problem)
    except LogSurfError as exc:
        raise ScenarioError(str(exc), "$.theta") from exc
    tv = angle_value(theta)
    grid = _parse_grid(obj.get("grid"), "$.grid",
                       {"r_min": 0.05, "r_max": 1.0, "r_n": 8, "phi_n": 7})

    ts = np.linspace(grid["r_min"], grid["r_max"], grid["r_n"])
    b0 = max(abs(evaluator.u(LPoint(t, 0.0)) - _data_eval(problem.edge0, t)) for t in ts)
    b1 = max(abs(evaluator.u(LPoint(t, tv)) - _data_eval(problem.edge1, t)) for t in ts)

    worst_lap = 0.0
    for r in np.geomspace(0.5, 1.0, 6):
        for phi in np.linspace(tv * 0.1, tv * 0.9, 6):
            z = LPoint(float(r), float(phi))
            lap = fd_laplacian(evaluator.u, z, 1e-3)
            worst_lap = max(worst_lap, abs(lap) / (1.0 + abs(evaluator.u(z))))

    worst_re = 0.0
    for r in ts:
        for phi in np.linspace(0.0, tv, grid["phi_n"]):
            z = LPoint(float(r), float(phi))
            fv = evaluator.f(z)
            worst_re = max(worst_re, abs(evaluator.u(z) - fv.real) / (1.0 + abs(fv)))

    has_resonance = any(
        beta > 0 and c != 0 and is_resonant(theta, beta)
        for edge in (problem.edge0, problem.edge1)
        for beta, c in edge
    )
    dichotomy = is_log_free(expansion) == (not has_resonance)

    checks = [
        _check_max("boundary_edge0", b0, 1e-10),
        _check_max("boundary_edge1", b1, 1e-10),
        _check_max("harmonicity", worst_lap, 1e-4),
        _check_max("re_compatibility", worst_re, 1e-12),
        _check_flag("log_dichotomy", dichotomy),
    ]

    grid_rows = emit_grid(
        lambda z: (evaluator.u(z), evaluator.f(z)),
        np.linspace(grid["r_min"], grid["r_max"], grid["r_n"]),
        np.linspace(0.0, tv, grid["phi_n"]),
    )
    exp_rows = []
    for alpha, poly in expansion.terms:
        for m, c in enumerate(poly):
            exp_rows.append([float(alpha), m, c.real, c.imag])
    tables = {
        "grid": (GRID_HEADER, grid_rows),
        "expansion": (["alpha", "log_degree", "re", "im"], exp_rows),
    }
    constants = {"theta": tv}
    return checks, constants, tables


def _straight_wedge_base(corner: CornerSpec, loc: str):
    """Closed-form base solution for a corner whose curves are rays."""
    if not (is_ray(corner.psi) and is_ray(corner.chi)):
        raise ScenarioError(
            "closed-form bases exist only for straight boundary rays", loc
        )
    edge = {0: [], 1: []}
    for side, g in ((0, corner.g0), (1, corner.g1)):
        for n, c in enumerate(g.base.coeffs):
            if c != 0:
                edge[side].append((Fraction(n, g.d), c.real))
    try:
        problem = WedgeProblem(corner.theta, tuple(edge[0]), tuple(edge[1]))
        evaluator, expansion = wedge_solve(problem)
    except (ValueError, LogSurfError) as exc:
        raise ScenarioError(str(exc), loc) from exc
    alpha = corner.psi.a.phi
    if alpha == 0.0:
        return evaluator, expansion
    rot = lambda z: LPoint(z.r, z.phi - alpha)
    base = HarmonicEvaluator(
        lambda z: evaluator.u(rot(z)),
        lambda z: evaluator.f(rot(z)),
        dict(evaluator.meta),
    )
    return base, expansion


def _reflect_checks(corner, base, steps, rng, n_oracle, suffix=""):
    states = tower(corner, steps)
    s1, r1 = states[0].s, states[0].r
    theta, alpha = states[0].theta, states[0].alpha

    drift = 0.0
    angle_err = 0.0
    mod_err = 0.0
    d_stable = True
    for st in states:
        scale = 100.0 ** (st.k - 1)
        drift = max(drift, abs(st.s * scale / s1 - 1.0), abs(st.r * scale / r1 - 1.0))
        angle_err = max(angle_err, abs((st.phi.a.phi - alpha) - 2.0 ** (st.k - 1) * theta))
        mod_err = max(mod_err, abs(st.phi.a.r - 1.0))
        d_stable = d_stable and st.h.d == states[0].h.d

    boundary_err = 0.0
    for st in states[:-1]:
        t_cap = min(states[st.k].s, st.phi.radius) * 0.5
        for t in np.geomspace(t_cap * 1e-2, t_cap, 5):
            z = apply_germ(st.phi, LPoint(float(t), 0.0))
            fv = extend_eval(states, base, z)
            hv = series_evaluate(st.h, z)
            boundary_err = max(boundary_err, abs(fv.real - hv.real))

    upper = states[-1].phi.a.phi - (0.0 if is_ray(states[-1].phi) else math.pi / 2)
    lower = alpha + (0.0 if is_ray(states[0].psi) else math.pi / 2)
    pad = (upper - lower) * 1e-3
    oracle_err = 0.0
    for _ in range(n_oracle):
        ang = lower + pad + (upper - lower - 2 * pad) * rng.random()
        lev = membership(states, LPoint(states[-1].s * 0.1, ang))
        if lev is None:
            continue
        s_lev = states[lev - 1].s
        rr = s_lev * 0.5 * rng.random() + s_lev * 1e-6
        z = LPoint(rr, ang)
        fv = extend_eval(states, base, z)
        ref = base.f(z)
        oracle_err = max(oracle_err, abs(fv - ref) / (1.0 + abs(ref)))

    checks = [
        _check_max(f"radius_recursion{suffix}", drift, 1e-12),
        _check_max(f"angle_doubling{suffix}", angle_err, 1e-10),
        _check_max(f"unit_modulus{suffix}", mod_err, 1e-10),
        _check_flag(f"denominator_stable{suffix}", d_stable),
        _check_max(f"boundary_data{suffix}", boundary_err, 1e-8),
        _check_max(f"oracle_match{suffix}", oracle_err, 1e-8),
    ]
    return states, checks


def _run_reflect(obj, rng):
    corner = _parse_corner(_need(obj, "corner", "$.corner"), "$.corner")
    steps = _as_int(_need(obj, "steps", "$.steps"), "$.steps", 2)
    n_oracle = _as_int(obj.get("oracle_points", 100), "$.oracle_points", 1)
    base, _ = _straight_wedge_base(corner, "$.corner")
    try:
        states, checks = _reflect_checks(corner, base, steps, rng, n_oracle)
    except LogSurfError as exc:
        raise ScenarioError(str(exc), "$.corner") from exc

    if obj.get("negative", False):
        mirror = conjugate_corner(corner)
        mbase = conjugate_evaluator(base)
        try:
            _, mchecks = _reflect_checks(mirror, mbase, steps, rng, n_oracle, "_mirror")
        except LogSurfError as exc:
            raise ScenarioError(str(exc), "$.negative") from exc
        checks.extend(mchecks)

    state_rows = [
        [st.k, st.r, st.s, st.phi.a.phi, st.phi.a.r, st.h.d, st.h.radius]
        for st in states
    ]
    grid = _parse_grid(obj.get("grid"), "$.grid", {"r_n": 6, "phi_n": 7})
    lower = states[0].alpha
    upper = states[-1].phi.a.phi
    span = upper - lower

    def eval_point(z: LPoint):
        fv = extend_eval(states, base, z)
        return fv.real, fv

    grid_rows = emit_grid(
        eval_point,
        np.geomspace(states[-1].s * 0.3, states[0].s * 0.5, int(grid["r_n"])),
        np.linspace(lower + span * 1e-3, upper - span * 1e-3, int(grid["phi_n"])),
    )
    tables = {
        "states": (["k", "r", "s", "arg_a", "abs_a", "d", "h_radius"], state_rows),
        "extension_grid": (GRID_HEADER, grid_rows),
    }
    constants = {"s1": states[0].s, "theta": states[0].theta, "alpha": states[0].alpha}
    return checks, constants, tables


def _run_expansion_compare(obj, rng):
    corner = _parse_corner(_need(obj, "corner", "$.corner"), "$.corner")
    steps = _as_int(obj.get("steps", 5), "$.steps", 3)
    R = _as_real(_need(obj, "R", "$.R"), "$.R")
    strip_logs = bool(obj.get("strip_logs", False))
    expect_ok = bool(obj.get("expect_windows_ok", not strip_logs))
    if corner.psi.a.phi != 0.0 or not is_ray(corner.psi):
        raise ScenarioError(
            "expansion comparison needs the first curve to be the real ray",
            "$.corner.psi",
        )
    base, expansion = _straight_wedge_base(corner, "$.corner")
    gamma = truncate(expansion, R)
    if strip_logs:
        gamma = log_power_series(
            [(alpha, poly[:1]) for alpha, poly in gamma.terms]
        )
    try:
        states = tower(corner, steps)
        cert = certify_expansion(states, base, gamma, R)
    except LogSurfError as exc:
        raise ScenarioError(str(exc), "$") from exc

    cascade = max(
        (ck / ak for _, ck, ak, _ in cert.step_bounds if ak > 0), default=0.0
    )
    worst_window = max((row[3] for row in cert.window_rows), default=0.0)
    checks = [
        _check_flag("exponent_window", cert.R < cert.S < cert.R_prime),
        _check_max("cascade_bound", cascade, 1.0),
        _check_flag("scale_windows", cert.ok == expect_ok),
    ]
    rows = []
    for (k, ck, ak, tk), (_, t_hi, t_lo, ratio, ok) in zip(
        cert.step_bounds, cert.window_rows
    ):
        rows.append([k, ck, ak, tk, t_lo, ratio, "true" if ok else "false"])
    tables = {
        "certificate": (
            ["k", "C_k", "A_pow_k", "t_k", "t_next", "window_ratio", "window_ok"],
            rows,
        )
    }
    constants = {
        "R": cert.R,
        "R_prime": cert.R_prime,
        "S": cert.S,
        "A": cert.A,
        "worst_window_ratio": worst_window,
    }
    return checks, constants, tables


def _run_poisson(obj, rng):
    data = _need(obj, "data", "$.data")
    kind = _need(data, "kind", "$.data")
    nodes = _as_int(obj.get("nodes", 512), "$.nodes", 16)
    points = _as_list(_need(obj, "points", "$.points"), "$.points")
    if kind == "constant":
        value = _as_real(_need(data, "value", "$.data"), "$.data.value")
        h = lambda eta: value
        ref = lambda xi: value
        tol = 1e-10
    elif kind == "re":
        h = lambda eta: eta.real
        ref = lambda xi: xi.real
        tol = 1e-6
    elif kind == "trig":
        terms = []
        for i, t in enumerate(_as_list(_need(data, "terms", "$.data"), "$.data.terms")):
            tloc = f"$.data.terms[{i}]"
            n = _as_int(_need(t, "n", tloc), f"{tloc}.n", 0)
            terms.append(
                (n, _as_real(t.get("cos", 0.0), tloc), _as_real(t.get("sin", 0.0), tloc))
            )
        h = lambda eta: sum(
            a * math.cos(n * math.atan2(eta.imag, eta.real))
            + b * math.sin(n * math.atan2(eta.imag, eta.real))
            for n, a, b in terms
        )

        def ref(xi):
            r = abs(xi)
            phi = math.atan2(xi.imag, xi.real)
            return sum(
                r ** n * (a * math.cos(n * phi) + b * math.sin(n * phi))
                for n, a, b in terms
            )

        tol = 1e-6
    else:
        raise SchemaError(f"unknown data kind {kind!r}", "$.data.kind")

    rows = []
    worst = 0.0
    for i, p in enumerate(points):
        ploc = f"$.points[{i}]"
        xi = complex(_as_real(_need(p, "re", ploc), f"{ploc}.re"),
                     _as_real(_need(p, "im", ploc), f"{ploc}.im"))
        if abs(xi) >= 1.0:
            raise SchemaError("evaluation points must lie in the open unit disc", ploc)
        try:
            got = poisson_disk(h, xi, nodes)
        except LogSurfError as exc:
            raise ScenarioError(str(exc), ploc) from exc
        want = ref(xi)
        err = abs(got - want)
        worst = max(worst, err)
        rows.append([xi.real, xi.imag, got, want, err])
    checks = [_check_max(f"poisson_{kind}", worst, tol)]
    tables = {"values": (["re_xi", "im_xi", "computed", "reference", "abs_err"], rows)}
    return checks, {"nodes": float(nodes)}, tables


def _run_green(obj, rng):
    yloc = "$.y"
    yobj = _need(obj, "y", yloc)
    y = complex(_as_real(_need(yobj, "re", yloc), f"{yloc}.re"),
                _as_real(_need(yobj, "im", yloc), f"{yloc}.im"))
    if abs(y) >= 1.0:
        raise SchemaError("the pole must lie in the open unit disc", yloc)
    nodes = _as_int(obj.get("nodes", 1024), "$.nodes", 16)
    solve = unit_disk_solver(nodes)
    rows = []
    worst_ref = 0.0
    worst_sym = 0.0
    for i, p in enumerate(_as_list(_need(obj, "x_list", "$.x_list"), "$.x_list")):
        ploc = f"$.x_list[{i}]"
        x = complex(_as_real(_need(p, "re", ploc), f"{ploc}.re"),
                    _as_real(_need(p, "im", ploc), f"{ploc}.im"))
        if abs(x) >= 1.0:
            raise SchemaError("evaluation points must lie in the open unit disc", ploc)
        try:
            got = green_function(solve, y, x)
            swapped = green_function(solve, x, y)
            want = disk_green_reference(y, x)
        except LogSurfError as exc:
            raise ScenarioError(str(exc), ploc) from exc
        worst_ref = max(worst_ref, abs(got - want))
        worst_sym = max(worst_sym, abs(got - swapped))
        rows.append([x.real, x.imag, got, want, swapped, abs(got - want)])
    checks = [
        _check_max("green_closed_form", worst_ref, 1e-5),
        _check_max("green_symmetry", worst_sym, 1e-5),
    ]
    tables = {
        "green": (["re_x", "im_x", "value", "reference", "swapped", "abs_err"], rows)
    }
    return checks, {"nodes": float(nodes)}, tables


def _run_envelope(obj, rng):
    corner = _parse_corner(_need(obj, "corner", "$.corner"), "$.corner")
    steps = _as_int(_need(obj, "steps", "$.steps"), "$.steps", 3)
    phi_max = _as_real(obj.get("phi_max", 1e4), "$.phi_max")
    samples = _as_int(obj.get("samples", 64), "$.samples", 2)
    try:
        states = tower(corner, steps)
        env = envelope(states, phi_max)
    except LogSurfError as exc:
        raise ScenarioError(str(exc), "$") from exc

    theta = states[0].theta
    s1 = states[0].s
    violations = 0
    for x in np.geomspace(1.0, phi_max, samples):
        k = 1
        while 2.0 ** (k - 1) * theta - math.pi / 2 <= x:
            k += 1
        window_radius = s1 / 100.0 ** (k - 1)
        envelope_radius = env.domain.c * math.exp(-env.domain.C * math.sqrt(x))
        if envelope_radius > window_radius:
            violations += 1
    checks = [
        _check_max("window_cover", float(violations), 0.0),
        _check_flag("constants_positive", env.K > 1.0 and env.domain.C > 0.0),
    ]
    rows = [[x, lev, wr, nk] for x, lev, wr, nk in env.rows]
    tables = {"envelope": (["x", "level", "window_radius", "needed_K"], rows)}
    constants = {"K": env.K, "c": env.domain.c, "C": env.domain.C}
    return checks, constants, tables


_RUNNERS = {
    "wedge": _run_wedge,
    "reflect": _run_reflect,
    "expansion_compare": _run_expansion_compare,
    "poisson": _run_poisson,
    "green": _run_green,
    "envelope": _run_envelope,
}


# ----------------------------------------------------------------------
# report plumbing
# ----------------------------------------------------------------------

@dataclass
class Report:
    name: str
    passed: bool
    checks: list
    out_dir: Path


def run(path: str | Path, out_dir: str | Path, trunc_order: int | None = None,
        seed: int | None = None) -> Report:
    """Run one scenario file and write its report."""
    path = Path(path)
    out = Path(out_dir)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read scenario file: {exc}", "$")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid json: {exc}", "$")
    if not isinstance(obj, dict):
        raise SchemaError("scenario file must hold a json object", "$")
    kind = _need(obj, "scenario", "$")
    if kind not in _RUNNERS:
        raise SchemaError(
            f"unknown scenario kind {kind!r}; expected one of {sorted(_RUNNERS)}",
            "$.scenario",
        )
    eff_seed = seed if seed is not None else _as_int(obj.get("seed", 0), "$.seed", 0)
    eff_order = trunc_order if trunc_order is not None else obj.get("trunc_order")
    if eff_order is not None:
        eff_order = _as_int(eff_order, "$.trunc_order", 1)
    rng = np.random.default_rng(eff_seed)

    if eff_order is not None:
        with config.trunc_order(eff_order):
            checks, constants, tables = _RUNNERS[kind](obj, rng)
    else:
        checks, constants, tables = _RUNNERS[kind](obj, rng)

    out.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in tables.items():
        with open(out / f"{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_cell(v) for v in row])

    payload = {
        "scenario": obj,
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "observed": c.observed,
                "tolerance": c.tolerance,
            }
            for c in sorted(checks, key=lambda c: c.name)
        ],
        "constants": {k: float(v) for k, v in sorted(constants.items())},
        "passed": all(c.passed for c in checks),
        "tables": sorted(tables),
        "provenance": {
            "version": __version__,
            "seed": eff_seed,
            "trunc_order": eff_order if eff_order is not None else config.get_trunc_order(),
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return Report(path.stem, payload["passed"], checks, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="logsurf",
        description="run verification scenarios for the reflection library",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a scenario file or a directory of them")
    runp.add_argument("scenario", nargs="?", help="path to a scenario json file")
    runp.add_argument("--batch", metavar="DIR", help="run every *.json file under DIR")
    runp.add_argument("--out", default="out", help="output directory (default: out)")
    runp.add_argument("--trunc-order", type=int, default=None,
                      help="global series truncation order")
    runp.add_argument("--seed", type=int, default=None,
                      help="override the scenario sampling seed")
    args = parser.parse_args(argv)

    if args.command != "run":
        parser.error("unknown command")
    if (args.scenario is None) == (args.batch is None):
        parser.error("provide exactly one of a scenario file or --batch DIR")

    if args.batch is not None:
        files = sorted(Path(args.batch).glob("*.json"))
        if not files:
            print(f"error: no scenario files under {args.batch}", file=sys.stderr)
            return 2
        jobs = [(f, Path(args.out) / f.stem) for f in files]
    else:
        jobs = [(Path(args.scenario), Path(args.out))]

    all_passed = True
    for path, out in jobs:
        try:
            report = run(path, out, args.trunc_order, args.seed)
        except (SchemaError, ScenarioError) as exc:
            print(f"error ({path.name}): {exc}", file=sys.stderr)
            return 2
        n_pass = sum(1 for c in report.checks if c.passed)
        verdict = "PASS" if report.passed else "FAIL"
        print(f"{verdict} {report.name}: {n_pass}/{len(report.checks)} checks -> {out}")
        all_passed = all_passed and report.passed
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
