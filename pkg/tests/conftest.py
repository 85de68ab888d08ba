from __future__ import annotations

import math

import numpy as np
import pytest

from logsurf import LPoint, make_germ


def make_star_germ(rng, radius=1.0, degree=6, scale=0.25, unit=False, k=1):
    """A random invertible-class germ; unit=True pins |a| = 1."""
    coeffs = [0j]
    for j in range(1, degree + 1):
        coeffs.append(
            scale * (rng.standard_normal() + 1j * rng.standard_normal()) / (j * j + 1)
        )
    a_r = 1.0 if unit else 0.5 + 1.5 * rng.random()
    a = LPoint(a_r, rng.uniform(-2.0 * math.pi, 2.0 * math.pi))
    return make_germ(a, k, tuple(coeffs), radius)


def surface_dist(z1: LPoint, z2: LPoint) -> float:
    """Distance in the log chart: matches points sheet by sheet."""
    return abs(math.log(z1.r) - math.log(z2.r)) + abs(z1.phi - z2.phi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
