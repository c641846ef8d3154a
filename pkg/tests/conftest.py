"""Shared helpers: random rational line sets and angle-based frames."""

import math
from fractions import Fraction

import numpy as np
import pytest

from treelines.geometry import Line
from treelines.lineset import LineSet, LineSetError, verify_general_position


def random_lines(rng: np.random.Generator, n: int,
                 span: int = 4000) -> LineSet:
    """A random general-position LineSet of n lines with rational
    coefficients; retries until the validators pass."""
    while True:
        lines = [Line(Fraction(int(rng.integers(-span, span)), 997),
                      Fraction(int(rng.integers(-span, span)), 1009))
                 for _ in range(n)]
        try:
            return verify_general_position(lines)
        except LineSetError:
            continue


def slope_of_degrees(deg: float) -> Fraction:
    """Rational slope close to tan(deg degrees), rounded at 1e-9."""
    return Fraction(round(math.tan(math.radians(deg)) * 10**9), 10**9)


def angle_lineset(degrees, cup: bool = False) -> LineSet:
    """Lines with the given angles, tangent to a parabola: offsets -s^2
    give a cap, +s^2 a cup."""
    lines = []
    for a in degrees:
        s = slope_of_degrees(a)
        lines.append(Line(s, s * s if cup else -s * s))
    return verify_general_position(lines)


DOUBLING_DEGREES = [0, 1, 2.1, 4.3, 8.8, 17.8]


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
