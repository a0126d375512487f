"""Shared fixture equations and stream generators used across the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from deltaorder import DifferenceEquation, Poly

# order-3 equation with a single admissible order 1/3
CUBIC_THIRD = "(6z^2 + 19z + 15) D^3 f(z) + (z + 3) D^2 f(z) - D f(z) - f(z) = 0"

# order-4 equation with admissible order 3/4 (pure difference form)
QUARTIC_34 = (
    "(256z^3 + 1920z^2 + 4656z + 3640) D^4 y(z) + (384z^2 + 1760z + 1944) D^3 y(z)"
    " - (80z + 120) D^2 y(z) - (81z^2 + 405z + 446) D y(z)"
    " - (81z^2 + 405z + 486) y(z) = 0"
)

# the same operator written with shifted arguments (recenters by z -> z+3)
QUARTIC_34_SHIFTED = (
    "256z(z - 1)(z - 2) D^4 y(z - 3) + 384z(z - 1) D^3 y(z - 2)"
    " - 80z D^2 y(z - 1) + 40 D y(z) - 81z(z - 1) y(z - 2) = 0"
)

# shift-form coefficients equivalent to QUARTIC_34: shift -> polynomial
QUARTIC_34_SHIFT_TABLE = {
    4: [3640, 4656, 1920, 256],
    3: [-12616, -16864, -7296, -1024],
    2: [15888, 22576, 10368, 1536],
    1: [-8934, -13589, -6609, -1024],
    0: [1536, 2816, 1536, 256],
}

# second-order equation from the 1/2-order discussion
HALF_ORDER = "(4z + 6) D^2 f(z) + 3 D f(z) + f(z) = 0"

# order-3 factor of the composed order-8 operator (order list {1/3})
L3_TEXT = (
    "(6z^5 + 37z^4 + 84z^3 + 83z^2 + 30z) D^3 f(z)"
    " - (17z^4 + 68z^3 + 87z^2 + 36z) D^2 f(z)"
    " + (33z^3 + 97z^2 + 66z) D f(z) - (z^3 + 39z^2 + 108z + 72) f(z) = 0"
)

# order-5 factor (order list {1/5})
L5_TEXT = (
    "(36z^4 + 588z^3 + 3583z^2 + 9653z + 9702) D^5 f(z)"
    " + (228z^3 + 2594z^2 + 9806z + 12319) D^4 f(z)"
    " + (271z^2 + 1981z + 3596) D^3 f(z) + (28z + 114) D^2 f(z)"
    " - 2 D f(z) - f(z) = 0"
)

# expected coefficients (ascending powers) of the composed order-8 operator
L8_COEFFS = [
    [72, 108, 39, 1],
    [144, 150, -19, -31],
    [-8208, -12576, -4861, -280, -11],
    [-258912, -394482, -155801, -16443, -3909, -277],
    [-886968, -1168092, -285305, 1004, -30092, -3675, -228],
    [-698544, -112998, 1284431, 1080909, 466401, 143264, 14809, -36],
    [0, 2403240, 6616921, 7634180, 4758666, 1591736, 248295, 14130],
    [0, 4084050, 13383629, 17615961, 11934400, 4406121, 870903, 86148, 3348],
    [0, 2691000, 8972550, 12085315, 8524337, 3416591, 794461, 105678, 7452, 216],
]


def third_order_stream(count: int) -> list[Fraction]:
    """a_n with n(2n-3)(3n-4) a_n = a_{n-1}, a_0 = 1 (decay of order 1/3)."""
    out = [Fraction(1)]
    for n in range(1, count + 1):
        out.append(out[-1] / (n * (2 * n - 3) * (3 * n - 4)))
    return out


def fifth_order_stream(count: int) -> list[Fraction]:
    """a_n with n(2n-1)(2n-3)(3n-1)(3n-4) a_n = a_{n-1}, a_0 = 1 (order 1/5)."""
    out = [Fraction(1)]
    for n in range(1, count + 1):
        out.append(out[-1] / (n * (2 * n - 1) * (2 * n - 3) * (3 * n - 1) * (3 * n - 4)))
    return out


def quartic_34_stream(count: int) -> list[Fraction]:
    """a_{3k} = 1/(4k)!, zero elsewhere, up to index count (order 3/4)."""
    import math

    out = [Fraction(0)] * (count + 1)
    k = 0
    while 3 * k <= count:
        out[3 * k] = Fraction(1, math.factorial(4 * k))
        k += 1
    return out


def prod_poly(*factor_coeffs) -> Poly:
    """Product of polynomials given by ascending coefficient lists."""
    out = Poly([1])
    for cs in factor_coeffs:
        out = out * Poly(cs)
    return out


def random_poly(rng: random.Random, max_degree: int, allow_zero: bool = True) -> Poly:
    if allow_zero and rng.random() < 0.15:
        return Poly()
    degree = rng.randint(0, max_degree)
    coeffs = [rng.randint(-9, 9) for _ in range(degree)]
    coeffs.append(rng.choice([x for x in range(-9, 10) if x]))
    return Poly(coeffs)


def random_equation(
    rng: random.Random, max_order: int = 6, max_degree: int = 5
) -> DifferenceEquation:
    order = rng.randint(1, max_order)
    coeffs = [random_poly(rng, max_degree) for _ in range(order)]
    coeffs.append(random_poly(rng, max_degree, allow_zero=False))
    return DifferenceEquation(coeffs)
