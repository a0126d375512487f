import random
from fractions import Fraction

import pytest

from deltaorder import (
    CoefficientRecurrence,
    NEG_INF,
    Poly,
    adams_polygon,
    analyze,
    degree_profile,
    derive_recurrence,
    indicial_exponents,
    normalize_to_delta,
    parse_equation,
    shifted_recurrence,
    sub_one_branches,
)
from deltaorder.polynomials import falling_factorial_poly

from fixtures_equations import (
    CUBIC_THIRD,
    QUARTIC_34,
    prod_poly,
    random_equation,
)


@pytest.fixture(scope="module")
def cubic_eq():
    return normalize_to_delta(parse_equation(CUBIC_THIRD))


@pytest.fixture(scope="module")
def quartic_eq():
    return normalize_to_delta(parse_equation(QUARTIC_34))


def test_quartic_window_matches_displays(quartic_eq):
    rec = derive_recurrence(quartic_eq)
    expected = {
        -4: prod_poly([1, 1], [2, 1], [3, 1], [4, 1], [5, 2], [7, 4], [13, 4]) * 8,
        -3: prod_poly([1, 1], [2, 1], [3, 1], [3, 2], [3, 4], [9, 4]) * 24,
        -2: prod_poly([1, 1], [2, 1], [1, 2], [-1, 4], [5, 4]) * 24,
        -1: prod_poly([1, 1], [-446, -357, -465, 256]),
        0: prod_poly([1, 1], [2, 1]) * -243,
        1: Poly([1, 1]) * -243,
        2: Poly([-81]),
    }
    for i, poly in expected.items():
        assert rec.window[i] == poly
    assert rec.window[3].is_zero


def test_cubic_window_vanishes_beyond_constant_entry(cubic_eq):
    rec = derive_recurrence(cubic_eq)
    assert rec.window[0] == Poly([-1])
    assert rec.window[1].is_zero
    assert rec.window[2].is_zero


def test_first_order_window_by_hand():
    eq = normalize_to_delta(parse_equation("D f(z) - f(z) = 0"))
    rec = derive_recurrence(eq)
    assert rec.window == {-1: Poly([1, 1]), 0: Poly([-1])}


def test_shifted_window_matches_offset_displays(cubic_eq):
    # with offset r the windows are built from shifted falling powers:
    #   back-shift 1: 6 ff(n+1+r, 3) + ff(n+1+r, 2) - ff(n+1+r, 1)
    #   back-shift 2: 12 ff(n+2+r, 4) + 26 ff(n+2+r, 3) + 3 ff(n+2+r, 2)
    #   back-shift 3: 6 ff(n+3+r, 5) + 25 ff(n+3+r, 4) + 15 ff(n+3+r, 3)
    for rho in (Fraction(0), Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)):
        rec = shifted_recurrence(cubic_eq, rho)

        def ff(shift, length):
            return falling_factorial_poly(length, offset=rho + shift)

        assert rec.window[-1] == ff(1, 3) * 6 + ff(1, 2) - ff(1, 1)
        assert rec.window[-2] == ff(2, 4) * 12 + ff(2, 3) * 26 + ff(2, 2) * 3
        assert rec.window[-3] == ff(3, 5) * 6 + ff(3, 4) * 25 + ff(3, 3) * 15
        assert rec.window[0] == Poly([-1])


def test_shifted_reduces_to_plain(cubic_eq, quartic_eq):
    for eq in (cubic_eq, quartic_eq):
        assert shifted_recurrence(eq, 0).window == derive_recurrence(eq).window


def test_shifted_rejects_negative_integer_offset(cubic_eq):
    with pytest.raises(ValueError):
        shifted_recurrence(cubic_eq, -2)


def test_initial_rows_cover_small_indices(cubic_eq):
    rec = derive_recurrence(cubic_eq)
    # rows below the max window index, in stream-index/value pairs
    assert len(rec.initial_rows) == rec.max_index
    row0 = dict(rec.initial_rows[0])
    assert row0 == {3: Fraction(90), 2: Fraction(6), 1: Fraction(-1), 0: Fraction(-1)}


def test_indicial_exponents_cubic(cubic_eq):
    roots = indicial_exponents(cubic_eq)
    assert roots == [
        Fraction(0),
        Fraction(1),
        Fraction(4, 3),
        Fraction(3, 2),
        Fraction(2),
    ]


def test_indicial_exponents_first_order():
    eq = normalize_to_delta(parse_equation("D f(z) - f(z) = 0"))
    assert indicial_exponents(eq) == [Fraction(0)]


def test_indicial_contains_zero_when_constant_solutions_exist():
    eq = normalize_to_delta(parse_equation("D^2 f(z) + D f(z) = 0"))
    assert Fraction(0) in indicial_exponents(eq)


def test_adams_polygon_quartic(quartic_eq):
    polygon = adams_polygon(derive_recurrence(quartic_eq))
    assert polygon.points == ((0, 0), (1, 1), (2, 2), (3, 3), (4, 5), (5, 6), (6, 7))
    slopes = [(s.slope, s.span, s.start, s.end) for s in polygon.segments]
    assert slopes == [
        (Fraction(1), 3, (0, 0), (3, 3)),
        (Fraction(4, 3), 3, (3, 3), (6, 7)),
    ]
    steep = polygon.segments[1]
    assert steep.chi == Fraction(3, 4)
    # characteristic roots: the three cube roots of 81/256
    magnitude = (81 / 256) ** (1 / 3)
    assert len(steep.char_roots) == 3
    for root in steep.char_roots:
        assert abs(abs(root) - magnitude) < 1e-9
    assert any(abs(root - magnitude) < 1e-9 for root in steep.char_roots)


def test_adams_polygon_cubic(cubic_eq):
    polygon = adams_polygon(derive_recurrence(cubic_eq))
    assert polygon.points == ((0, 0), (1, 1), (2, 2), (3, 5))
    assert [(s.slope, s.span) for s in polygon.segments] == [
        (Fraction(1), 2),
        (Fraction(3), 1),
    ]
    assert sub_one_branches(polygon) == [(Fraction(1, 3), 1)]


def test_adams_polygon_flat_window_is_poincare_case():
    rec = CoefficientRecurrence(window={0: Poly([2]), 1: Poly([-1]), 2: Poly([3])})
    polygon = adams_polygon(rec)
    assert [(s.slope, s.span) for s in polygon.segments] == [(Fraction(0), 2)]
    assert polygon.segments[0].chi is None
    assert sub_one_branches(polygon) == []


def test_adams_polygon_two_term_roots_exact_when_span_one():
    rec = CoefficientRecurrence(window={0: Poly([0, 3]), 1: Poly([5])})
    polygon = adams_polygon(rec)
    seg = polygon.segments[0]
    assert seg.span == 1
    assert seg.char_roots == (Fraction(-5, 3),)


def test_two_term_segment_roots_are_span_th_roots():
    rng = random.Random(41)
    for _ in range(100):
        eq = random_equation(rng)
        polygon = adams_polygon(derive_recurrence(eq))
        analysis = analyze(eq)
        for seg, entry in zip(
            [s for s in polygon.segments if s.slope > 1], analysis.orders
        ):
            assert len(seg.char_roots) == seg.span == entry.max_count
            mags = sorted(abs(complex(r)) for r in seg.char_roots)
            assert mags[-1] - mags[0] < 1e-9
            assert len({round(complex(r).real, 9) + 1j * round(complex(r).imag, 9)
                        for r in seg.char_roots}) == seg.span


def test_degree_profile_ties_at_predicted_indices(quartic_eq, cubic_eq):
    rec4 = derive_recurrence(quartic_eq)
    profile = degree_profile(rec4, Fraction(4, 3))
    finite = [x for x in profile if x != NEG_INF]
    top = max(finite)
    assert [i for i, x in enumerate(profile) if x == top] == [3, 6]

    rec3 = derive_recurrence(cubic_eq)
    profile3 = degree_profile(rec3, Fraction(3))
    top3 = max(x for x in profile3 if x != NEG_INF)
    assert [i for i, x in enumerate(profile3) if x == top3] == [2, 3]


def test_degree_profile_large_exponent_peaks_at_leading_entry(quartic_eq):
    rec = derive_recurrence(quartic_eq)
    profile = degree_profile(rec, Fraction(100))
    finite = [x for x in profile if x != NEG_INF]
    assert profile[0] != max(finite)
    assert profile.index(max(finite)) == len([x for x in profile if x != NEG_INF]) - 1


def test_newton_adams_consistency_random():
    rng = random.Random(42)
    for _ in range(120):
        eq = random_equation(rng)
        analysis = analyze(eq)
        polygon = adams_polygon(derive_recurrence(eq))
        assert sub_one_branches(polygon) == [
            (e.rho, e.max_count) for e in analysis.orders
        ]


def test_window_degree_chain_random():
    # the derivation itself asserts the degree chain; exercise it broadly
    rng = random.Random(43)
    for _ in range(150):
        derive_recurrence(random_equation(rng))
