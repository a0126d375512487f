import math
from fractions import Fraction

import pytest

from deltaorder import (
    Poly,
    adams_polygon,
    analyze,
    construct_equation,
    derive_recurrence,
    normalize_to_delta,
    parse_equation,
    roundtrip_check,
    sub_one_branches,
)
from deltaorder.errors import InvalidOrderError

from fixtures_equations import HALF_ORDER


def test_rejects_bad_orders():
    with pytest.raises(InvalidOrderError):
        construct_equation(2, 4)  # not coprime
    with pytest.raises(InvalidOrderError):
        construct_equation(1, 1)
    with pytest.raises(InvalidOrderError):
        construct_equation(3, 2)
    with pytest.raises(InvalidOrderError):
        construct_equation(0, 5)


def test_half_order_weights():
    # the profile (2n)(2n - 1) = 4 ff(n,2) + 2 ff(n,1) gives weights 4, 2, 1
    result = construct_equation(1, 2, series_length=80)
    assert result.weights == (1, 2, 4)
    assert result.template.terms[0].coefficient == Poly([0, -4, 4])
    assert result.template.terms[0].delta_power == 2
    assert result.template.terms[0].shift == -2
    assert result.template.terms[-1].coefficient == Poly([0, -1])
    assert result.template.terms[-1].shift == -1


def test_weight_ratio_is_order_power():
    for q, p in ((1, 2), (3, 4), (2, 5), (5, 6)):
        result = construct_equation(q, p, series_length=4 * p)
        assert Fraction(result.weights[0], result.weights[-1]) == Fraction(q, p) ** p


def test_predicted_series_pattern():
    result = construct_equation(3, 4, series_length=60)
    coeffs = result.predicted_series.coeffs
    assert result.predicted_series.support_modulus == 3
    for t in range(0, 20):
        assert coeffs[3 * t] == Fraction(1, math.factorial(4 * t))
    assert all(
        coeffs[n] == 0 for n in range(61) if n % 3
    )


def test_roundtrip_three_quarters():
    result = construct_equation(3, 4)
    report = roundtrip_check(result)
    assert report.ok, report.stages
    assert abs(report.chi_hat - 0.75) < 0.01
    slopes = [seg.slope for seg in report.polygon.segments]
    assert Fraction(4, 3) in slopes


def test_roundtrip_one_fifth():
    result = construct_equation(1, 5)
    report = roundtrip_check(result)
    assert report.ok, report.stages
    assert Fraction(1, 5) in [e.rho for e in report.analysis.orders]


def test_half_order_family_agrees_with_fixture():
    # the independent second-order fixture has the same admissible order as
    # the generated half-order equation
    fixture = analyze(normalize_to_delta(parse_equation(HALF_ORDER)))
    generated = analyze(construct_equation(1, 2, series_length=80).canonical)
    assert [e.rho for e in fixture.orders] == [e.rho for e in generated.orders] == [
        Fraction(1, 2)
    ]
    polygon = adams_polygon(
        derive_recurrence(normalize_to_delta(parse_equation(HALF_ORDER)))
    )
    assert sub_one_branches(polygon) == [(Fraction(1, 2), 1)]


def test_all_coprime_pairs_up_to_six():
    pairs = [
        (q, p)
        for p in range(2, 7)
        for q in range(1, p)
        if math.gcd(q, p) == 1
    ]
    assert len(pairs) == 11
    for q, p in pairs:
        result = construct_equation(q, p, series_length=60 * q + p + 1)
        analysis = analyze(result.canonical)
        assert Fraction(q, p) in [e.rho for e in analysis.orders], (q, p)
