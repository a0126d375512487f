"""Difference-equation data model, form conversions, and operator algebra.

Two presentations of a linear difference operator are supported:

* :class:`GeneralForm` -- a raw sum of terms  coef(z) * Delta^k f(z + s)
  with arbitrary integer argument shifts, as produced by the parser;
* :class:`DifferenceEquation` -- the canonical pure-Delta form
  P_m(z) Delta^m f(z) + ... + P_0(z) f(z) = 0 with primitive integer
  coefficients and a positive leading coefficient on P_m.

Conversions between the two use the standard shift/difference binomial
identities.  Composition treats operators as elements of the noncommutative
ring generated by multiplication-by-z and the forward difference, with the
rewrite rule  Delta (P f) = P(z+1) Delta f + (Delta P) f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import DegenerateEquationError, InsufficientDataError
from .polynomials import (
    Poly,
    binomial,
    falling_factorial,
    iterated_delta,
    to_falling_basis,
)

if TYPE_CHECKING:  # pragma: no cover
    from .series import SeriesSolution


@dataclass(frozen=True)
class OperatorTerm:
    """One summand  coefficient(z) * Delta^delta_power f(z + shift)."""

    coefficient: Poly
    delta_power: int = 0
    shift: int = 0

    def __post_init__(self):
        if self.delta_power < 0:
            raise ValueError("difference power must be non-negative")


@dataclass(frozen=True)
class GeneralForm:
    """A sum of operator terms equated to zero."""

    terms: tuple[OperatorTerm, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an equation needs at least one term")

    @property
    def max_delta_power(self) -> int:
        return max(t.delta_power for t in self.terms)


class DifferenceEquation:
    """Canonical operator  sum_j P_j(z) Delta^j  acting on f, order >= 1.

    Construction normalizes the coefficient vector: rational coefficients are
    scaled to primitive integers (content 1) and the leading coefficient of
    the top polynomial is made positive.  The zero operator and order-0
    operators are rejected as degenerate.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        polys = [c if isinstance(c, Poly) else Poly(c) for c in coeffs]
        while polys and polys[-1].is_zero:
            polys.pop()
        if not polys:
            raise DegenerateEquationError("all operator terms cancel")
        if len(polys) == 1:
            raise DegenerateEquationError("operator has order zero")
        object.__setattr__(self, "coeffs", tuple(_canonical_scale(polys)))

    def __setattr__(self, name, value):
        raise AttributeError("DifferenceEquation is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def degrees(self) -> list:
        """Coefficient degrees d_0..d_m (NEG_INF for vanishing P_j)."""
        return [p.degree for p in self.coeffs]

    @property
    def max_degree(self) -> int:
        return max(int(p.degree) for p in self.coeffs if not p.is_zero)

    def __eq__(self, other):
        if not isinstance(other, DifferenceEquation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"DifferenceEquation(order={self.order}, degrees={self.degrees()})"


def _canonical_scale(polys: list[Poly]) -> list[Poly]:
    denom_lcm = 1
    for p in polys:
        for c in p.coeffs:
            denom_lcm = math.lcm(denom_lcm, c.denominator)
    content = 0
    for p in polys:
        for c in p.coeffs:
            content = math.gcd(content, abs(int(c * denom_lcm)))
    scale = Fraction(denom_lcm, content if content else 1)
    if polys[-1].leading_coefficient < 0:
        scale = -scale
    return [p * scale for p in polys]


# --- form conversions ---------------------------------------------------------


def _shift_table(g: GeneralForm) -> dict[int, Poly]:
    """Expand every term of ``g`` into pure shifts:  {s: C_s} with C_s f(z+s)."""
    table: dict[int, Poly] = {}
    for term in g.terms:
        if term.coefficient.is_zero:
            continue
        k, s = term.delta_power, term.shift
        for t in range(k + 1):
            sign = 1 if (k - t) % 2 == 0 else -1
            c = term.coefficient * (sign * binomial(k, t))
            key = s + t
            table[key] = table.get(key, Poly()) + c
    return {s: c for s, c in table.items() if not c.is_zero}


def normalize_to_delta(g: GeneralForm) -> DifferenceEquation:
    """Rewrite a general form as a canonical pure-Delta equation.

    Terms are first expanded into pure shifts of the unknown.  If any shift is
    negative the whole equation is recentered (z replaced by z + a for the
    smallest sufficient a >= 0); shifts are then folded back into difference
    powers through  f(z+k) = sum_j C(k, j) Delta^j f(z).
    """
    table = _shift_table(g)
    if not table:
        raise DegenerateEquationError("all operator terms cancel")
    recenter = -min(table)
    if recenter > 0:
        table = {s + recenter: c.shifted(recenter) for s, c in table.items()}
    top = max(table)
    out = [Poly() for _ in range(top + 1)]
    for s, c in table.items():
        for j in range(s + 1):
            out[j] = out[j] + c * binomial(s, j)
    return DifferenceEquation(out)


def delta_to_shift(eq: DifferenceEquation) -> GeneralForm:
    """Expand every difference power into pure shifts (inverse conversion).

    The returned terms carry exact integer coefficient polynomials, ordered by
    descending shift; no rescaling is applied.
    """
    table: dict[int, Poly] = {}
    for k, p in enumerate(eq.coeffs):
        if p.is_zero:
            continue
        for j in range(k + 1):
            sign = 1 if (k - j) % 2 == 0 else -1
            table[j] = table.get(j, Poly()) + p * (sign * binomial(k, j))
    terms = [
        OperatorTerm(coefficient=table[s], delta_power=0, shift=s)
        for s in sorted(table, reverse=True)
        if not table[s].is_zero
    ]
    return GeneralForm(terms=tuple(terms))


# --- operator algebra ---------------------------------------------------------


def _operator_coeffs(op) -> tuple[Poly, ...]:
    if isinstance(op, DifferenceEquation):
        return op.coeffs
    return tuple(c if isinstance(c, Poly) else Poly(c) for c in op)


def compose_operators(outer, inner) -> DifferenceEquation:
    """Operator product: apply ``inner`` first, then ``outer``.

    Computed by symbolic rewriting on the (z, Delta) generators via the
    difference Leibniz rule

        Delta^i (B f) = sum_t C(i, t) (Delta^t B)(z + i - t) Delta^(i-t) f,

    so the result order is the sum of the orders.  Raw coefficient sequences
    (index = difference power) are accepted alongside equations, which allows
    order-0 factors such as plain multiplication by a polynomial.
    """
    out: dict[int, Poly] = {}
    for i, a in enumerate(_operator_coeffs(outer)):
        if a.is_zero:
            continue
        for j, b in enumerate(_operator_coeffs(inner)):
            if b.is_zero:
                continue
            for t in range(i + 1):
                piece = iterated_delta(b, t)
                if piece.is_zero:
                    continue
                piece = piece.shifted(i - t) * (a * binomial(i, t))
                key = i - t + j
                out[key] = out.get(key, Poly()) + piece
    coeffs = [out.get(k, Poly()) for k in range(max(out, default=0) + 1)]
    return DifferenceEquation(coeffs)


def apply_operator(eq: DifferenceEquation, solution: "SeriesSolution", upto: int):
    """Apply the operator to a binomial series, exactly, in the falling basis.

    The expansion uses the product rule for integer and general falling powers
    directly (independent of any derived recurrence), and returns the exact
    coefficients 0..upto of the image series; an all-zero result certifies the
    series solves the equation up to the truncation.

    The solution must provide at least ``upto + order + 1`` coefficients.
    """
    rho = solution.rho_offset
    coeffs = solution.coeffs
    needed = upto + eq.order
    if len(coeffs) < needed + 1:
        raise InsufficientDataError(
            f"need {needed + 1} series coefficients, have {len(coeffs)}"
        )
    out = [Fraction(0)] * (upto + 1)
    for j, p in enumerate(eq.coeffs):
        if p.is_zero:
            continue
        for t, coeff_t in enumerate(to_falling_basis(p)):
            if coeff_t == 0:
                continue
            for k in range(t + 1):
                weight = coeff_t * binomial(t, k)
                offset = t - k - j
                lo = max(0, -offset)
                hi = min(needed, upto - offset)
                for n in range(lo, hi + 1):
                    a = coeffs[n]
                    if a == 0:
                        continue
                    out[n + offset] += weight * a * falling_factorial(n + rho, j + k)
    return out
