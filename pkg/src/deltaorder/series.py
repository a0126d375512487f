"""Exact coefficient streams for window recurrences, and growth estimation.

Generation runs an exact incremental row reduction over the rationals: each
row either determines its deepest stream coefficient (when the window's top
entry is nonzero at that row) or becomes a linear constraint among the free
coefficients seen so far.  The result is a basis of the truncated solution
space, optionally pinned to given initial data, with inhomogeneous
right-hand sides supported.

The growth quantity of a stream -- the reciprocal slope of -log|a_n| against
n log n -- is estimated by a least-squares fit with nuisance terms in n,
log n, and 1 over the trailing half of the nonzero subsequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InconsistentSystemError, InsufficientDataError
from .polynomials import as_rational, fraction_log_abs
from .recurrences import CoefficientRecurrence


@dataclass(frozen=True)
class SeriesSolution:
    """A truncated exact coefficient stream a_0..a_N.

    ``support_modulus`` records arithmetic-progression support (all nonzero
    indices divisible by it) when it exceeds one.  ``provenance`` is the
    free/pinned initial data that generated the stream (empty for hand-built
    streams).
    """

    rho_offset: Fraction
    coeffs: tuple[Fraction, ...]
    support_modulus: int | None = None
    provenance: dict | None = None

    @staticmethod
    def from_values(values, rho=0, provenance=None) -> SeriesSolution:
        coeffs = tuple(as_rational(v) for v in values)
        return SeriesSolution(
            rho_offset=as_rational(rho),
            coeffs=coeffs,
            support_modulus=detect_support_modulus(coeffs),
            provenance=provenance,
        )


def detect_support_modulus(coeffs) -> int | None:
    """gcd of the nonzero indices when it exceeds one, else None."""
    g = 0
    for n, c in enumerate(coeffs):
        if n and c != 0:
            g = math.gcd(g, n)
            if g == 1:
                return None
    return g if g >= 2 else None


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of substituting a stream into every recurrence row."""

    rows_checked: int
    max_residual: Fraction
    first_failing_row: int | None

    @property
    def exact(self) -> bool:
        return self.first_failing_row is None


def verify_recurrence(
    rec: CoefficientRecurrence, sol: SeriesSolution, rows: int, rhs=None
) -> VerificationReport:
    """Substitute the stream into rows first_row..rows; exact residuals.

    The stream must reach index rows + order.  Returns the first failing row
    (if any) and the largest absolute residual encountered.
    """
    need = rows + rec.order
    if len(sol.coeffs) < need + 1:
        raise InsufficientDataError(
            f"need {need + 1} coefficients to check {rows} rows"
        )
    worst = Fraction(0)
    first_bad = None
    for n in range(rec.first_row, rows + 1):
        total = Fraction(0)
        for idx, c in rec.row(n):
            total += c * sol.coeffs[idx]
        if rhs is not None and n >= 0:
            total -= as_rational(rhs[n]) if n < len(rhs) else Fraction(0)
        if total != 0:
            if first_bad is None:
                first_bad = n
            if abs(total) > worst:
                worst = abs(total)
    return VerificationReport(
        rows_checked=rows + 1 - rec.first_row,
        max_residual=worst,
        first_failing_row=first_bad,
    )


# --- exact solver -------------------------------------------------------------


class _LinearState:
    """Stream coefficients as affine combinations of free parameters."""

    def __init__(self):
        self.values: list[tuple[Fraction, dict[int, Fraction]]] = []
        self.free_ids: list[int] = []

    def append_free(self):
        fid = len(self.values)
        self.values.append((Fraction(0), {fid: Fraction(1)}))
        self.free_ids.append(fid)

    def append_combination(self, const: Fraction, lin: dict[int, Fraction]):
        self.values.append((const, lin))

    def eliminate(self, const: Fraction, lin: dict[int, Fraction]):
        """Impose const + sum lin[f]*free_f = 0; drops one free parameter."""
        live = {f: c for f, c in lin.items() if c != 0}
        if not live:
            if const != 0:
                raise InconsistentSystemError("rows force a nonzero constant")
            return
        target = max(live)
        pivot = live.pop(target)
        sub_const = -const / pivot
        sub_lin = {f: -c / pivot for f, c in live.items()}
        self.free_ids.remove(target)
        updated = []
        for vconst, vlin in self.values:
            w = vlin.get(target)
            if w is None or w == 0:
                updated.append((vconst, vlin))
                continue
            nconst = vconst + w * sub_const
            nlin = {f: c for f, c in vlin.items() if f != target}
            for f, c in sub_lin.items():
                nlin[f] = nlin.get(f, Fraction(0)) + w * c
            updated.append((nconst, {f: c for f, c in nlin.items() if c != 0}))
        self.values = updated


def solve_series(
    rec: CoefficientRecurrence,
    count: int,
    initial: dict[int, Fraction] | None = None,
    rhs=None,
) -> list[SeriesSolution]:
    """Generate the truncated solution space of a recurrence, exactly.

    ``count`` is the largest stream index (a_0..a_count are produced) and
    must cover the window span.  Without ``initial`` the result is a basis of
    the solution space: for a homogeneous system one stream per surviving
    free parameter; with a right-hand side, the particular solution (free
    parameters zeroed) followed by the homogeneous basis.  With ``initial``
    the pinned values select a single stream (remaining freedom is zeroed);
    contradictory pins raise InconsistentSystemError.

    An empty list means only the identically-zero stream survives.
    """
    if count < rec.span:
        raise InsufficientDataError(
            f"truncation {count} is below the window span {rec.span}"
        )
    state = _LinearState()
    for n in range(rec.first_row, count - rec.order + 1):
        top = n + rec.order
        while len(state.values) < top:
            state.append_free()
        const = Fraction(0)
        if rhs is not None and 0 <= n < len(rhs):
            const = -as_rational(rhs[n])
        lin: dict[int, Fraction] = {}
        lead = Fraction(0)
        for idx, c in rec.row(n):
            if idx == top:
                lead = c
                continue
            vconst, vlin = state.values[idx]
            const += c * vconst
            for f, w in vlin.items():
                lin[f] = lin.get(f, Fraction(0)) + c * w
        if lead != 0:
            state.append_combination(
                -const / lead, {f: -w / lead for f, w in lin.items() if w != 0}
            )
        else:
            state.eliminate(const, lin)
    while len(state.values) <= count:
        state.append_free()
    if initial is not None:
        return [_pin_initial(rec, state, initial, count)]
    solutions = []
    if rhs is not None:
        particular = [vconst for vconst, _ in state.values[: count + 1]]
        solutions.append(
            SeriesSolution.from_values(
                particular, rho=rec.rho_offset, provenance={"particular": True}
            )
        )
    for fid in state.free_ids:
        stream = [vlin.get(fid, Fraction(0)) for _, vlin in state.values[: count + 1]]
        if all(v == 0 for v in stream):
            continue
        solutions.append(
            SeriesSolution.from_values(
                stream, rho=rec.rho_offset, provenance={"free": {fid: Fraction(1)}}
            )
        )
    return solutions


def _pin_initial(rec, state, initial, count) -> SeriesSolution:
    pins = {int(k): as_rational(v) for k, v in initial.items()}
    for idx, wanted in sorted(pins.items()):
        if idx > count:
            raise InsufficientDataError(f"pinned index {idx} beyond truncation")
        vconst, vlin = state.values[idx]
        state.eliminate(vconst - wanted, dict(vlin))
    # zero out any remaining freedom for a deterministic single stream
    for fid in list(state.free_ids):
        state.eliminate(Fraction(0), {fid: Fraction(1)})
    stream = [vconst for vconst, vlin in state.values[: count + 1]]
    for idx, wanted in pins.items():
        if stream[idx] != wanted:
            raise InconsistentSystemError(
                f"initial value at index {idx} is inconsistent with the rows"
            )
    return SeriesSolution.from_values(
        stream,
        rho=rec.rho_offset,
        provenance={"pinned": {k: str(v) for k, v in sorted(pins.items())}},
    )


# --- growth estimation --------------------------------------------------------


@dataclass(frozen=True)
class GrowthEstimate:
    """Fitted decay profile of a coefficient stream.

    ``chi_hat`` is the reciprocal of the fitted n log n slope (the growth
    order of the limit function when below one); infinite when the stream
    does not super-exponentially decay.
    """

    chi_hat: float
    fit_window: tuple[int, int]
    model_params: tuple[float, float, float, float]
    residual: float
    converged: bool


def estimate_chi(coeffs, min_terms: int = 64) -> GrowthEstimate:
    """Fit -log|a_n| = mu*n*log n + beta*n + gamma*log n + delta, trailing half.

    Zero coefficients are skipped (arithmetic-progression supports are fine);
    at least ``min_terms`` nonzero terms are required.  A non-positive fitted
    slope is reported as chi_hat = inf with converged False.
    """
    indexed = []
    for n, c in enumerate(coeffs):
        if isinstance(c, Fraction):
            if c != 0:
                indexed.append((n, fraction_log_abs(c)))
        elif c:
            indexed.append((n, math.log(abs(c))))
    if len(indexed) < min_terms:
        raise InsufficientDataError(
            f"need at least {min_terms} nonzero coefficients, have {len(indexed)}"
        )
    tail = indexed[len(indexed) // 2 :]
    ns = np.array([float(n) for n, _ in tail])
    ys = np.array([-logmag for _, logmag in tail])
    logn = np.log(ns)
    design = np.column_stack([ns * logn, ns, logn, np.ones_like(ns)])
    params, *_ = np.linalg.lstsq(design, ys, rcond=None)
    fitted = design @ params
    residual = float(np.sqrt(np.mean((ys - fitted) ** 2)))
    mu = float(params[0])
    if mu <= 0:
        chi_hat = math.inf
        converged = False
    else:
        chi_hat = 1.0 / mu
        converged = math.isfinite(residual)
    return GrowthEstimate(
        chi_hat=chi_hat,
        fit_window=(tail[0][0], tail[-1][0]),
        model_params=tuple(float(x) for x in params),
        residual=residual,
        converged=converged,
    )
