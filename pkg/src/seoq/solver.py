"""Segment-wise minimization of the total cost rate.

All solvers follow the same three steps: compute a candidate lot per segment,
keep it if it lies inside ``(lower, upper]`` and otherwise fall back to the
cheaper endpoint (evaluated with the segment's own capacity), then take the
cheapest segment. They differ in where the candidate comes from:

* :func:`solve_continuous`: closed-form minimizer of the Taylor-approximated cost.
* :func:`solve_exact`: stationary point of the exact cost.
* :func:`solve_integer`: integer marginal-analysis lot of the approximated cost.
* :func:`solve_environmental`: stationary point of the environmental cost only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

from scipy.optimize import brentq

from .model import (
    ConfigurationError,
    ModelParameters,
    derived_coefficients,
    environmental_coefficients,
    environmental_cost,
    exact_coefficients,
    exp_lot_derivative,
    total_cost_approx,
    total_cost_exact,
)
from .segments import Segment

CostKind = Literal["exact", "approximate", "environmental"]

# brentq tolerance on the lot size
LOT_XTOL = 1e-10


@dataclass(frozen=True)
class SegmentCandidate:
    segment_index: int
    lot: float
    cost: float
    at_boundary: bool  # False when the stationary point lies inside the segment
    cost_function_used: str
    stationary_lot: float  # unconstrained candidate before the range check
    lower_cost: float  # cost at the lower breakpoint, inf when it is 0
    upper_cost: float
    co_optimal: tuple[float, ...] = ()  # other lots with the same cost (integer ties)


@dataclass(frozen=True)
class SolveOutcome:
    candidates: tuple[SegmentCandidate, ...]
    optimum: SegmentCandidate

    @property
    def optimum_lot(self) -> float:
        return self.optimum.lot

    @property
    def optimum_cost(self) -> float:
        return self.optimum.cost


def cost_function(kind: CostKind) -> Callable[[ModelParameters, float, float], float]:
    """``f(p, capacity, Q)`` for the named cost rate."""
    if kind == "exact":
        return total_cost_exact
    if kind == "approximate":
        return total_cost_approx
    if kind == "environmental":
        return lambda p, capacity, Q: environmental_cost(p, Q)
    raise ValueError(f"unknown cost function {kind!r}")


def _at(fn, p: ModelParameters, capacity: float, Q: float) -> float:
    # lower breakpoint of the first segment is Q = 0, never a feasible lot
    if Q <= 0:
        return math.inf
    return fn(p, capacity, Q)


def _select(
    p: ModelParameters,
    segment: Segment,
    stationary: float,
    kind: CostKind,
    co_optimal: tuple[float, ...] = (),
) -> SegmentCandidate:
    fn = cost_function(kind)
    cap = segment.capacity
    lower_cost = _at(fn, p, cap, segment.lower)
    upper_cost = _at(fn, p, cap, segment.upper)
    if segment.contains(stationary):
        lot, cost, boundary = stationary, fn(p, cap, stationary), False
    elif lower_cost <= upper_cost:
        lot, cost, boundary, co_optimal = segment.lower, lower_cost, True, ()
    else:
        lot, cost, boundary, co_optimal = segment.upper, upper_cost, True, ()
    return SegmentCandidate(
        segment_index=segment.index,
        lot=lot,
        cost=cost,
        at_boundary=boundary,
        cost_function_used=kind,
        stationary_lot=stationary,
        lower_cost=lower_cost,
        upper_cost=upper_cost,
        co_optimal=co_optimal,
    )


def _outcome(candidates: list[SegmentCandidate]) -> SolveOutcome:
    if not candidates:
        raise ConfigurationError("no segments to solve over")
    # min() keeps the first of equal costs, i.e. the lowest segment index
    best = min(candidates, key=lambda c: c.cost)
    if math.isinf(best.cost):
        raise ConfigurationError("no segment yields a finite cost")
    return SolveOutcome(tuple(candidates), best)


def closed_form_lot(p: ModelParameters, capacity: float) -> float:
    """Minimizer of the approximated cost over ``Q > 0``, ignoring the segment range."""
    k_prime, h_prime, _ = derived_coefficients(p, capacity)
    if h_prime <= 0:
        raise ConfigurationError("g*Ce + h + l*Ce must be > 0")
    return math.sqrt(2 * p.D * k_prime / h_prime)


def solve_continuous(
    p: ModelParameters,
    segments: list[Segment],
    cost: CostKind = "approximate",
) -> SolveOutcome:
    """Closed-form lots per segment, compared under ``cost``.

    The default compares them under the approximated cost. Passing
    ``cost="exact"`` keeps the closed-form lots but ranks segments and
    endpoints with the exact cost.
    """
    return _outcome(
        [_select(p, seg, closed_form_lot(p, seg.capacity), cost) for seg in segments]
    )


def stationary_point(
    k_order: float, k_hold: float, k_surplus: float, rD: float, D: float
) -> float:
    """Minimizer over ``Q > 0`` of ``k_order D/Q + k_hold Q/2 + k_surplus (Q/2) exp(rD/Q)``.

    The function is strictly convex when any coefficient is positive, so its
    derivative is increasing and has at most one root. Returns 0 when the
    function is nondecreasing on the whole half line.
    """
    if k_hold + k_surplus <= 0:
        raise ConfigurationError("cost rate has no finite minimizer: holding coefficient is 0")
    if k_order == 0 and (k_surplus == 0 or rD == 0):
        return 0.0

    def deriv(Q: float) -> float:
        # brentq needs finite values; overflow only occurs left of the root
        return max(exp_lot_derivative(k_order, k_hold, k_surplus, rD, D, Q), -1e300)

    # Taylor minimizer as the starting guess, then expand to a sign change
    guess = math.sqrt(2 * D * (k_order + k_surplus * rD * rD / (4 * D)) / (k_hold + k_surplus))
    lo = hi = guess
    while deriv(lo) > 0:
        lo /= 2
    while deriv(hi) < 0:
        hi *= 2
    if lo == hi:
        return lo
    return brentq(deriv, lo, hi, xtol=LOT_XTOL, maxiter=500)


def exact_stationary_lot(p: ModelParameters, capacity: float) -> float:
    return stationary_point(*exact_coefficients(p, capacity), p.r * p.D, p.D)


def exact_segment_minimum(p: ModelParameters, segment: Segment) -> SegmentCandidate:
    """Best lot in one segment under the exact cost."""
    return _select(p, segment, exact_stationary_lot(p, segment.capacity), "exact")


def solve_exact(p: ModelParameters, segments: list[Segment]) -> SolveOutcome:
    return _outcome([exact_segment_minimum(p, seg) for seg in segments])


def solve_environmental(p: ModelParameters, segments: list[Segment]) -> SolveOutcome:
    """Lot minimizing only the environmental cost rate, within the feasible segments."""
    q = stationary_point(*environmental_coefficients(p), p.r * p.D, p.D)
    return _outcome([_select(p, seg, q, "environmental") for seg in segments])


def integer_lot(p: ModelParameters, capacity: float) -> tuple[int, ...]:
    """Integer minimizers of ``K' D/q + h' q/2 + w``.

    ``q`` is optimal once the marginal cost of ``q + 1`` turns nonnegative,
    i.e. ``q (q + 1) >= 2 K' D / h'``. One lot in general, two when the root of
    that quadratic is itself an integer.
    """
    k_prime, h_prime, _ = derived_coefficients(p, capacity)
    if h_prime <= 0:
        raise ConfigurationError("g*Ce + h + l*Ce must be > 0")
    ratio = 2 * k_prime * p.D / h_prime
    x = -0.5 + math.sqrt(0.25 + ratio)
    q = max(math.ceil(x), 1)
    # guard the ceiling against rounding in the square root
    while q > 1 and (q - 1) * q >= ratio:
        q -= 1
    while q * (q + 1) < ratio:
        q += 1
    if q * (q + 1) == ratio:
        return (q, q + 1)
    return (q,)


def _is_whole(x: float) -> bool:
    return math.isfinite(x) and x == math.floor(x)


def solve_integer(
    p: ModelParameters,
    segments: list[Segment],
    cost: Literal["exact", "approximate"] = "approximate",
) -> SolveOutcome:
    """Integer lots per segment, compared under ``cost``.

    Segments entirely below one unit are skipped; breakpoints must be whole.
    """
    candidates = []
    for seg in segments:
        if not (_is_whole(seg.lower) and _is_whole(seg.upper)):
            raise ConfigurationError(
                f"segment {seg.index}: breakpoints ({seg.lower}, {seg.upper}] must be integers"
            )
        if seg.upper < 1:
            continue
        lots = integer_lot(p, seg.capacity)
        inside = tuple(q for q in lots if seg.contains(q))
        headline = inside[0] if inside else lots[0]
        candidates.append(_select(p, seg, float(headline), cost, inside[1:]))
    return _outcome(candidates)
