"""Estimating the emissions shape parameters ``r`` and ``l`` from observed behaviour.

The surplus emissions term ``l (Q/2) exp(rD/Q)`` has its minimum at the
critical lot ``Q* = rD`` and approaches a straight line of slope ``l/2`` for
large lots. Both facts give a two-step recipe: read the critical number of
orders per period off the equipment, and measure how emissions grow with the
average inventory well above the critical lot.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable

from scipy.optimize import bisect

from .model import DomainError, surplus_emissions

CLOSENESS = 0.9
# the slope estimate only uses lots at least this many critical lots large
SLOPE_REGION = 3.0


@dataclass(frozen=True)
class CalibrationResult:
    critical_orders: float  # N*, orders per time
    critical_lot: float  # Q* = D / N*
    r: float
    l: float
    closeness_lot: float  # smallest lot from which the curve is close to its asymptote


def closeness_holds(Q: float, critical_lot: float, level: float = CLOSENESS) -> bool:
    """``level * Q <= exp(Q*/Q) (Q - Q*)``."""
    return level * Q <= math.exp(critical_lot / Q) * (Q - critical_lot)


def closeness_lot(critical_lot: float, level: float = CLOSENESS) -> float:
    """Threshold lot beyond which :func:`closeness_holds` is true.

    Dividing by ``Q`` gives ``exp(u)(1 - u) >= level`` with ``u = Q*/Q``; the
    left side decreases in ``u`` on ``(0, 1)``, so the threshold is unique.
    """
    if not critical_lot > 0:
        raise DomainError(f"critical lot must be > 0, got {critical_lot!r}")
    if not 0 < level < 1:
        raise ValueError(f"closeness level must lie in (0, 1), got {level!r}")

    def gap(Q: float) -> float:
        return math.exp(critical_lot / Q) * (1 - critical_lot / Q) - level

    hi = 10 * critical_lot
    while gap(hi) < 0:
        hi *= 2
    return bisect(gap, critical_lot, hi, xtol=1e-12 * hi, rtol=1e-12, maxiter=500)


def calibrate(n_star: float, D: float, emission_slope: float) -> CalibrationResult:
    if not n_star > 0:
        raise DomainError(f"critical number of orders must be > 0, got {n_star!r}")
    if not D > 0:
        raise DomainError(f"demand must be > 0, got {D!r}")
    if emission_slope < 0:
        raise DomainError(f"emission slope must be >= 0, got {emission_slope!r}")
    q_star = D / n_star
    return CalibrationResult(
        critical_orders=n_star,
        critical_lot=q_star,
        r=q_star / D,
        l=emission_slope,
        closeness_lot=closeness_lot(q_star),
    )


def component_emissions(r: float, l: float, D: float, Q: float) -> float:
    """Surplus emissions per unit of time of the calibrated component."""
    if not Q > 0:
        raise DomainError(f"lot size must be > 0, got {Q!r}")
    return surplus_emissions(l, r, D, Q)


def asymptote_slope(l: float) -> float:
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l!r}")
    return l / 2


def estimate_slope(observations: Iterable[tuple[float, float]], critical_lot: float) -> float:
    """Least-squares slope of emissions against average inventory ``Q/2``.

    Only observations with ``Q >= 3 Q*`` are used, where the curve is already
    close to its asymptote.
    """
    pts = [(q / 2, e) for q, e in observations if q >= SLOPE_REGION * critical_lot]
    if len(pts) < 2:
        raise ValueError(
            f"need at least two observations with Q >= {SLOPE_REGION:g} * {critical_lot:g}"
        )
    xs, ys = zip(*pts)
    return statistics.linear_regression(xs, ys).slope


@dataclass(frozen=True)
class Residual:
    q: float
    observed: float
    fitted: float
    relative_error: float


def emission_residuals(
    result: CalibrationResult, D: float, observations: Iterable[tuple[float, float]]
) -> list[Residual]:
    """Compare observed ``(Q, emissions)`` pairs against the calibrated curve."""
    out = []
    for q, observed in observations:
        fitted = component_emissions(result.r, result.l, D, q)
        rel = (observed - fitted) / fitted if fitted else math.nan
        out.append(Residual(q, observed, fitted, rel))
    return out
