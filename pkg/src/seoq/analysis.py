"""Sensitivity sweeps, scenario comparisons and cost-curve sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .model import ModelParameters, co2_rate, total_cost_approx, total_cost_exact
from .segments import Segment, locate
from .solver import (
    SolveOutcome,
    cost_function,
    solve_continuous,
    solve_environmental,
    solve_exact,
)

SWEEP_PARAMETERS = ("c", "D", "r", "l")
SWEEP_DELTAS = (-20.0, -10.0, 0.0, 10.0, 20.0)
POINTS_PER_SEGMENT = 2000

CurveKind = Literal["exact", "approximate", "environmental", "emissions"]


@dataclass(frozen=True)
class SensitivityRow:
    parameter: str
    delta_pct: float
    q_opt: float | None = None
    dq_pct: float | None = None
    approx_q_pct: float | None = None
    tc_opt: float | None = None
    dtc_pct: float | None = None
    approx_c_pct: float | None = None
    q_app: float | None = None
    error: str | None = None


def approximation_gaps(exact: SolveOutcome, approx: SolveOutcome) -> tuple[float, float]:
    """Relative lot and cost gaps, in percent, of the Taylor solution against the exact one."""
    q_opt, tc = exact.optimum_lot, exact.optimum_cost
    return (
        (q_opt - approx.optimum_lot) / q_opt * 100,
        (tc - approx.optimum_cost) / tc * 100,
    )


def sensitivity_table(
    p: ModelParameters,
    segments: list[Segment],
    params: Iterable[str] = SWEEP_PARAMETERS,
    deltas: Iterable[float] = SWEEP_DELTAS,
) -> list[SensitivityRow]:
    """Rescale one parameter at a time and re-solve with both cost functions.

    Percent changes are relative to the unperturbed exact optimum. A perturbed
    model that cannot be built or solved yields a row carrying ``error`` only.
    """
    base = solve_exact(p, segments)
    deltas = tuple(deltas)
    rows = []
    for name in params:
        for delta in deltas:
            try:
                q = p.scaled(name, 1 + delta / 100)
                exact = solve_exact(q, segments)
                approx = solve_continuous(q, segments)
            except (ValueError, ArithmeticError) as exc:
                rows.append(SensitivityRow(name, delta, error=f"{name} {delta:+g}%: {exc}"))
                continue
            gap_q, gap_c = approximation_gaps(exact, approx)
            rows.append(
                SensitivityRow(
                    parameter=name,
                    delta_pct=delta,
                    q_opt=exact.optimum_lot,
                    dq_pct=(exact.optimum_lot - base.optimum_lot) / base.optimum_lot * 100,
                    approx_q_pct=gap_q,
                    tc_opt=exact.optimum_cost,
                    dtc_pct=(exact.optimum_cost - base.optimum_cost) / base.optimum_cost * 100,
                    approx_c_pct=gap_c,
                    q_app=approx.optimum_lot,
                )
            )
    return rows


@dataclass(frozen=True)
class ScenarioRow:
    r: float
    s_eoq: float  # exact optimum
    s_eoq_approx: float  # closed-form lots ranked by the exact cost
    q_s: float  # environmental-cost optimum
    s_eoq_at_boundary: bool
    s_eoq_approx_at_boundary: bool
    q_s_at_boundary: bool

    @property
    def gap_pct(self) -> float:
        """How far the environmental lot falls below the sustainable one, in percent."""
        return (self.s_eoq - self.q_s) / self.s_eoq * 100


def scenario_report(
    p: ModelParameters, segments: list[Segment], r_values: Iterable[float]
) -> list[ScenarioRow]:
    rows = []
    for r in r_values:
        q = p.with_values(r=r)
        exact = solve_exact(q, segments)
        approx = solve_continuous(q, segments, cost="exact")
        env = solve_environmental(q, segments)
        rows.append(
            ScenarioRow(
                r=r,
                s_eoq=exact.optimum_lot,
                s_eoq_approx=approx.optimum_lot,
                q_s=env.optimum_lot,
                s_eoq_at_boundary=exact.optimum.at_boundary,
                s_eoq_approx_at_boundary=approx.optimum.at_boundary,
                q_s_at_boundary=env.optimum.at_boundary,
            )
        )
    return rows


@dataclass(frozen=True)
class CurvePoint:
    q: float
    value: float | None  # None when q is outside the curve's domain
    segment_index: int | None
    in_range: bool
    breakpoint: bool  # q is a segment's upper breakpoint; the curve jumps right after it


def default_grid(segments: list[Segment], points_per_segment: int = POINTS_PER_SEGMENT) -> list[float]:
    """Uniform interior points of every segment plus both of its endpoints.

    The lower endpoint 0 of the first segment is left out; it is not a lot size.
    """
    if points_per_segment < 0:
        raise ValueError("points_per_segment must be >= 0")
    grid: set[float] = set()
    for seg in segments:
        width = seg.upper - seg.lower
        step = width / (points_per_segment + 1)
        if seg.lower > 0:
            grid.add(seg.lower)
        grid.add(seg.upper)
        for k in range(1, points_per_segment + 1):
            grid.add(seg.lower + k * step)
    return sorted(grid)


def sample_cost_curve(
    p: ModelParameters,
    segments: list[Segment],
    grid: Iterable[float],
    which: CurveKind = "exact",
) -> list[CurvePoint]:
    """Evaluate a curve on ``grid``; points outside its domain are flagged, not dropped."""
    uppers = {seg.upper for seg in segments}
    points = []
    for q in grid:
        seg = locate(segments, q) if q > 0 else None
        index = seg.index if seg else None
        on_break = q in uppers
        if which == "emissions":
            ok = q > 0 and math.isfinite(q)
            value = co2_rate(p, q) if ok else None
        else:
            ok = seg is not None
            value = cost_function(which)(p, seg.capacity, q) if ok else None
        points.append(CurvePoint(q, value, index, ok, on_break))
    return points


@dataclass(frozen=True)
class Discontinuity:
    q: float
    left: float  # value with the capacity of the segment ending at q
    right: float  # limit from the right, with the next segment's capacity
    jump: float


def discontinuities(
    p: ModelParameters, segments: list[Segment], which: Literal["exact", "approximate"] = "exact"
) -> list[Discontinuity]:
    fn = total_cost_exact if which == "exact" else total_cost_approx
    out = []
    for seg, nxt in zip(segments, segments[1:]):
        q = seg.upper
        left = fn(p, seg.capacity, q)
        right = fn(p, nxt.capacity, q)
        out.append(Discontinuity(q, left, right, right - left))
    return out
