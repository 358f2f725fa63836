"""Sustainable economic order quantity with emissions, waste and container costs."""

from .model import (
    ConfigurationError,
    CostBreakdown,
    DomainError,
    ModelParameters,
    co2_per_cycle,
    co2_rate,
    cycle_costs,
    derived_coefficients,
    environmental_cost,
    total_cost_approx,
    total_cost_exact,
)
from .segments import (
    Combination,
    ContainerSpec,
    Segment,
    build_segments,
    enumerate_combinations,
    segments_for,
)
from .solver import (
    SegmentCandidate,
    SolveOutcome,
    closed_form_lot,
    exact_segment_minimum,
    integer_lot,
    solve_continuous,
    solve_environmental,
    solve_exact,
    solve_integer,
)

__version__ = "0.1.0"
