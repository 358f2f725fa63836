"""Container combinations and the lot-size segments they induce."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import ConfigurationError


@dataclass(frozen=True)
class ContainerSpec:
    capacity: float  # units per container
    available: int  # how many containers of this type can be used

    def __post_init__(self) -> None:
        if not self.capacity > 0:
            raise ConfigurationError(f"container capacity must be > 0, got {self.capacity!r}")
        if isinstance(self.available, bool) or not isinstance(self.available, int):
            raise ConfigurationError(
                f"container availability must be an integer, got {self.available!r}"
            )
        if self.available < 0:
            raise ConfigurationError(
                f"container availability must be >= 0, got {self.available!r}"
            )


@dataclass(frozen=True)
class Combination:
    counts: tuple[int, ...]  # containers used per type
    total_capacity: float

    @property
    def n_containers(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class Segment:
    """Lot sizes in ``(lower, upper]``, shipped with a combination of capacity ``upper``."""

    index: int  # 1-based
    lower: float
    upper: float
    combination: Combination

    @property
    def capacity(self) -> float:
        return self.combination.total_capacity

    def contains(self, Q: float) -> bool:
        return self.lower < Q <= self.upper


def enumerate_combinations(specs: list[ContainerSpec]) -> list[Combination]:
    """All non-empty container combinations, one per distinct total capacity.

    The container charge depends only on total capacity, so among combinations
    with equal capacity the one with the fewest containers is kept; remaining
    ties go to the lexicographically largest count vector, i.e. the one using
    lower-index types most.
    """
    if not specs:
        raise ConfigurationError("at least one container type is required")
    if all(s.available == 0 for s in specs):
        raise ConfigurationError("no containers available: every availability is zero")

    best: dict[float, Combination] = {}
    ranges = [range(s.available + 1) for s in specs]
    for counts in itertools.product(*ranges):
        if not any(counts):
            continue
        total = sum(n * s.capacity for n, s in zip(counts, specs))
        combo = Combination(tuple(counts), total)
        kept = best.get(total)
        if kept is None or _preferred(combo, kept):
            best[total] = combo
    return [best[cap] for cap in sorted(best)]


def _preferred(candidate: Combination, incumbent: Combination) -> bool:
    if candidate.n_containers != incumbent.n_containers:
        return candidate.n_containers < incumbent.n_containers
    return candidate.counts > incumbent.counts


def build_segments(combos: list[Combination]) -> list[Segment]:
    if not combos:
        raise ConfigurationError("no container combinations to build segments from")
    segments = []
    lower = 0.0
    for i, combo in enumerate(combos, start=1):
        if combo.total_capacity <= lower:
            raise ConfigurationError(
                "combination capacities must be strictly increasing, "
                f"got {combo.total_capacity!r} after {lower!r}"
            )
        segments.append(Segment(i, lower, combo.total_capacity, combo))
        lower = combo.total_capacity
    return segments


def segments_for(specs: list[ContainerSpec]) -> list[Segment]:
    return build_segments(enumerate_combinations(specs))


def max_capacity(segments: list[Segment]) -> float:
    return segments[-1].upper


def locate(segments: list[Segment], Q: float) -> Segment | None:
    """Segment containing ``Q``, or ``None`` if ``Q`` is not a feasible lot."""
    for seg in segments:
        if seg.contains(Q):
            return seg
    return None
