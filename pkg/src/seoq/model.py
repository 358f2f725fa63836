"""Cost and emissions formulas for the sustainable EOQ model.

Every function here is a pure function of a :class:`ModelParameters` instance,
a container capacity (where the container charge matters) and a lot size ``Q``.
Two flavours of the total cost rate are provided: the exact one, which keeps the
exponential surplus-emissions term ``l (Q/2) exp(rD/Q)``, and the quadratic
Taylor truncation of that term, which admits a closed-form minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

# exp() overflows just above 709.78
_MAX_EXPONENT = 709.0


class DomainError(ValueError):
    """A lot size or capacity outside the domain of the cost model."""


class ConfigurationError(ValueError):
    """Parameters or containers that make the problem ill-posed."""


@dataclass(frozen=True)
class ModelParameters:
    """Scalar inputs of the model.

    Units follow the usual convention of a yearly planning horizon: ``D`` in
    units/year, ``h`` and ``g``/``l`` per unit of average inventory per year,
    ``r`` in years/order. ``b`` enters the transport cost as ``b*d*Q`` per cycle.
    """

    A: float  # ordering cost per order
    c: float  # purchase cost per unit
    h: float  # holding cost per unit per time
    a: float  # fixed cost per trip
    b: float  # variable transport cost coefficient
    d: float  # distance per order
    alpha: float  # returned waste, fraction of lot
    D: float  # demand rate
    beta: float  # transport emissions cost per hour travelled
    v: float  # vehicle speed
    gamma: float  # variable disposal cost per unit of waste
    gamma0: float  # fixed disposal cost per order
    theta: float  # produced waste, fraction of lot
    epsilon: float  # kgCO2 per replenishment
    g: float  # kgCO2 per unit of average inventory per time
    Ce: float  # cost per kgCO2
    Cp: float  # container cost per unit of capacity
    r: float  # emissions shape parameter, time per order
    l: float  # emissions shape parameter, kgCO2 per unit per time

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigurationError(f"{f.name}: expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigurationError(f"{f.name}: must be finite, got {value!r}")
            if value < 0:
                raise ConfigurationError(f"{f.name}: must be >= 0, got {value!r}")
        if self.D <= 0:
            raise ConfigurationError(f"D: demand rate must be > 0, got {self.D!r}")
        if self.v <= 0:
            raise ConfigurationError(f"v: speed must be > 0, got {self.v!r}")
        for name in ("alpha", "theta"):
            if getattr(self, name) > 1:
                raise ConfigurationError(
                    f"{name}: must lie in [0, 1], got {getattr(self, name)!r}"
                )
        if self.holding_rate <= 0:
            raise ConfigurationError(
                "g*Ce + h + l*Ce must be > 0 (no finite optimal lot otherwise)"
            )

    @property
    def holding_rate(self) -> float:
        """Effective holding coefficient ``g*Ce + l*Ce + h``."""
        return self.g * self.Ce + self.l * self.Ce + self.h

    def scaled(self, name: str, factor: float) -> "ModelParameters":
        """Copy with one parameter multiplied by ``factor``."""
        return replace(self, **{name: getattr(self, name) * factor})

    def with_values(self, **changes: float) -> "ModelParameters":
        return replace(self, **changes)


PARAMETER_NAMES: tuple[str, ...] = tuple(f.name for f in fields(ModelParameters))


@dataclass(frozen=True)
class CostBreakdown:
    """Per-cycle cost components for one lot size and container capacity."""

    c1: float  # emissions
    c2: float  # transport emissions
    c3: float  # waste disposal
    c4: float  # containers
    c5: float  # ordering, purchasing, holding
    c6: float  # transport
    cycle_length: float
    saturation: float

    @property
    def per_cycle(self) -> float:
        return self.c1 + self.c2 + self.c3 + self.c4 + self.c5 + self.c6

    @property
    def rate(self) -> float:
        """Cost per unit of time, i.e. the per-cycle total over the cycle length."""
        return self.per_cycle / self.cycle_length


def _check_lot(Q: float) -> None:
    if not Q > 0 or not math.isfinite(Q):
        raise DomainError(f"lot size must be a positive finite number, got {Q!r}")


def _check_capacity(capacity: float) -> None:
    if not capacity > 0 or not math.isfinite(capacity):
        raise DomainError(f"capacity must be a positive finite number, got {capacity!r}")


def _exp_factor(exponent: float) -> float:
    if exponent > _MAX_EXPONENT:
        return math.inf
    return math.exp(exponent)


def surplus_emissions(l: float, r: float, D: float, Q: float) -> float:
    """The exponential addend ``l (Q/2) exp(rD/Q)`` in kgCO2 per time."""
    _check_lot(Q)
    if l == 0:
        return 0.0
    return l * Q / 2 * _exp_factor(r * D / Q)


def surplus_emissions_taylor(l: float, r: float, D: float, Q: float) -> float:
    """Second-order Taylor truncation ``(l/2)(Q + rD + r^2 D^2 / (2Q))``."""
    _check_lot(Q)
    rD = r * D
    return l / 2 * (Q + rD + rD * rD / (2 * Q))


def co2_rate(p: ModelParameters, Q: float) -> float:
    """Emissions per unit of time for lot size ``Q``."""
    _check_lot(Q)
    return p.epsilon * p.D / Q + p.g * Q / 2 + surplus_emissions(p.l, p.r, p.D, Q)


def co2_per_cycle(p: ModelParameters, Q: float) -> float:
    _check_lot(Q)
    k = Q * Q / (2 * p.D)
    if p.l == 0:
        surplus = 0.0
    else:
        surplus = p.l * k * _exp_factor(p.r * p.D / Q)
    return p.epsilon + p.g * k + surplus


def cycle_costs(p: ModelParameters, capacity: float, Q: float) -> CostBreakdown:
    _check_lot(Q)
    _check_capacity(capacity)
    return CostBreakdown(
        c1=co2_per_cycle(p, Q) * p.Ce,
        c2=2 * p.beta * p.d / p.v,
        c3=p.gamma0 + p.gamma * Q * (p.theta + p.alpha),
        c4=p.Cp * capacity,
        c5=p.A + p.c * Q + p.h * Q * Q / (2 * p.D),
        c6=2 * p.a + p.b * p.d * Q * (1 + p.alpha),
        cycle_length=Q / p.D,
        saturation=Q / capacity,
    )


def _fixed_per_order(p: ModelParameters, capacity: float) -> float:
    # every per-order charge except the emissions surplus term
    return (
        p.epsilon * p.Ce
        + 2 * p.beta * p.d / p.v
        + p.gamma0
        + p.Cp * capacity
        + p.A
        + 2 * p.a
    )


def _linear_rate(p: ModelParameters) -> float:
    # Q-independent part of the cost rate, without the Taylor constant
    return p.gamma * (p.theta + p.alpha) * p.D + p.c * p.D + p.b * p.d * p.D * (1 + p.alpha)


def total_cost_exact(p: ModelParameters, capacity: float, Q: float) -> float:
    """Total cost per unit of time with the exponential emissions term kept."""
    _check_lot(Q)
    _check_capacity(capacity)
    emissions = (
        p.epsilon * p.D / Q + p.g * Q / 2 + surplus_emissions(p.l, p.r, p.D, Q)
    ) * p.Ce
    return (
        emissions
        + 2 * p.beta * p.d / p.v * p.D / Q
        + p.gamma0 * p.D / Q
        + p.gamma * Q * (p.theta + p.alpha) * p.D / Q
        + p.Cp * capacity * p.D / Q
        + p.A * p.D / Q
        + p.c * Q * p.D / Q
        + p.h * Q / 2
        + 2 * p.a * p.D / Q
        + p.b * p.d * p.D * (1 + p.alpha)
    )


def total_cost_approx(p: ModelParameters, capacity: float, Q: float) -> float:
    """Total cost per unit of time with the surplus term replaced by its Taylor truncation."""
    _check_lot(Q)
    _check_capacity(capacity)
    emissions = (
        p.epsilon * p.D / Q + p.g * Q / 2 + surplus_emissions_taylor(p.l, p.r, p.D, Q)
    ) * p.Ce
    return (
        emissions
        + 2 * p.beta * p.d / p.v * p.D / Q
        + p.gamma0 * p.D / Q
        + p.gamma * Q * (p.theta + p.alpha) * p.D / Q
        + p.Cp * capacity * p.D / Q
        + p.A * p.D / Q
        + p.c * Q * p.D / Q
        + p.h * Q / 2
        + 2 * p.a * p.D / Q
        + p.b * p.d * p.D * (1 + p.alpha)
    )


def derived_coefficients(p: ModelParameters, capacity: float) -> tuple[float, float, float]:
    """Coefficients ``(K', h', w)`` with ``approx cost = K' D/Q + h' Q/2 + w``."""
    _check_capacity(capacity)
    k_prime = _fixed_per_order(p, capacity) + p.l * p.r**2 * p.D * p.Ce / 4
    h_prime = p.holding_rate
    w = p.l / 2 * p.r * p.D * p.Ce + _linear_rate(p)
    return k_prime, h_prime, w


def total_cost_approx_derivative(p: ModelParameters, capacity: float, Q: float) -> float:
    _check_lot(Q)
    _check_capacity(capacity)
    D, Ce = p.D, p.Ce
    return (
        -p.epsilon * D * Ce / Q**2
        + p.g * Ce / 2
        + p.l * Ce / 2
        - p.l * p.r**2 * D**2 * Ce / (4 * Q**2)
        - 2 * p.beta * p.d * D / (p.v * Q**2)
        - p.gamma0 * D / Q**2
        - p.Cp * capacity * D / Q**2
        - p.A * D / Q**2
        + p.h / 2
        - 2 * p.a * D / Q**2
    )


def exp_lot_derivative(k_order: float, k_hold: float, k_surplus: float, rD: float, D: float, Q: float) -> float:
    """Derivative of ``k_order D/Q + k_hold Q/2 + k_surplus (Q/2) exp(rD/Q)``.

    Every exact cost rate in this package has that shape, up to a constant.
    Returns ``-inf`` where the exponential overflows, which only happens far
    left of the minimizer.
    """
    x = rD / Q
    slope = -k_order * D / Q**2 + k_hold / 2
    if k_surplus == 0 or x == 0:
        return slope + k_surplus / 2
    factor = _exp_factor(x)
    if math.isinf(factor):
        return -math.inf if x > 1 else math.inf
    return slope + k_surplus / 2 * factor * (1 - x)


def total_cost_exact_derivative(p: ModelParameters, capacity: float, Q: float) -> float:
    _check_lot(Q)
    _check_capacity(capacity)
    return exp_lot_derivative(
        _fixed_per_order(p, capacity),
        p.g * p.Ce + p.h,
        p.l * p.Ce,
        p.r * p.D,
        p.D,
        Q,
    )


def environmental_cost(p: ModelParameters, Q: float) -> float:
    """Environmental cost rate: emissions, transport emissions and waste disposal.

    The container charge is excluded, so the rate does not depend on capacity.
    """
    _check_lot(Q)
    return (
        co2_rate(p, Q) * p.Ce
        + 2 * p.beta * p.d / p.v * p.D / Q
        + (p.gamma0 + p.gamma * Q * (p.theta + p.alpha)) * p.D / Q
    )


def environmental_coefficients(p: ModelParameters) -> tuple[float, float, float]:
    """``(per-order, holding, surplus)`` coefficients of :func:`environmental_cost`."""
    return (
        p.epsilon * p.Ce + 2 * p.beta * p.d / p.v + p.gamma0,
        p.g * p.Ce,
        p.l * p.Ce,
    )


def exact_coefficients(p: ModelParameters, capacity: float) -> tuple[float, float, float]:
    """``(per-order, holding, surplus)`` coefficients of :func:`total_cost_exact`."""
    _check_capacity(capacity)
    return _fixed_per_order(p, capacity), p.g * p.Ce + p.h, p.l * p.Ce
