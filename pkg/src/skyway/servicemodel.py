"""Flight time, battery use and partial recharging for one drone service.

Both flight models degrade linearly with the payload share of capacity:

    effective_speed = max_speed    * (1 - alpha * payload / capacity)
    effective_range = flight_range * (1 - beta  * payload / capacity)

Charging is linear in time at ``full_recharge_duration`` per full charge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, ContractViolation, InfeasibleServiceError, SegmentInfeasibleError
from .fleet import DroneSpec
from .network import Segment


@dataclass(frozen=True)
class EnergyModelParams:
    speed_payload_factor: float = 0.2  # alpha
    range_payload_factor: float = 0.3  # beta
    reserve_fraction: float = 0.1

    def __post_init__(self):
        for name in ("speed_payload_factor", "range_payload_factor"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1), got {value}")
        if not 0.0 <= self.reserve_fraction <= 0.5:
            raise ConfigurationError(f"reserve_fraction must lie in [0, 0.5], got {self.reserve_fraction}")

    @property
    def usable_fraction(self) -> float:
        return 1.0 - self.reserve_fraction


DEFAULT_PARAMS = EnergyModelParams()


@dataclass(frozen=True)
class DroneState:
    battery_fraction: float = 1.0
    payload: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.battery_fraction <= 1.0:
            raise ContractViolation(f"battery_fraction {self.battery_fraction} outside [0, 1]")


def _check_payload(drone: DroneSpec, payload: float) -> None:
    if payload < 0:
        raise ContractViolation(f"payload must be non-negative, got {payload}")
    if payload > drone.payload_capacity:
        raise InfeasibleServiceError(
            f"payload {payload} kg exceeds {drone.model} capacity {drone.payload_capacity} kg"
        )


def effective_speed(drone: DroneSpec, payload: float, params: EnergyModelParams = DEFAULT_PARAMS) -> float:
    _check_payload(drone, payload)
    return drone.max_speed * (1.0 - params.speed_payload_factor * payload / drone.payload_capacity)


def effective_range(drone: DroneSpec, payload: float, params: EnergyModelParams = DEFAULT_PARAMS) -> float:
    _check_payload(drone, payload)
    return drone.flight_range * (1.0 - params.range_payload_factor * payload / drone.payload_capacity)


def service_time(
    seg: Segment, drone: DroneSpec, payload: float, params: EnergyModelParams = DEFAULT_PARAMS
) -> float:
    """Minutes to fly ``seg`` carrying ``payload`` kg."""
    return seg.length_km * 60.0 / effective_speed(drone, payload, params)


def energy_consumption(
    seg: Segment, drone: DroneSpec, payload: float, params: EnergyModelParams = DEFAULT_PARAMS
) -> float:
    """Battery fraction spent on ``seg``. Values above the usable fraction
    mark the segment as infeasible for this drone; the caller decides."""
    return seg.length_km / effective_range(drone, payload, params)


def segment_feasible(energy: float, params: EnergyModelParams = DEFAULT_PARAMS) -> bool:
    return energy <= params.usable_fraction


def partial_recharge_time(
    drone: DroneSpec,
    state: DroneState,
    next_leg_energy: float,
    params: EnergyModelParams = DEFAULT_PARAMS,
) -> tuple[float, float]:
    """Charge just enough for the next leg plus the reserve.

    Returns ``(minutes, new_battery_fraction)``; no charging happens when
    the battery already covers the target.
    """
    if next_leg_energy < 0:
        raise ContractViolation(f"next_leg_energy must be non-negative, got {next_leg_energy}")
    if next_leg_energy + params.reserve_fraction > 1.0:
        raise SegmentInfeasibleError(
            f"{drone.model} needs {next_leg_energy:.3f} of a charge plus "
            f"{params.reserve_fraction} reserve for the next leg"
        )
    target = min(1.0, next_leg_energy + params.reserve_fraction)
    if state.battery_fraction >= target:
        return 0.0, state.battery_fraction
    return (target - state.battery_fraction) * drone.full_recharge_duration, target
