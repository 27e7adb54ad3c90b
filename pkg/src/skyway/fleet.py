"""Drone QoS records and skyline-based drone selection."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigurationError, IntegrityError, NoCapableDroneError, ParseError

DRONE_HEADER = (
    "model",
    "payload_kg",
    "flight_time_min",
    "range_km",
    "speed_kmh",
    "recharge_min",
    "battery_wh",
)

RANGE_SLACK = 1.05


@dataclass(frozen=True)
class DroneSpec:
    model: str
    payload_capacity: float  # kg
    max_flight_time: float  # minutes
    flight_range: float  # km
    max_speed: float  # km/h
    full_recharge_duration: float  # minutes, 0% -> 100%
    battery_capacity: float  # Wh

    def __post_init__(self):
        for f in QUALITY_FIELDS:
            value = getattr(self, f)
            if not value > 0:
                raise IntegrityError(f"drone {self.model!r}: {f} must be positive, got {value}")
        reachable = self.max_speed * self.max_flight_time / 60.0 * RANGE_SLACK
        if self.flight_range > reachable:
            raise IntegrityError(
                f"drone {self.model!r}: range {self.flight_range} km exceeds "
                f"speed x flight time ({reachable:.3f} km incl. slack)"
            )


QUALITY_FIELDS = tuple(f.name for f in fields(DroneSpec) if f.name != "model")

# Table-1 drone of the reference experiments. Battery energy is not listed
# there; 195.2 Wh is two 97.6 Wh packs, the aircraft's stock configuration.
DJI_M200_V2 = DroneSpec("DJI M200 V2", 1.45, 24.0, 32.4, 81.0, 134.4, 195.2)

DEFAULT_FLEET = (
    DJI_M200_V2,
    DroneSpec("Courier-S", 0.8, 30.0, 36.0, 72.0, 90.0, 150.0),
    DroneSpec("Courier-M", 2.5, 28.0, 30.0, 68.0, 120.0, 230.0),
    DroneSpec("Courier-L", 5.0, 22.0, 24.0, 65.0, 150.0, 400.0),
    DroneSpec("Courier-X", 1.2, 35.0, 40.0, 70.0, 100.0, 180.0),
)


@dataclass(frozen=True)
class QualityDirectionConfig:
    """Which drone fields are costs, which are benefits, and which one picks
    the final drone from the skyline."""

    to_min: frozenset[str] = field(default_factory=lambda: frozenset({"full_recharge_duration"}))
    to_max: frozenset[str] = field(
        default_factory=lambda: frozenset(
            {"payload_capacity", "flight_range", "max_speed", "max_flight_time", "battery_capacity"}
        )
    )
    to_sel: str = "flight_range"

    def __post_init__(self):
        object.__setattr__(self, "to_min", frozenset(self.to_min))
        object.__setattr__(self, "to_max", frozenset(self.to_max))
        unknown = (self.to_min | self.to_max | {self.to_sel}) - set(QUALITY_FIELDS)
        if unknown:
            raise ConfigurationError(f"unknown drone quality field(s): {sorted(unknown)}")
        if self.to_min & self.to_max:
            raise ConfigurationError(
                f"fields both minimised and maximised: {sorted(self.to_min & self.to_max)}"
            )
        if self.to_sel not in self.to_min | self.to_max:
            raise ConfigurationError(f"selection field {self.to_sel!r} is neither minimised nor maximised")


def count_diff(a: DroneSpec, b: DroneSpec, cfg: QualityDirectionConfig) -> tuple[int, int]:
    """Return ``(better, worse)``: how many configured fields favour ``a``
    over ``b`` and vice versa. Ties count toward neither."""
    better = worse = 0
    try:
        for f in sorted(cfg.to_min):
            va, vb = getattr(a, f), getattr(b, f)
            better += va < vb
            worse += va > vb
        for f in sorted(cfg.to_max):
            va, vb = getattr(a, f), getattr(b, f)
            better += va > vb
            worse += va < vb
    except AttributeError as exc:
        raise ConfigurationError(str(exc)) from None
    return better, worse


def dominates(b: DroneSpec, a: DroneSpec, cfg: QualityDirectionConfig) -> bool:
    """True when ``b`` dominates ``a``: ``a`` is worse somewhere and better nowhere."""
    better, worse = count_diff(a, b, cfg)
    return worse > 0 and better == 0


def filter_by_payload(fleet: Iterable[DroneSpec], w: float) -> list[DroneSpec]:
    if w < 0:
        raise ValueError(f"package weight must be non-negative, got {w}")
    return [d for d in fleet if d.payload_capacity >= w]


def skyline(candidates: Sequence[DroneSpec], cfg: QualityDirectionConfig) -> list[DroneSpec]:
    """Block-nested-loop skyline, in order of first admission to the window.

    Each incoming drone is compared to the window; it is discarded if any
    window member dominates it, otherwise it evicts the members it
    dominates and joins. With an unbounded window a single pass suffices.
    """
    window: list[DroneSpec] = []
    for drone in candidates:
        dominated = False
        evict = []
        for i, held in enumerate(window):
            better, worse = count_diff(drone, held, cfg)
            if worse > 0 and better == 0:
                dominated = True
                break
            if better > 0 and worse == 0:
                evict.append(i)
        if dominated:
            continue
        for i in reversed(evict):
            del window[i]
        window.append(drone)
    return window


def block_nested_loop(
    fleet: Sequence[DroneSpec], w: float, cfg: QualityDirectionConfig | None = None
) -> DroneSpec:
    """Pick the delivery drone for a package of ``w`` kg.

    Keeps payload-capable drones, reduces them to their skyline, and
    returns the skyline member with the best ``cfg.to_sel`` value.
    Ties go to the lexicographically smallest model label.
    """
    cfg = cfg or QualityDirectionConfig()
    candidates = filter_by_payload(fleet, w)
    if not candidates:
        raise NoCapableDroneError(f"no drone can carry {w} kg")
    sky = skyline(candidates, cfg)
    sign = -1.0 if cfg.to_sel in cfg.to_max else 1.0
    return min(sky, key=lambda d: (sign * getattr(d, cfg.to_sel), d.model))


def load_drones(path: str | Path) -> list[DroneSpec]:
    path = Path(path)
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(c.strip() for c in next(reader, ()))
        if header != DRONE_HEADER:
            raise ParseError(str(path), 1, f"expected header {','.join(DRONE_HEADER)}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(DRONE_HEADER):
                raise ParseError(str(path), reader.line_num, f"expected {len(DRONE_HEADER)} fields")
            try:
                out.append(DroneSpec(row[0].strip(), *(float(c) for c in row[1:])))
            except (ValueError, IntegrityError) as exc:
                raise ParseError(str(path), reader.line_num, str(exc)) from None
    return out


def save_drones(fleet: Iterable[DroneSpec], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DRONE_HEADER)
        for d in fleet:
            writer.writerow([d.model] + [repr(float(getattr(d, f))) for f in QUALITY_FIELDS])
