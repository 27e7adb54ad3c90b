"""Probabilistic pad availability at recharging stations.

Each station is an M/M/c queue: ``c`` pads, Poisson arrivals of other
drones at the time-of-day rate ``lambda(t)``, exponential pad holding with
mean ``mean_occupancy_duration``. :func:`probability_wait_recharge` gives
the Erlang-C answer; :func:`simulate_station` is an independent
discrete-event check of the same queue.
"""

from __future__ import annotations

import bisect
import csv
import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractViolation, IntegrityError, ParseError

MINUTES_PER_DAY = 1440.0
DEFAULT_SATURATION_CAP = 240.0

PROFILE_HEADER = ("node_id", "breakpoint_min", "rate_per_hour", "mean_occupancy_min", "seed")


@dataclass(frozen=True)
class StationLoadProfile:
    """Piecewise-constant arrival rate over one day.

    ``schedule`` holds ``(start_minute, drones_per_hour)`` breakpoints; the
    first must start at minute 0 and starts must strictly increase.
    """

    node_id: int | None
    schedule: tuple[tuple[float, float], ...]
    mean_occupancy_duration: float  # minutes
    seed: int = 0

    def __post_init__(self):
        sched = tuple((float(s), float(r)) for s, r in self.schedule)
        object.__setattr__(self, "schedule", sched)
        if not sched or sched[0][0] != 0.0:
            raise IntegrityError(f"profile {self.node_id}: schedule must start at minute 0")
        starts = [s for s, _ in sched]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise IntegrityError(f"profile {self.node_id}: breakpoints must strictly increase")
        if starts[-1] >= MINUTES_PER_DAY:
            raise IntegrityError(f"profile {self.node_id}: breakpoint {starts[-1]} outside [0, 1440)")
        if any(not (r >= 0 and math.isfinite(r)) for _, r in sched):
            raise IntegrityError(f"profile {self.node_id}: rates must be finite and >= 0")
        if not self.mean_occupancy_duration >= 0:
            raise IntegrityError(f"profile {self.node_id}: mean occupancy must be >= 0")

    @classmethod
    def constant(cls, rate_per_hour: float, mean_occupancy: float, node_id: int | None = None, seed: int = 0):
        return cls(node_id, ((0.0, rate_per_hour),), mean_occupancy, seed)

    def rate_at(self, minute: float) -> float:
        """Arrival rate (drones/hour) at a time of day; wraps modulo one day."""
        t = minute % MINUTES_PER_DAY
        idx = bisect.bisect_right([s for s, _ in self.schedule], t) - 1
        return self.schedule[idx][1]

    def is_idle(self) -> bool:
        return self.mean_occupancy_duration == 0 or all(r == 0 for _, r in self.schedule)


@dataclass(frozen=True)
class CongestionEstimate:
    pr: float
    wait: float  # minutes, conditional on having to wait
    recharge: float  # minutes

    @property
    def expected_delay(self) -> float:
        return self.pr * (self.recharge + self.wait)


@dataclass
class StationProfiles:
    """Per-node load profiles with a fallback for unlisted stations."""

    default: StationLoadProfile = field(
        default_factory=lambda: StationLoadProfile.constant(4.0, 30.0)
    )
    by_node: Mapping[int, StationLoadProfile] = field(default_factory=dict)
    saturation_cap: float = DEFAULT_SATURATION_CAP

    def get(self, node_id: int) -> StationLoadProfile:
        return self.by_node.get(node_id, self.default)

    @classmethod
    def idle(cls) -> "StationProfiles":
        return cls(default=StationLoadProfile.constant(0.0, 0.0))


def erlang_b(servers: int, offered_load: float) -> float:
    """Blocking probability of an M/M/c/c system, by the stable recursion."""
    b = 1.0
    for k in range(1, servers + 1):
        b = offered_load * b / (k + offered_load * b)
    return b


def erlang_c(servers: int, offered_load: float) -> float:
    """Probability that an arrival finds all ``servers`` busy (needs
    ``offered_load < servers``)."""
    if servers < 1:
        raise ContractViolation("servers must be >= 1")
    if offered_load <= 0:
        return 0.0
    if offered_load >= servers:
        return 1.0
    b = erlang_b(servers, offered_load)
    return servers * b / (servers - offered_load * (1.0 - b))


def probability_wait_recharge(
    profile: StationLoadProfile,
    pads: int,
    arrival_time: float,
    recharge_needed: float,
    saturation_cap: float = DEFAULT_SATURATION_CAP,
) -> CongestionEstimate:
    """Congestion triple ``(Pr, W, R)`` for a drone reaching a station.

    ``pr`` is the Erlang-C all-pads-busy probability at the arrival
    instant's rate and ``wait`` the mean delay of a drone that does wait,
    ``E[S] / (c - a)``, clipped at ``saturation_cap``. An unstable station
    (offered load per pad >= 1) reports ``pr = 1`` and the cap.
    """
    if pads < 1:
        raise ContractViolation(f"pads must be >= 1, got {pads}")
    if recharge_needed < 0:
        raise ContractViolation(f"recharge_needed must be >= 0, got {recharge_needed}")
    lam = profile.rate_at(arrival_time) / 60.0
    mean_service = profile.mean_occupancy_duration
    offered = lam * mean_service
    if offered <= 0:
        return CongestionEstimate(0.0, 0.0, recharge_needed)
    if offered >= pads:
        return CongestionEstimate(1.0, saturation_cap, recharge_needed)
    pr = erlang_c(pads, offered)
    if pr == 0.0:  # underflow at vanishing load
        return CongestionEstimate(0.0, 0.0, recharge_needed)
    wait = min(saturation_cap, mean_service / (pads - offered))
    return CongestionEstimate(pr, wait, recharge_needed)


def simulate_station(
    profile: StationLoadProfile,
    pads: int,
    horizon: float,
    samples: int,
    at_minute: float | None = None,
) -> tuple[float, float]:
    """Seeded FCFS simulation of the station queue.

    Arrivals during the first ``horizon`` minutes warm the queue up and are
    not counted; the next ``samples`` arrivals are measured. Returns the
    share of measured arrivals that found every pad busy and their mean
    wait. With ``at_minute`` set the rate is frozen at ``lambda(at_minute)``;
    otherwise the daily schedule is followed.
    """
    if samples < 1:
        raise ContractViolation("samples must be >= 1")
    if pads < 1:
        raise ContractViolation("pads must be >= 1")
    if at_minute is not None:
        schedule: Sequence[tuple[float, float]] = ((0.0, profile.rate_at(at_minute)),)
    else:
        schedule = profile.schedule
    if profile.is_idle() or all(r == 0 for _, r in schedule):
        return 0.0, 0.0

    rng = np.random.default_rng(profile.seed)
    arrivals = _arrival_times(schedule, horizon, samples, rng)
    services = rng.exponential(profile.mean_occupancy_duration, size=len(arrivals))

    free_at = [0.0] * pads
    busy_hits = 0
    wait_sum = 0.0
    measured = 0
    for t, s in zip(arrivals.tolist(), services.tolist()):
        earliest = free_at[0]
        start = earliest if earliest > t else t
        heapq.heapreplace(free_at, start + s)
        if t >= horizon:
            measured += 1
            if earliest > t:
                busy_hits += 1
                wait_sum += earliest - t
    if measured == 0:
        return 0.0, 0.0
    return busy_hits / measured, (wait_sum / busy_hits if busy_hits else 0.0)


def _arrival_times(schedule, horizon: float, samples: int, rng: np.random.Generator) -> np.ndarray:
    if len(schedule) == 1:
        rate = schedule[0][1] / 60.0
        # overshoot the warm-up count, then trim
        n = samples + int(horizon * rate * 1.2) + 100
        times = np.cumsum(rng.exponential(1.0 / rate, size=n))
        while np.count_nonzero(times >= horizon) < samples:
            more = times[-1] + np.cumsum(rng.exponential(1.0 / rate, size=n))
            times = np.concatenate([times, more])
        keep = np.searchsorted(times, horizon) + samples
        return times[:keep]

    starts = [s for s, _ in schedule]
    out = []
    t = 0.0
    counted = 0
    while counted < samples:
        day, tod = divmod(t, MINUTES_PER_DAY)
        idx = bisect.bisect_right(starts, tod) - 1
        end = starts[idx + 1] if idx + 1 < len(starts) else MINUTES_PER_DAY
        rate = schedule[idx][1] / 60.0
        piece_end = day * MINUTES_PER_DAY + end
        if rate == 0:
            t = piece_end
            continue
        nxt = t + rng.exponential(1.0 / rate)
        if nxt >= piece_end:
            t = piece_end  # memoryless: restart the clock at the breakpoint
            continue
        t = nxt
        out.append(t)
        if t >= horizon:
            counted += 1
    return np.asarray(out)


def load_profiles(
    path: str | Path,
    default: StationLoadProfile | None = None,
    saturation_cap: float = DEFAULT_SATURATION_CAP,
) -> StationProfiles:
    """Read per-station schedules; each node may span several rows."""
    path = Path(path)
    rows: dict[int, list[tuple[int, float, float, float, int]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(c.strip() for c in next(reader, ()))
        if header != PROFILE_HEADER:
            raise ParseError(str(path), 1, f"expected header {','.join(PROFILE_HEADER)}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(PROFILE_HEADER):
                raise ParseError(str(path), reader.line_num, f"expected {len(PROFILE_HEADER)} fields")
            try:
                node, bp, rate, occ, seed = (
                    int(row[0]), float(row[1]), float(row[2]), float(row[3]), int(row[4])
                )
            except ValueError as exc:
                raise ParseError(str(path), reader.line_num, str(exc)) from None
            rows.setdefault(node, []).append((reader.line_num, bp, rate, occ, seed))

    by_node = {}
    for node, entries in rows.items():
        entries.sort(key=lambda e: e[1])
        occ, seed = entries[0][3], entries[0][4]
        for line, _, _, o, s in entries:
            if (o, s) != (occ, seed):
                raise ParseError(str(path), line, f"node {node}: occupancy/seed differ between rows")
        try:
            by_node[node] = StationLoadProfile(node, tuple((e[1], e[2]) for e in entries), occ, seed)
        except IntegrityError as exc:
            raise ParseError(str(path), entries[0][0], str(exc)) from None
    kwargs = {"by_node": by_node, "saturation_cap": saturation_cap}
    if default is not None:
        kwargs["default"] = default
    return StationProfiles(**kwargs)


def save_profiles(profiles: Iterable[StationLoadProfile], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PROFILE_HEADER)
        for p in profiles:
            for start, rate in p.schedule:
                writer.writerow([p.node_id, repr(start), repr(rate), repr(p.mean_occupancy_duration), p.seed])
