"""Top-k drone service composition.

Phase 1 finds the ``k`` feasible loopless paths with the smallest total
service time (Yen's algorithm over per-segment flight times). Phase 2
walks each path leg by leg, adds the probability-weighted wait and
recharge delay at every intermediate station,

    T_n = S_n + sum_i Pr_i * (R_i + W_i),

and re-ranks. :func:`exhaustive_composition` scores every feasible simple
path the same way and serves as the exact baseline.

Ordering everywhere is ``(time, number of legs, node sequence)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Sequence

from .congestion import CongestionEstimate, StationProfiles, probability_wait_recharge, MINUTES_PER_DAY
from .errors import (
    ContractViolation,
    InfeasiblePlanError,
    NodeNotFoundError,
    SegmentInfeasibleError,
    UnreachableDestinationError,
)
from .fleet import DroneSpec, QualityDirectionConfig, block_nested_loop
from .network import Segment, SkywayNetwork
from .servicemodel import (
    DEFAULT_PARAMS,
    DroneState,
    EnergyModelParams,
    energy_consumption,
    partial_recharge_time,
    segment_feasible,
    service_time,
)


@dataclass(frozen=True)
class DeliveryQuery:
    source: int
    destination: int
    start_time: float  # minutes of day
    weight: float  # kg

    def __post_init__(self):
        if self.weight < 0:
            raise ContractViolation(f"package weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class Leg:
    segment: Segment
    start: int
    end: int
    service_time: float  # minutes
    energy: float  # battery fraction
    end_pads: int


@dataclass(frozen=True)
class CompositionPlan:
    nodes: tuple[int, ...]
    legs: tuple[Leg, ...]
    drone: DroneSpec
    weight: float
    base_time: float  # S_n
    distance: float  # km
    extended_time: float | None = None  # T_n
    estimates: tuple[CongestionEstimate, ...] | None = None
    recharge_total: float | None = None
    wait_total: float | None = None
    final_battery: float | None = None

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def destination(self) -> int:
        return self.nodes[-1]

    @property
    def deterministic_time(self) -> float | None:
        """``S_n + R_n + W_n``: every intermediate station charged and waited in full."""
        if self.recharge_total is None:
            return None
        return self.base_time + self.recharge_total + self.wait_total

    def to_dict(self) -> dict:
        out = {
            "nodes": list(self.nodes),
            "drone": self.drone.model,
            "leg_times_min": [leg.service_time for leg in self.legs],
            "leg_energy": [leg.energy for leg in self.legs],
            "service_time_min": self.base_time,
            "delivery_time_min": self.extended_time,
            "distance_km": self.distance,
        }
        if self.estimates is not None:
            out["stations"] = [
                {"node": leg.end, "pr": e.pr, "wait_min": e.wait, "recharge_min": e.recharge}
                for leg, e in zip(self.legs, self.estimates)
            ]
            out["recharge_total_min"] = self.recharge_total
            out["wait_total_min"] = self.wait_total
            out["deterministic_time_min"] = self.deterministic_time
        return out


def plan_key(plan: CompositionPlan, time: float) -> tuple:
    return (time, len(plan.legs), plan.nodes)


# -- feasible service graph -------------------------------------------------

_Edge = tuple[Segment, float, float]  # segment, minutes, battery fraction


def service_graph(
    net: SkywayNetwork, drone: DroneSpec, weight: float, params: EnergyModelParams = DEFAULT_PARAMS
) -> dict[int, list[tuple[int, _Edge]]]:
    """Adjacency restricted to segments this drone can fly with ``weight``,
    neighbours in ascending id order."""
    adj: dict[int, list[tuple[int, _Edge]]] = {}
    for node in net.node_ids:
        out = []
        for other, seg in net.neighbors(node):
            energy = energy_consumption(seg, drone, weight, params)
            if segment_feasible(energy, params):
                out.append((other, (seg, service_time(seg, drone, weight, params), energy)))
        adj[node] = out
    return adj


def _make_plan(
    net: SkywayNetwork,
    adj: Mapping[int, list[tuple[int, _Edge]]],
    nodes: Sequence[int],
    drone: DroneSpec,
    weight: float,
) -> CompositionPlan:
    legs = []
    total = 0.0
    distance = 0.0
    for u, v in zip(nodes, nodes[1:]):
        edge = next((e for other, e in adj[u] if other == v), None)
        if edge is None:
            raise InfeasiblePlanError(f"no feasible segment between {u} and {v}")
        seg, minutes, energy = edge
        legs.append(Leg(seg, u, v, minutes, energy, net.pads(v)))
        total += minutes
        distance += seg.length_km
    return CompositionPlan(tuple(nodes), tuple(legs), drone, weight, total, distance)


def _path_cost(adj, path: Sequence[int]) -> float:
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += next(e[1] for other, e in adj[u] if other == v)
    return total


def _best_path(adj, source: int, target: int, banned_nodes, banned_edges) -> tuple[int, ...] | None:
    """Dijkstra returning the minimum path under ``(cost, hops, sequence)``."""
    heap = [(0.0, 0, (source,))]
    settled = set()
    while heap:
        cost, hops, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == target:
            return path
        for other, (_, minutes, _) in adj[node]:
            if other in settled or other in banned_nodes or (node, other) in banned_edges:
                continue
            heapq.heappush(heap, (cost + minutes, hops + 1, path + (other,)))
    return None


def yen_k_shortest(adj, source: int, target: int, k: int) -> list[tuple[int, ...]]:
    """Up to ``k`` loopless ``source -> target`` paths, shortest first."""
    first = _best_path(adj, source, target, frozenset(), frozenset())
    if first is None:
        return []
    accepted = [first]
    seen = {first}
    candidates: list[tuple[float, int, tuple[int, ...]]] = []
    while len(accepted) < k:
        prev = accepted[-1]
        for i in range(len(prev) - 1):
            root = prev[: i + 1]
            banned_edges = {
                (p[i], p[i + 1]) for p in accepted if len(p) > i + 1 and p[: i + 1] == root
            }
            spur = _best_path(adj, prev[i], target, set(root[:-1]), banned_edges)
            if spur is None:
                continue
            path = root[:-1] + spur
            if path not in seen:
                seen.add(path)
                heapq.heappush(candidates, (_path_cost(adj, path), len(path), path))
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates)[2])
    return accepted


# -- phase 1 ----------------------------------------------------------------


def _check_query(net: SkywayNetwork, query: DeliveryQuery) -> None:
    for node in (query.source, query.destination):
        if node not in net:
            raise NodeNotFoundError(f"unknown node {node}")


def base_comps(
    net: SkywayNetwork,
    query: DeliveryQuery,
    k: int,
    drone: DroneSpec,
    params: EnergyModelParams = DEFAULT_PARAMS,
) -> list[CompositionPlan]:
    """Phase 1: the ``k`` feasible paths with the least total service time,
    ranked by ``S_n``. Congestion is ignored (pads always free)."""
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    _check_query(net, query)
    adj = service_graph(net, drone, query.weight, params)
    paths = yen_k_shortest(adj, query.source, query.destination, k)
    if not paths:
        raise UnreachableDestinationError(
            f"{drone.model} cannot reach node {query.destination} from {query.source}"
        )
    plans = [_make_plan(net, adj, p, drone, query.weight) for p in paths]
    return rank_comps(plans, [p.base_time for p in plans])


def rank_comps(plans: Sequence[CompositionPlan], times: Sequence[float]) -> list[CompositionPlan]:
    if len(plans) != len(times):
        raise ContractViolation(f"{len(plans)} plans but {len(times)} times")
    order = sorted(range(len(plans)), key=lambda i: plan_key(plans[i], times[i]))
    return [plans[i] for i in order]


# -- phase 2 ----------------------------------------------------------------


def extend_with_congestion(
    plan: CompositionPlan,
    query: DeliveryQuery,
    profiles: StationProfiles,
    params: EnergyModelParams = DEFAULT_PARAMS,
) -> CompositionPlan:
    """Phase 2 for one plan: set ``T_n`` and the per-station estimates.

    The drone leaves the source fully charged. At each intermediate
    station it tops up just enough for the next leg plus reserve; the
    station is queried at the expected arrival instant ``qt_s + T``.
    Battery bookkeeping always uses the full recharge, whatever ``Pr``.
    """
    if plan.nodes[0] != query.source or plan.nodes[-1] != query.destination or plan.weight != query.weight:
        raise ContractViolation("plan was not built for this query")
    elapsed = 0.0
    battery = 1.0
    estimates = []
    recharge_total = 0.0
    wait_total = 0.0
    legs = plan.legs
    for j, leg in enumerate(legs):
        elapsed += leg.service_time
        battery -= leg.energy
        if battery < -1e-12:
            raise InfeasiblePlanError(f"battery exhausted on leg {leg.start}->{leg.end}")
        battery = max(battery, 0.0)
        if j + 1 == len(legs):
            break
        try:
            minutes, battery = partial_recharge_time(
                plan.drone, DroneState(battery, plan.weight), legs[j + 1].energy, params
            )
        except SegmentInfeasibleError as exc:
            raise InfeasiblePlanError(str(exc)) from None
        est = probability_wait_recharge(
            profiles.get(leg.end),
            leg.end_pads,
            (query.start_time + elapsed) % MINUTES_PER_DAY,
            minutes,
            profiles.saturation_cap,
        )
        elapsed += est.pr * (est.recharge + est.wait)
        estimates.append(est)
        recharge_total += est.recharge
        wait_total += est.wait
    return replace(
        plan,
        extended_time=elapsed,
        estimates=tuple(estimates),
        recharge_total=recharge_total,
        wait_total=wait_total,
        final_battery=battery,
    )


def top_k_composition(
    net: SkywayNetwork,
    fleet: Sequence[DroneSpec],
    query: DeliveryQuery,
    k: int,
    profiles: StationProfiles,
    cfg: QualityDirectionConfig | None = None,
    params: EnergyModelParams = DEFAULT_PARAMS,
) -> list[CompositionPlan]:
    """Select a drone, take the top-k plans by service time, extend them
    with congestion delays and return them re-ranked by delivery time."""
    drone = block_nested_loop(fleet, query.weight, cfg)
    ranked = base_comps(net, query, k, drone, params)
    extended = [extend_with_congestion(p, query, profiles, params) for p in ranked]
    return rank_comps(extended, [p.extended_time for p in extended])


# -- exhaustive baseline ----------------------------------------------------


def simple_paths(adj, source: int, target: int, max_hops: int) -> Iterator[tuple[int, ...]]:
    """Every simple path from ``source`` to ``target`` with at most
    ``max_hops`` segments, depth first in ascending neighbour order."""
    if source == target:
        yield (source,)
        return
    path = [source]
    on_path = {source}
    stack = [iter(adj[source])]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        other = nxt[0]
        if other in on_path:
            continue
        if other == target:
            yield tuple(path) + (other,)
            continue
        if len(path) < max_hops:
            path.append(other)
            on_path.add(other)
            stack.append(iter(adj[other]))


def count_feasible_paths(
    net: SkywayNetwork,
    query: DeliveryQuery,
    drone: DroneSpec,
    params: EnergyModelParams = DEFAULT_PARAMS,
    max_hops: int | None = None,
) -> int:
    adj = service_graph(net, drone, query.weight, params)
    hops = len(net) if max_hops is None else max_hops
    return sum(1 for _ in simple_paths(adj, query.source, query.destination, hops))


def exhaustive_composition(
    net: SkywayNetwork,
    fleet: Sequence[DroneSpec],
    query: DeliveryQuery,
    profiles: StationProfiles,
    cfg: QualityDirectionConfig | None = None,
    params: EnergyModelParams = DEFAULT_PARAMS,
    max_hops: int | None = None,
) -> CompositionPlan:
    """Minimum-``T_n`` plan over every feasible simple path."""
    _check_query(net, query)
    drone = block_nested_loop(fleet, query.weight, cfg)
    adj = service_graph(net, drone, query.weight, params)
    hops = len(net) if max_hops is None else max_hops
    best = None
    best_key = None
    for path in simple_paths(adj, query.source, query.destination, hops):
        plan = extend_with_congestion(_make_plan(net, adj, path, drone, query.weight), query, profiles, params)
        key = plan_key(plan, plan.extended_time)
        if best_key is None or key < best_key:
            best, best_key = plan, key
    if best is None:
        raise UnreachableDestinationError(
            f"{drone.model} cannot reach node {query.destination} from {query.source} "
            f"within {hops} hops"
        )
    return best
