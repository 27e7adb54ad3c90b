"""Exhaustive vs. top-k benchmark runs over extracted subnetworks."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..composition import DeliveryQuery, base_comps, exhaustive_composition, top_k_composition
from ..congestion import StationLoadProfile, StationProfiles, load_profiles
from ..errors import UnreachableDestinationError
from ..fleet import DEFAULT_FLEET, DroneSpec, block_nested_loop, load_drones
from ..network import SkywayNetwork, extract_subnetwork, load_network, road_network
from .config import ExperimentConfig

log = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class MetricsRecord:
    method: str
    node_count: int
    run: int
    execution_time: float  # ms, wall clock
    delivery_time: float  # minutes (T_n)
    distance: float  # km
    seed: int
    source: int = -1
    destination: int = -1
    parallelism: int = 1


def method_label(k: int) -> str:
    return f"top-{k}"


def method_rank(method: str) -> tuple[int, int]:
    """Sort key: exhaustive first, then top-k by k."""
    if method == EXHAUSTIVE:
        return (0, 0)
    return (1, int(method.split("-", 1)[1]))


def derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1, dtype=np.uint64)[0])


def station_profiles(net: SkywayNetwork, config: ExperimentConfig, seed: int,
                     overrides: StationProfiles | None = None) -> StationProfiles:
    """Baseline profile per station with a seeded rate multiplier.

    Stations listed in ``overrides`` keep their own profile.
    """
    rng = random.Random(seed)
    by_node = {}
    spread = config.rate_spread
    for node in net.node_ids:
        factor = 1.0 + rng.uniform(-spread, spread)
        by_node[node] = StationLoadProfile.constant(
            config.baseline_rate * factor, config.baseline_occupancy, node_id=node, seed=derive_seed(seed, node)
        )
    if overrides is not None:
        by_node.update({n: p for n, p in overrides.by_node.items() if n in net})
    return StationProfiles(config.baseline_profile, by_node, config.saturation_cap)


def draw_query(net: SkywayNetwork, fleet: Sequence[DroneSpec], config: ExperimentConfig,
               seed: int) -> DeliveryQuery | None:
    """Seeded (source, destination, start) draw, redrawn while unreachable."""
    rng = random.Random(seed)
    ids = net.node_ids
    drone = block_nested_loop(fleet, config.payload_kg)
    for _ in range(config.max_retries):
        source, dest = rng.sample(ids, 2)
        query = DeliveryQuery(source, dest, rng.uniform(0.0, 1440.0), config.payload_kg)
        try:
            base_comps(net, query, 1, drone, config.energy_params)
        except UnreachableDestinationError:
            continue
        return query
    return None


def _timed(fn, *args, **kwargs):
    start = time.perf_counter_ns()
    result = fn(*args, **kwargs)
    return result, (time.perf_counter_ns() - start) / 1e6


def execute_run(net: SkywayNetwork, fleet: Sequence[DroneSpec], profiles: StationProfiles,
                config: ExperimentConfig, node_count: int, run: int, seed: int,
                parallelism: int = 1) -> list[MetricsRecord]:
    query = draw_query(net, fleet, config, seed)
    if query is None:
        log.warning("node_count=%d run=%d seed=%d: no reachable pair after %d draws, skipped",
                    node_count, run, seed, config.max_retries)
        return []
    params = config.energy_params
    max_hops = config.max_hops or None
    records = []

    def record(method, plan, ms):
        records.append(MetricsRecord(method, node_count, run, ms, plan.extended_time, plan.distance,
                                     seed, query.source, query.destination, parallelism))

    plan, ms = _timed(exhaustive_composition, net, fleet, query, profiles, None, params, max_hops)
    record(EXHAUSTIVE, plan, ms)
    for k in config.k_values:
        plans, ms = _timed(top_k_composition, net, fleet, query, k, profiles, None, params)
        record(method_label(k), plans[0], ms)
    return records


def _execute(args):
    return execute_run(*args)


def run_experiment(config: ExperimentConfig, network: SkywayNetwork,
                   fleet: Sequence[DroneSpec]) -> list[MetricsRecord]:
    """Run every (node_count, run) pair; records come back ordered by
    ``(node_count, run, method)`` whatever the execution order."""
    overrides = load_profiles(config.profiles_file) if config.profiles_file else None
    tasks = []
    for n in config.node_counts:
        sub = extract_subnetwork(network, n, derive_seed(config.master_seed, n, 0))
        sub = sub.with_pads(config.pads_per_station)
        profiles = station_profiles(sub, config, derive_seed(config.master_seed, n, 1), overrides)
        runs = math.ceil(config.runs_fraction * n)
        for run in range(runs):
            seed = derive_seed(config.master_seed, n, 2, run)
            tasks.append((sub, fleet, profiles, config, n, run, seed, config.workers))

    records: list[MetricsRecord] = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for batch in pool.map(_execute, tasks):
                records.extend(batch)
    else:
        for task in tasks:
            records.extend(_execute(task))
    records.sort(key=lambda r: (r.node_count, r.run, method_rank(r.method)))
    return records


def load_inputs(config: ExperimentConfig) -> tuple[SkywayNetwork, list[DroneSpec]]:
    """Source network and fleet named by the config, or the built-in defaults."""
    if config.nodes_file and config.edges_file:
        network = load_network(config.nodes_file, config.edges_file)
    else:
        network = road_network(
            config.network_size, derive_seed(config.master_seed, 99), extra_edge_prob=config.network_edge_prob
        )
    fleet = load_drones(config.drones_file) if config.drones_file else list(DEFAULT_FLEET)
    return network, fleet
