"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import math
import random

import networkx as nx

from skyway.composition import DeliveryQuery, count_feasible_paths
from skyway.congestion import StationLoadProfile, StationProfiles
from skyway.fleet import DEFAULT_FLEET, DroneSpec, block_nested_loop
from skyway.harness import ExperimentConfig
from skyway.harness.experiment import station_profiles
from skyway.network import NodeRecord, Segment, SkywayNetwork

# 60 km/h, so with no payload one kilometre takes exactly one minute.
MINUTE_DRONE = DroneSpec("Fixture-60", 2.0, 100.0, 100.0, 60.0, 100.0, 100.0)


def network_from_edges(edges, pads=3, coords=None) -> SkywayNetwork:
    """Build a network from ``(u, v, length_m)`` triples."""
    ids = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges})
    coords = coords or {}
    nodes = [NodeRecord(i, *coords.get(i, (float(i), 0.0)), pad_count=pads) for i in ids]
    segs = [Segment(k, u, v, float(length)) for k, (u, v, length) in enumerate(edges)]
    return SkywayNetwork(nodes, segs)


def triangle() -> SkywayNetwork:
    """source 0, middle 1, destination 2: direct 10 min, via middle 4 + 5 min."""
    return network_from_edges([(0, 2, 10_000), (0, 1, 4_000), (1, 2, 5_000)])


# Twelve stations, source 1, destination 12. Lengths in km equal the
# service minutes for MINUTE_DRONE carrying nothing. Composition 1 is
# 1-2-5-9-12 = 30 + 20 + 25 + 20 = 95 minutes.
TWELVE_EDGES_KM = [
    (1, 2, 30), (2, 5, 20), (5, 9, 25), (9, 12, 20),  # composition 1: 95
    (1, 3, 25), (3, 6, 25), (6, 10, 25), (10, 12, 25),  # composition 2: 100
    (1, 4, 35), (4, 7, 25), (7, 11, 20), (11, 12, 25),  # composition 3: 105
    (2, 6, 22), (5, 8, 15), (8, 9, 18), (3, 7, 33), (6, 9, 30), (8, 11, 24),
]
TWELVE_COMPOSITION_1 = (1, 2, 5, 9, 12)


def twelve_station_network() -> SkywayNetwork:
    return network_from_edges([(u, v, km * 1000) for u, v, km in TWELVE_EDGES_KM])


def random_connected_network(n: int, seed: int, extra_p: float = 0.2, side: float = 15_000.0) -> SkywayNetwork:
    """Random geometric graph: a random spanning tree plus each other pair
    with probability ``extra_p``. Pads vary 1..4 per station."""
    rng = random.Random(seed)
    pos = [(rng.uniform(0, side), rng.uniform(0, side)) for _ in range(n)]
    pairs = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < extra_p:
                pairs.add((u, v))
    nodes = [NodeRecord(i, *pos[i], pad_count=rng.randint(1, 4)) for i in range(n)]
    segs = [Segment(k, u, v, math.dist(pos[u], pos[v])) for k, (u, v) in enumerate(sorted(pairs))]
    return SkywayNetwork(nodes, segs)


def random_profiles(net: SkywayNetwork, seed: int, max_rate: float = 6.0) -> StationProfiles:
    rng = random.Random(seed)
    return StationProfiles(by_node={
        v: StationLoadProfile.constant(rng.uniform(0.0, max_rate), rng.uniform(10.0, 40.0), v, seed)
        for v in net.node_ids
    })


def corpus_instance(seed: int, n_range=(8, 12)):
    """One seeded (network, profiles, query, path_count) with at least one feasible path."""
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    # stations as the benchmark harness builds them: default pads and
    # baseline load with the default per-station rate jitter
    config = ExperimentConfig()
    net = random_connected_network(n, seed).with_pads(config.pads_per_station)
    profiles = station_profiles(net, config, seed + 10_000)
    weight = rng.uniform(0.0, 1.45)
    drone = block_nested_loop(DEFAULT_FLEET, weight)
    while True:
        a, b = rng.sample(net.node_ids, 2)
        query = DeliveryQuery(a, b, rng.uniform(0.0, 1440.0), weight)
        count = count_feasible_paths(net, query, drone)
        if count:
            return net, profiles, query, count


def random_drone(rng: random.Random, i: int) -> DroneSpec:
    speed = rng.choice(range(40, 101, 5))
    flight_time = rng.choice(range(15, 46, 3))
    return DroneSpec(
        model=f"D{i:03d}",
        payload_capacity=round(rng.uniform(0.5, 5.0), 1),
        max_flight_time=float(flight_time),
        flight_range=round(speed * flight_time / 60.0 * rng.uniform(0.7, 1.0), 0) or 1.0,
        max_speed=float(speed),
        full_recharge_duration=float(rng.choice(range(60, 181, 15))),
        battery_capacity=float(rng.choice(range(100, 501, 50))),
    )


def random_fleet(seed: int, size: int) -> list[DroneSpec]:
    rng = random.Random(seed)
    return [random_drone(rng, i) for i in range(size)]


# -- oracles ----------------------------------------------------------------


def brute_force_selection(fleet, w, to_min, to_max, to_sel):
    """O(n^2) skyline by direct field comparison, then argmax with model tie-break."""
    feasible = [d for d in fleet if d.payload_capacity >= w]

    def dominated_by(a, b):
        no_worse = all(getattr(b, f) <= getattr(a, f) for f in to_min) and all(
            getattr(b, f) >= getattr(a, f) for f in to_max
        )
        strictly = any(getattr(b, f) < getattr(a, f) for f in to_min) or any(
            getattr(b, f) > getattr(a, f) for f in to_max
        )
        return no_worse and strictly

    sky = [a for a in feasible if not any(dominated_by(a, b) for b in feasible)]
    if not sky:
        return sky, None
    if to_sel in to_max:
        best = max(getattr(d, to_sel) for d in sky)
    else:
        best = min(getattr(d, to_sel) for d in sky)
    winner = sorted((d for d in sky if getattr(d, to_sel) == best), key=lambda d: d.model)[0]
    return sky, winner


def nx_paths(net: SkywayNetwork, source: int, target: int, allowed=None):
    """All simple paths via networkx; ``allowed(u, v)`` filters segments."""
    g = nx.Graph()
    g.add_nodes_from(net.node_ids)
    for seg in net.segments.values():
        if allowed is None or allowed(seg):
            g.add_edge(seg.endpoint_a, seg.endpoint_b)
    if source == target:
        return [(source,)]
    return [tuple(p) for p in nx.all_simple_paths(g, source, target)]
